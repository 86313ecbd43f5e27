"""Large-sample covariance of a vector of smoothed quantiles.

For levels u_1..u_l on a design with d support points, the smoothed
quantile estimator is asymptotically normal with covariance H D H' / n:

* D is (d-1) x (d-1) with ``D[i, j] = F*_min(i,j) (1 - F*_max(i,j))``,
* H is l x (d-1) with ``H[i, j] = (y_j - y_{j+1}) b_i(F*_j)``, where b_i is
  the beta((d+1)u_i, (d+1)(1-u_i)) density.

Columns whose F*_j is exactly 0 or 1 have an all-zero row and column in
D, so they drop out of the product; they are skipped, which also avoids
evaluating b_i at a boundary where it may be infinite.
"""
from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import DomainError
from .smoothing import smoothed_quantile
from .special import beta_pdf
from .truncation import TruncationDesign

__all__ = [
    "QuantileCovariance",
    "d_matrix",
    "h_matrix",
    "hdh",
    "quantile_covariance",
    "normal_ci",
    "z_quantile",
]

PSD_TOL = 1e-10


def _interior(design: TruncationDesign) -> np.ndarray:
    f = design.f_star[:-1]
    return np.nonzero((f > 0.0) & (f < 1.0))[0]


def d_matrix(design: TruncationDesign) -> np.ndarray:
    """The (d-1) x (d-1) matrix of truncated-CDF covariances."""
    f = design.f_star[:-1]
    return np.minimum.outer(f, f) * (1.0 - np.maximum.outer(f, f))


def h_matrix(design: TruncationDesign, levels) -> np.ndarray:
    """The l x (d-1) gradient matrix; boundary columns (F* in {0, 1}) are zero."""
    levels = np.atleast_1d(np.asarray(levels, dtype=float))
    d = design.d
    gaps = design.support[:-1] - design.support[1:]
    idx = _interior(design)
    f = design.f_star[idx]
    h = np.zeros((levels.size, d - 1))
    for i, u in enumerate(levels):
        if not 0.0 < u < 1.0:
            raise DomainError(f"level {u} outside (0, 1)")
        h[i, idx] = gaps[idx] * beta_pdf(f, (d + 1) * u, (d + 1) * (1.0 - u))
    return h


def hdh(design: TruncationDesign, levels) -> np.ndarray:
    """H D H' (the covariance multiplied by n)."""
    idx = _interior(design)
    h = h_matrix(design, levels)[:, idx]
    dm = d_matrix(design)[np.ix_(idx, idx)]
    out = h @ dm @ h.T
    return (out + out.T) / 2.0


@dataclass(frozen=True)
class QuantileCovariance:
    levels: np.ndarray
    estimates: np.ndarray
    sigma: np.ndarray
    n: int

    @property
    def scaled(self) -> np.ndarray:
        """``n * sigma``, the H D H' matrix."""
        return self.sigma * self.n

    @property
    def standard_errors(self) -> np.ndarray:
        diag = np.diag(self.sigma)
        if np.any(diag < -PSD_TOL):
            raise DomainError("covariance has a negative diagonal entry")
        return np.sqrt(np.maximum(diag, 0.0))


def quantile_covariance(design: TruncationDesign, levels, n: int) -> QuantileCovariance:
    """Smoothed quantile estimates with their plug-in asymptotic covariance ``H D H' / n``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    levels = np.atleast_1d(np.asarray(levels, dtype=float))
    estimates = np.atleast_1d(smoothed_quantile(design, levels))
    sigma = hdh(design, levels) / n
    return QuantileCovariance(levels, estimates, sigma, int(n))


def z_quantile(confidence: float) -> float:
    """Two-sided standard-normal critical value for `confidence`."""
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    return NormalDist().inv_cdf((1.0 + confidence) / 2.0)


def normal_ci(qc: QuantileCovariance, confidence: float = 0.95) -> np.ndarray:
    """``(l, 2)`` array of ``estimate -/+ z * se`` intervals."""
    z = z_quantile(confidence)
    se = qc.standard_errors
    return np.column_stack([qc.estimates - z * se, qc.estimates + z * se])
