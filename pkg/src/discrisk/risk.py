"""Tail-risk summaries built on smoothed quantiles.

The conditional five number summary (C5NS) at VaR level p reports the
smoothed quantiles at the five levels

    0.90p + 0.10, 0.75p + 0.25, 0.50p + 0.50, 0.25p + 0.75, 0.10p + 0.90,

i.e. the conditional 10/25/50/75/90th percentiles of the loss above
VaR_p.  The conditional tail median, median(Y | Y > VaR_p), matches the
middle entry only for continuous laws; it is not estimated separately.

Tail probabilities come in two flavours.  The smoothed one inverts
u -> Q*(u) by bisection (with a 0.5 continuity correction for integer
thresholds); the interpolated one reads the empirical survival function
and interpolates linearly between neighbouring integers.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial

import numba as nb
import numpy as np

from ._streams import fresh_seed
from .asymptotics import normal_ci, quantile_covariance
from .bootstrap import run_replicates
from .empirical import DiscreteSample
from .errors import ConvergenceError, DomainError
from .smoothing import _quantile, map_truncated_level, smoothed_quantile
from .truncation import TruncationDesign, empirical_design, resolve_k

__all__ = [
    "C5nsResult",
    "TailProbEstimate",
    "c5ns_levels",
    "c5ns_summary",
    "continuity_corrected",
    "design_tail_prob",
    "smoothed_tail_prob",
    "interpolated_tail_prob",
    "tail_prob_bootstrap",
    "var_smoothed",
    "var_classical",
    "METHODS",
]

METHODS = ("smoothed", "interpolated")
BRACKET = (1e-9, 1.0 - 1e-9)
BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200

_C5NS_WEIGHTS = (0.90, 0.75, 0.50, 0.25, 0.10)


def c5ns_levels(p: float) -> np.ndarray:
    """The five C5NS levels ``w p + (1 - w)`` for w = 0.90, 0.75, 0.50, 0.25, 0.10."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"VaR level must lie in [0, 1], got {p}")
    return np.array([w * p + (1.0 - w) for w in _C5NS_WEIGHTS])


@dataclass(frozen=True)
class C5nsResult:
    p: float
    levels: np.ndarray
    quantiles: np.ndarray
    intervals: np.ndarray
    confidence: float
    standard_errors: np.ndarray
    k: float
    n: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "confidence": self.confidence,
            "levels": self.levels.tolist(),
            "quantiles": self.quantiles.tolist(),
            "standard_errors": self.standard_errors.tolist(),
            "intervals": self.intervals.tolist(),
        }


def c5ns_summary(
    sample: DiscreteSample,
    p: float = 0.90,
    k: str | float = "pi3",
    confidence: float = 0.95,
    clip_to_data: bool = True,
) -> C5nsResult:
    """C5NS beyond VaR_p with pointwise normal confidence intervals.

    The covariance is the plug-in H D H' / n evaluated on the empirical
    design.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"VaR level must lie in (0, 1), got {p}")
    k = resolve_k(k)
    design = empirical_design(sample, k, clip_to_data=clip_to_data)
    levels = c5ns_levels(p)
    qc = quantile_covariance(design, levels, sample.n)
    return C5nsResult(
        p=float(p),
        levels=levels,
        quantiles=qc.estimates,
        intervals=normal_ci(qc, confidence),
        confidence=float(confidence),
        standard_errors=qc.standard_errors,
        k=k,
        n=sample.n,
    )


def var_smoothed(sample: DiscreteSample, p: float, k: str | float = "pi3",
                 clip_to_data: bool = True) -> float:
    """Smoothed VaR_p: the smoothed quantile at level p."""
    return smoothed_quantile(empirical_design(sample, k, clip_to_data=clip_to_data), p)


def var_classical(sample: DiscreteSample, p: float) -> int:
    """Generalized-inverse VaR_p = min{y : F_n(y) >= p} of the raw sample."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"VaR level must lie in (0, 1), got {p}")
    cum = np.cumsum(sample.counts)
    # Relative slack so that p * n landing exactly on a count is not missed.
    idx = int(np.searchsorted(cum, p * sample.n * (1.0 - 1e-12), side="left"))
    return int(sample.values[min(idx, sample.values.size - 1)])


# -- tail probabilities -----------------------------------------------------


def continuity_corrected(a: float) -> float:
    """Threshold used on the smoothed scale: ``a + 0.5`` for integer `a`, else `a`."""
    a = float(a)
    return a + 0.5 if a.is_integer() else a


@nb.njit(cache=True, nogil=True)
def _invert(support, f_star, target, lo, hi, tol, max_iter):
    # Smallest u in [lo, hi] with Q*(u) >= target, given Q*(lo) < target <= Q*(hi).
    for _ in range(max_iter):
        if hi - lo <= tol:
            return hi
        mid = 0.5 * (lo + hi)
        if _quantile(support, f_star, mid) >= target:
            hi = mid
        else:
            lo = mid
    return np.nan


def design_tail_prob(design: TruncationDesign, threshold: float) -> float:
    """P{Y* > threshold} for the smoothed variable of a design.

    Solves ``Q*(u) = threshold`` by bisection on (1e-9, 1 - 1e-9) and maps
    the root back to the global scale.  Thresholds at or above the top of
    the smoothed range give 0; thresholds below it give 1 - F(L).
    """
    lo, hi = BRACKET
    if threshold <= _quantile(design.support, design.f_star, lo):
        return 1.0 - design.cdf_at_lower
    if threshold >= _quantile(design.support, design.f_star, hi):
        return 0.0
    u = _invert(design.support, design.f_star, float(threshold), lo, hi,
                BISECT_TOL, BISECT_MAX_ITER)
    if math.isnan(u):
        raise ConvergenceError("tail-probability bisection did not converge")
    return 1.0 - map_truncated_level(design, u)


def smoothed_tail_prob(sample: DiscreteSample, k: str | float, a: float,
                       clip_to_data: bool = True) -> float:
    """Smoothed estimate of P{Y > a}, continuity-corrected for integer `a`."""
    design = empirical_design(sample, k, clip_to_data=clip_to_data)
    return design_tail_prob(design, continuity_corrected(a))


def interpolated_tail_prob(sample: DiscreteSample, a: float) -> float:
    """Empirical P{Y > a}, linearly interpolated between integers.

    For ``a = b + f`` with integer b and 0 < f < 1 this is
    ``(1 - f) P{Y > b} + f P{Y > b + 1}``.
    """
    a = float(a)
    if a.is_integer():
        return 1.0 - sample.ecdf(a)
    b = math.floor(a)
    f = a - b
    return (1.0 - f) * (1.0 - sample.ecdf(b)) + f * (1.0 - sample.ecdf(b + 1))


@dataclass(frozen=True)
class TailProbEstimate:
    threshold: float
    effective_threshold: float
    method: str
    mean: float
    sd: float
    cv: float | None
    m: int
    seed: int | None

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "effective_threshold": self.effective_threshold,
            "method": self.method,
            "mean": self.mean,
            "sd": self.sd,
            "cv": self.cv,
            "m": self.m,
            "seed": self.seed,
        }


def _tail_statistic(boot: DiscreteSample, thresholds: np.ndarray, method: str,
                    k: float, clip_to_data: bool) -> np.ndarray:
    if method == "interpolated":
        return np.array([interpolated_tail_prob(boot, a) for a in thresholds])
    design = empirical_design(boot, k, clip_to_data=clip_to_data)
    return np.array([design_tail_prob(design, continuity_corrected(a)) for a in thresholds])


def tail_prob_bootstrap(
    sample: DiscreteSample,
    thresholds: float | Sequence[float],
    method: str = "smoothed",
    m: int = 1000,
    k: str | float = "pi3",
    seed: int | None = None,
    workers: int = 1,
    clip_to_data: bool = True,
) -> list[TailProbEstimate]:
    """Bootstrap mean, sd and coefficient of variation of tail probabilities.

    The same seed yields the same resamples for either `method`, so the
    two estimators can be compared replicate by replicate.
    """
    if method not in METHODS:
        raise DomainError(f"method must be one of {METHODS}, got {method!r}")
    k = resolve_k(k)
    thresholds = np.atleast_1d(np.asarray(thresholds, dtype=float))
    if seed is None:
        seed = fresh_seed()
    stat = partial(_tail_statistic, thresholds=thresholds, method=method, k=k,
                   clip_to_data=clip_to_data)
    reps, _ = run_replicates(sample, stat, m, seed, workers)
    means = reps.mean(axis=0)
    sds = reps.std(axis=0, ddof=1)
    out = []
    for a, mu, sd in zip(thresholds, means, sds):
        eff = continuity_corrected(a) if method == "smoothed" else float(a)
        out.append(TailProbEstimate(float(a), eff, method, float(mu), float(sd),
                                    float(sd / mu) if mu > 0 else None, m, seed))
    return out
