"""Beta-kernel smoothed quantiles of a (truncated) discrete law.

For a design with support y_1 < ... < y_d and truncated CDF values
F*_1 <= ... <= F*_d = 1 (F*_0 = 0), the smoothed quantile at level u is

    Q*(u) = sum_j [B(F*_j) - B(F*_{j-1})] y_j

where B is the beta((d+1)u, (d+1)(1-u)) CDF.
"""
from __future__ import annotations

import numba as nb
import numpy as np

from .errors import ConvergenceError, DomainError
from .special import _betainc
from .truncation import TruncationDesign

__all__ = [
    "smoothing_weights",
    "smoothed_quantile",
    "map_truncated_level",
    "quantile_curve",
]

FLUSH = 1e-300


@nb.njit(cache=True, nogil=True)
def _weights(f_star, u):
    d = f_star.shape[0]
    a = (d + 1) * u
    b = (d + 1) * (1.0 - u)
    w = np.empty(d)
    prev = 0.0
    for j in range(d):
        cur = _betainc(a, b, f_star[j])
        w[j] = cur - prev
        prev = cur
    return w


@nb.njit(cache=True, nogil=True)
def _quantile(support, f_star, u):
    w = _weights(f_star, u)
    q = 0.0
    for j in range(w.shape[0]):
        if w[j] > FLUSH:
            q += w[j] * support[j]
    return q


@nb.njit(cache=True, nogil=True)
def _quantiles(support, f_star, levels):
    out = np.empty(levels.shape[0])
    for i in range(levels.shape[0]):
        out[i] = _quantile(support, f_star, levels[i])
    return out


def _check_level(u) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise DomainError("levels must lie strictly inside (0, 1)")
    return arr


def smoothing_weights(design: TruncationDesign, u: float) -> np.ndarray:
    """Beta-kernel weight of each support point at level `u`.

    Weights are nonnegative and sum to one; weights below 1e-300 are
    flushed to zero after the sum has been checked.
    """
    u = float(_check_level(u))
    w = _weights(design.f_star, u)
    if np.isnan(w).any():
        raise ConvergenceError(f"beta kernel failed to converge at u={u}")
    total = w.sum()
    if abs(total - 1.0) > 1e-12:
        raise ConvergenceError(f"smoothing weights sum to {total!r}, not 1")
    w = np.maximum(w, 0.0)
    w[w < FLUSH] = 0.0
    return w


def smoothed_quantile(design: TruncationDesign, u):
    """Smoothed quantile Q*(u) of a design, for a scalar or array of levels."""
    arr = _check_level(u)
    out = _quantiles(design.support, design.f_star, np.ascontiguousarray(arr.reshape(-1)))
    if np.isnan(out).any():
        raise ConvergenceError("beta kernel failed to converge")
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def map_truncated_level(design: TruncationDesign, u):
    """Global CDF level matching truncated level `u`: F(L) + u (F(U) - F(L))."""
    arr = _check_level(u)
    out = design.cdf_at_lower + arr * (design.cdf_at_upper - design.cdf_at_lower)
    return float(out) if out.ndim == 0 else out


def quantile_curve(design: TruncationDesign, points: int = 199) -> np.ndarray:
    """``(points, 2)`` array of ``(u, Q*(u))`` on an even interior grid."""
    if points < 1:
        raise DomainError("curve needs at least one point")
    levels = np.arange(1, points + 1) / (points + 1)
    return np.column_stack([levels, smoothed_quantile(design, levels)])
