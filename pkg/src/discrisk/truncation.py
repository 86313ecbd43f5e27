"""Chebyshev truncation windows for count laws on infinite domains.

A window ``(L, U) = (max(-0.5, mean - k*sd), mean + k*sd)`` is cut around
the law (or the sample), the integers inside it become the support
points, and the CDF is renormalized to the window::

    F*_j = (F(y_j) - F(L)) / (F(U) - F(L)),   j = 1..d

``L`` and ``U`` must not be integers, so both are continuity points of
the count CDF; an irrational ``k`` such as pi guarantees this.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import CountModel
from .empirical import DiscreteSample
from .errors import DegenerateSampleError, DesignError, DomainError, IntegerCutError

__all__ = [
    "TruncationDesign",
    "population_design",
    "empirical_design",
    "finite_design",
    "coverage_bound",
    "resolve_k",
    "LOWER_CLAMP",
]

LOWER_CLAMP = -0.5
INTEGER_GUARD = 1e-9

_SYMBOLIC_K = {"pi": math.pi, "pi2": math.pi**2, "pi3": math.pi**3}


def resolve_k(k: str | float) -> float:
    """Turn ``'pi'``, ``'pi2'``, ``'pi3'`` or a numeric literal into a float."""
    if isinstance(k, str):
        key = k.strip().lower().replace("^", "").replace("**", "")
        if key in _SYMBOLIC_K:
            return _SYMBOLIC_K[key]
        try:
            k = float(key)
        except ValueError as exc:
            raise DomainError(f"cannot read k from {k!r}") from exc
    k = float(k)
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"k must be positive and finite, got {k}")
    return k


def k_label(k: float) -> str:
    for name, value in _SYMBOLIC_K.items():
        if k == value:
            return name
    return repr(k)


@dataclass(frozen=True, eq=False)
class TruncationDesign:
    """A finite window emulating a finite-support law.

    Attributes
    ----------
    k : float or None
        Window half-width in standard deviations (None for finite designs).
    lower, upper : float
        Cut points L < y_first and U > y_last, never integers.
    support : ndarray
        Support points y_1 < ... < y_d.
    f_star : ndarray
        Truncated CDF at each support point; the last entry is exactly 1.
    cdf_at_lower, cdf_at_upper : float
        Untruncated CDF at L and U.
    """

    k: float | None
    lower: float
    upper: float
    support: np.ndarray
    f_star: np.ndarray
    cdf_at_lower: float
    cdf_at_upper: float

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        f_star = np.asarray(self.f_star, dtype=float)
        if support.ndim != 1 or support.shape != f_star.shape:
            raise DesignError("support and f_star must be matching 1-d arrays")
        if support.size < 2:
            raise DesignError(f"window holds {support.size} support point(s); need d >= 2")
        if np.any(np.diff(support) <= 0):
            raise DesignError("support points must be strictly increasing")
        if not self.lower < support[0] or not support[-1] < self.upper:
            raise DesignError("cut points must bracket the support")
        if f_star[-1] != 1.0 or np.any(np.diff(f_star) < 0) or f_star[0] < 0:
            raise DesignError("f_star must be nondecreasing in [0, 1] and end at 1")
        support.setflags(write=False)
        f_star.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "f_star", f_star)

    @property
    def d(self) -> int:
        return int(self.support.size)

    @property
    def y_first(self) -> float:
        return float(self.support[0])

    @property
    def y_last(self) -> float:
        return float(self.support[-1])

    @property
    def window_mass(self) -> float:
        return self.cdf_at_upper - self.cdf_at_lower

    def shifted(self, m: int) -> "TruncationDesign":
        """The same design with every support point and cut moved by `m`."""
        return TruncationDesign(
            self.k, self.lower + m, self.upper + m, self.support + m,
            self.f_star, self.cdf_at_lower, self.cdf_at_upper,
        )

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "y_first": self.y_first,
            "y_last": self.y_last,
            "d": self.d,
            "cdf_at_lower": self.cdf_at_lower,
            "cdf_at_upper": self.cdf_at_upper,
        }


def _window(mean: float, sd: float, k: float) -> tuple[float, float]:
    lower = max(LOWER_CLAMP, mean - k * sd)
    upper = mean + k * sd
    for name, cut in (("lower", lower), ("upper", upper)):
        if abs(cut - round(cut)) < INTEGER_GUARD:
            raise IntegerCutError(
                f"{name} cut {cut!r} is (nearly) an integer; choose an irrational k such as pi"
            )
    return lower, upper


def population_design(model: CountModel, k: str | float) -> TruncationDesign:
    """Window ``mean +/- k sd`` around a parametric law, using closed-form moments."""
    k = resolve_k(k)
    mom = model.moments()
    lower, upper = _window(mom.mean, math.sqrt(mom.variance), k)
    first, last = math.ceil(lower), math.floor(upper)
    if last - first + 1 < 2:
        raise DesignError(f"window ({lower:.4g}, {upper:.4g}) holds fewer than two integers")
    support = np.arange(first, last + 1)
    f_lower = model.cdf(lower)
    f_upper = model.cdf(upper)
    mass = f_upper - f_lower
    if not mass > 0:
        raise DesignError("window carries no probability mass")
    f_star = (model.cdf(support) - f_lower) / mass
    f_star = np.clip(f_star, 0.0, 1.0)
    f_star[-1] = 1.0
    return TruncationDesign(k, lower, upper, support, f_star, f_lower, f_upper)


def empirical_design(
    sample: DiscreteSample, k: str | float, clip_to_data: bool = False
) -> TruncationDesign:
    """Window ``mean +/- k s`` around a sample, with the empirical CDF.

    With ``clip_to_data=True`` the support is further restricted to
    ``[sample.min, sample.max]``, dropping window points beyond the
    observed range (they carry no empirical mass but would still count
    toward d and so widen the beta kernel).  This is the construction
    that reproduces published data analyses of the automobile data; the
    plain window is the one used in the simulation and bootstrap studies.
    """
    k = resolve_k(k)
    sample.require_spread()
    lower, upper = _window(sample.mean(), sample.sd(), k)
    first, last = math.ceil(lower), math.floor(upper)
    if clip_to_data:
        first, last = max(first, sample.min), min(last, sample.max)
    if last - first + 1 < 2:
        raise DesignError(f"window ({lower:.4g}, {upper:.4g}) holds fewer than two integers")
    support = np.arange(first, last + 1)
    n = sample.n
    # Window mass as the algorithm builds it: below-window count plus in-window count.
    below = sample.count_le(first - 1)
    inside = sample.count_le(last) - below
    at_upper = below + inside
    assert at_upper == sample.count_le(upper), "observations between y_last and U"
    if inside == 0:
        raise DesignError("no observations inside the truncation window")
    f_star = (sample.count_le(support) - below) / inside
    return TruncationDesign(k, lower, upper, support, f_star, below / n, at_upper / n)


def finite_design(support, cdf) -> TruncationDesign:
    """Design for a law that already lives on finitely many points.

    `cdf` holds F at each support point and must end at 1; no window is
    cut (``k`` is None and the cut points sit half a gap outside).
    """
    support = np.asarray(support, dtype=float)
    cdf = np.asarray(cdf, dtype=float)
    if support.size < 2:
        raise DesignError("finite design needs at least two support points")
    if not math.isclose(cdf[-1], 1.0, abs_tol=1e-12):
        raise DesignError("finite-support CDF must end at 1")
    cdf = cdf.copy()
    cdf[-1] = 1.0
    gap_lo = support[1] - support[0]
    gap_hi = support[-1] - support[-2]
    return TruncationDesign(
        None, support[0] - gap_lo / 2, support[-1] + gap_hi / 2, support, cdf, 0.0, 1.0
    )


def coverage_bound(n: int | float | None, k: str | float) -> float:
    """Lower bound on the probability that a draw lands in ``mean +/- k sd``.

    With known moments (``n`` None or infinite) this is Chebyshev's
    ``1 - 1/k^2``.  With moments estimated from ``n`` observations it is
    ``1 - floor(((n+1)/n) ((n-1)/k^2 + 1)) / (n+1)``.
    """
    k = resolve_k(k)
    if not k > 1:
        raise DomainError(f"coverage bound needs k > 1, got {k}")
    if n is None or n == math.inf:
        return 1.0 - 1.0 / (k * k)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    # Exact rational arithmetic so the floor never slips at integer boundaries.
    kk = Fraction(k) ** 2
    inner = Fraction(n + 1, n) * (Fraction(n - 1) / kk + 1)
    return float(1 - Fraction(math.floor(inner), n + 1))
