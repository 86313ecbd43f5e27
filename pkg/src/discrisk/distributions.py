"""Claim-count models: Poisson, negative binomial and their zero-inflated forms.

NB(r, beta) has mean r*beta and variance r*beta*(1+beta), i.e.
P{Y=y} = C(y+r-1, y) (1+beta)^-r (beta/(1+beta))^y.

A zero-inflated model with total zero mass ``c`` puts a structural zero
with probability ``q = (c - p0) / (1 - p0)`` on top of the base model,
where ``p0`` is the base probability of zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .empirical import DiscreteSample
from .errors import DomainError

__all__ = ["CountModel", "Moments", "parse_model"]

KINDS = ("poisson", "nb", "zip", "zinb")
# Prefix table covers probability mass up to 1 - CACHE_TAIL.
CACHE_TAIL = 1e-14


class Moments(NamedTuple):
    mean: float
    variance: float
    regular_zero_prop: float
    excess_zero_prop: float


@dataclass(frozen=True)
class CountModel:
    """A parametric claim-count law with exact pmf, cdf and moments.

    Use the ``poisson``/``nb``/``zip``/``zinb`` constructors or
    `parse_model` rather than calling the class directly.
    """

    kind: str
    lam: float | None = None
    r: float | None = None
    beta: float | None = None
    c: float | None = None
    _pmf_table: np.ndarray = field(init=False, repr=False, compare=False)
    _cdf_table: np.ndarray = field(init=False, repr=False, compare=False)
    _base_cdf_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown model kind {self.kind!r}")
        if self.kind in ("poisson", "zip"):
            if self.lam is None or not self.lam > 0:
                raise DomainError("lambda must be positive")
        else:
            if self.r is None or not self.r > 0 or self.beta is None or not self.beta > 0:
                raise DomainError("r and beta must be positive")
        if self.inflated:
            if self.c is None or not 0.0 <= self.c < 1.0:
                raise DomainError("zero mass c must lie in [0, 1)")
            if self.c < self.base_p0:
                raise DomainError(
                    f"c={self.c} is below the base zero probability {self.base_p0:.6g}"
                )
        self._build_tables()

    # -- constructors ------------------------------------------------------

    @classmethod
    def poisson(cls, lam: float) -> "CountModel":
        return cls("poisson", lam=float(lam))

    @classmethod
    def nb(cls, r: float, beta: float) -> "CountModel":
        return cls("nb", r=float(r), beta=float(beta))

    @classmethod
    def zip(cls, lam: float, c: float) -> "CountModel":
        return cls("zip", lam=float(lam), c=float(c))

    @classmethod
    def zinb(cls, r: float, beta: float, c: float) -> "CountModel":
        return cls("zinb", r=float(r), beta=float(beta), c=float(c))

    # -- basic properties --------------------------------------------------

    @property
    def inflated(self) -> bool:
        return self.kind in ("zip", "zinb")

    @property
    def base_p0(self) -> float:
        if self.kind in ("poisson", "zip"):
            return math.exp(-self.lam)
        return (1.0 + self.beta) ** (-self.r)

    @property
    def structural_zero_prob(self) -> float:
        """Probability q of an excess (structural) zero; 0 for plain models."""
        if not self.inflated:
            return 0.0
        p0 = self.base_p0
        return (self.c - p0) / (1.0 - p0)

    def spec_string(self) -> str:
        if self.kind == "poisson":
            return f"poisson:lambda={self.lam:g}"
        if self.kind == "nb":
            return f"nb:r={self.r:g},beta={self.beta:g}"
        if self.kind == "zip":
            return f"zip:lambda={self.lam:g},c={self.c:g}"
        return f"zinb:r={self.r:g},beta={self.beta:g},c={self.c:g}"

    def __str__(self) -> str:
        return self.spec_string()

    # -- pmf / cdf ---------------------------------------------------------

    def _base_logpmf(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        lg = np.vectorize(math.lgamma, otypes=[float])
        if self.kind in ("poisson", "zip"):
            return y * math.log(self.lam) - self.lam - lg(y + 1.0)
        r, b = self.r, self.beta
        return (
            lg(y + r) - math.lgamma(r) - lg(y + 1.0)
            - r * math.log1p(b) + y * (math.log(b) - math.log1p(b))
        )

    def _pmf_exact(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y)
        base = np.exp(self._base_logpmf(np.maximum(y, 0)))
        q = self.structural_zero_prob
        out = (1.0 - q) * base
        if self.inflated:
            out = np.where(y == 0, self.c, out)
        return np.where(y < 0, 0.0, out)

    def _build_tables(self):
        mean = self.moments().mean
        size = 64
        while True:
            pmf = self._pmf_exact(np.arange(size))
            cdf = np.cumsum(pmf)
            hits = np.nonzero(cdf >= 1.0 - CACHE_TAIL)[0]
            if hits.size and hits[0] > mean:
                cap = int(hits[0]) + 1
                break
            size *= 2
        object.__setattr__(self, "_pmf_table", pmf[:cap])
        object.__setattr__(self, "_cdf_table", cdf[:cap])
        if self.kind == "zip":
            base = np.exp(self._base_logpmf(np.arange(cap)))
            object.__setattr__(self, "_base_cdf_table", np.cumsum(base))
        else:
            object.__setattr__(self, "_base_cdf_table", self._cdf_table)

    def pmf(self, y):
        """P{Y = y}; zero for negative or non-integer `y`."""
        arr = np.asarray(y, dtype=float)
        flat = arr.reshape(-1)
        is_int = (flat == np.floor(flat)) & (flat >= 0)
        idx = np.where(is_int, flat, -1).astype(np.int64)
        out = np.zeros(flat.shape)
        cap = self._pmf_table.size
        inside = is_int & (idx < cap)
        out[inside] = self._pmf_table[idx[inside]]
        beyond = is_int & (idx >= cap)
        if beyond.any():
            out[beyond] = self._pmf_exact(idx[beyond])
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def cdf(self, t):
        """P{Y <= t} for any real `t` (right-continuous step function)."""
        arr = np.asarray(t, dtype=float)
        fl = np.floor(arr.reshape(-1))
        out = np.zeros(fl.shape)
        cap = self._cdf_table.size
        inside = (fl >= 0) & (fl < cap)
        out[inside] = self._cdf_table[fl[inside].astype(np.int64)]
        for i in np.nonzero(fl >= cap)[0]:
            extra = self._pmf_exact(np.arange(cap, int(fl[i]) + 1)).sum()
            out[i] = min(1.0, self._cdf_table[-1] + extra)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def moments(self) -> Moments:
        """Closed-form mean, variance and the regular/excess zero split."""
        if self.kind in ("poisson", "zip"):
            mu = var = self.lam
        else:
            mu = self.r * self.beta
            var = self.r * self.beta * (1.0 + self.beta)
        p0 = self.base_p0
        if not self.inflated:
            return Moments(mu, var, p0, 0.0)
        c = self.c
        scale = (1.0 - c) / (1.0 - p0)
        mean = scale * mu
        variance = scale * (var + mu * mu * (c - p0) / (1.0 - p0))
        return Moments(mean, variance, p0 * scale, (c - p0) / (1.0 - p0))

    @property
    def mean(self) -> float:
        return self.moments().mean

    @property
    def sd(self) -> float:
        return math.sqrt(self.moments().variance)

    # -- sampling ----------------------------------------------------------

    def _draw_poisson(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # Inversion against the cached base CDF; same law as sequential search.
        lam = self.lam
        table = self._base_cdf_table
        u = rng.random(n)
        out = np.searchsorted(table, u, side="right")
        over = out >= table.size
        if over.any():
            for i in np.nonzero(over)[0]:
                y = table.size - 1
                acc = table[-1]
                while acc < u[i]:
                    y += 1
                    acc += math.exp(y * math.log(lam) - lam - math.lgamma(y + 1.0))
                out[i] = y
        return out

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw `n` raw observations.

        Zero-inflated kinds first decide structural zeros with probability
        ``q``, then draw the remaining observations from the base model.
        """
        if n < 1:
            raise DomainError("sample size must be at least 1")
        if self.kind in ("poisson", "zip"):
            values = self._draw_poisson(n, rng)
        else:
            rates = rng.gamma(self.r, self.beta, size=n)
            values = rng.poisson(rates)
        if self.inflated:
            structural = rng.random(n) < self.structural_zero_prob
            values = np.where(structural, 0, values)
        return values.astype(np.int64)

    def sample(self, n: int, rng: np.random.Generator) -> DiscreteSample:
        """Draw a frequency-table sample of size `n`."""
        return DiscreteSample.from_observations(self.draw(n, rng))


def parse_model(text: str) -> CountModel:
    """Parse ``poisson:lambda=9``, ``nb:r=9,beta=1``, ``zip:lambda=1,c=0.8``
    or ``zinb:r=1,beta=1,c=0.8``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    params: dict[str, float] = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise DomainError(f"malformed model parameter {item!r}")
        try:
            params[key.strip().lower()] = float(value)
        except ValueError as exc:
            raise DomainError(f"non-numeric value in {item!r}") from exc
    expected = {
        "poisson": {"lambda"},
        "nb": {"r", "beta"},
        "zip": {"lambda", "c"},
        "zinb": {"r", "beta", "c"},
    }
    if kind not in expected:
        raise DomainError(f"unknown model kind {kind!r}")
    if set(params) != expected[kind]:
        raise DomainError(f"{kind} needs parameters {sorted(expected[kind])}, got {sorted(params)}")
    if kind == "poisson":
        return CountModel.poisson(params["lambda"])
    if kind == "nb":
        return CountModel.nb(params["r"], params["beta"])
    if kind == "zip":
        return CountModel.zip(params["lambda"], params["c"])
    return CountModel.zinb(params["r"], params["beta"], params["c"])
