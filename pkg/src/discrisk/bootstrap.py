"""Nonparametric bootstrap of smoothed quantiles.

Each replicate resamples the n observations with replacement (drawn as one
multinomial over the frequency table), rebuilds the empirical window and
evaluates the smoothed quantiles.  Replicates run in seeded chunks (see
`discrisk._streams`), so results do not depend on the worker count.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .empirical import DiscreteSample
from ._streams import fresh_seed, run_chunked
from .errors import DomainError
from .smoothing import smoothed_quantile
from .truncation import empirical_design, resolve_k

__all__ = [
    "BootstrapSummary",
    "bootstrap_quantiles",
    "resample",
    "run_replicates",
]

Statistic = Callable[[DiscreteSample], np.ndarray]


def resample(sample: DiscreteSample, rng: np.random.Generator) -> DiscreteSample:
    """One with-replacement resample of the same size, as a frequency table."""
    n = sample.n
    draws = rng.multinomial(n, sample.counts / n)
    keep = draws > 0
    return DiscreteSample(sample.values[keep], draws[keep])


def _resample_and_apply(rng, sample: DiscreteSample, statistic: Statistic):
    return statistic(resample(sample, rng))


def run_replicates(
    sample: DiscreteSample,
    statistic: Statistic,
    m: int,
    seed: int | np.random.SeedSequence | None,
    workers: int = 1,
) -> tuple[np.ndarray, int]:
    """Evaluate `statistic` on `m` resamples; return the m x l matrix and skip count.

    Resamples on which the statistic raises `DegenerateSampleError` or
    `DesignError` are redrawn.  More than 1% skipped replicates aborts.
    `statistic` must be picklable when ``workers > 1``.
    """
    if m < 2:
        raise DomainError("need at least two bootstrap replicates")
    sample.require_spread()
    statistic(sample)  # fail fast on a sample the statistic cannot handle
    draw = partial(_resample_and_apply, sample=sample, statistic=statistic)
    return run_chunked(draw, m, seed, workers)


def _quantile_statistic(
    boot: DiscreteSample, k: float, levels: np.ndarray, clip_to_data: bool
) -> np.ndarray:
    design = empirical_design(boot, k, clip_to_data=clip_to_data)
    return smoothed_quantile(design, levels)


@dataclass(frozen=True)
class BootstrapSummary:
    levels: np.ndarray
    replicates: np.ndarray = field(repr=False)
    col_means: np.ndarray
    cov: np.ndarray
    m: int
    seed: int | None
    skipped: int = 0

    @classmethod
    def from_replicates(cls, levels, replicates, seed, skipped=0) -> "BootstrapSummary":
        replicates = np.asarray(replicates, dtype=float)
        means = replicates.mean(axis=0)
        cov = np.atleast_2d(np.cov(replicates, rowvar=False, ddof=1))
        return cls(np.asarray(levels, dtype=float), replicates, means, cov,
                   replicates.shape[0], seed, skipped)

    def scaled_cov(self, n: int) -> np.ndarray:
        return self.cov * n

    def to_dict(self) -> dict:
        return {
            "levels": self.levels.tolist(),
            "m": self.m,
            "seed": self.seed,
            "skipped": self.skipped,
            "col_means": self.col_means.tolist(),
            "cov": self.cov.tolist(),
        }


def bootstrap_quantiles(
    sample: DiscreteSample,
    m: int,
    k: str | float,
    levels: Sequence[float],
    seed: int | None = None,
    workers: int = 1,
    clip_to_data: bool = False,
) -> BootstrapSummary:
    """Bootstrap means and covariance of the smoothed quantiles at `levels`.

    Parameters
    ----------
    sample : DiscreteSample
        Original data; must have at least two distinct values.
    m : int
        Number of resamples.
    k : str or float
        Window half-width (``'pi'``, ``'pi2'``, ``'pi3'`` or a number).
    levels : sequence of float
        Quantile levels in (0, 1).
    seed : int, optional
        Master seed.  When omitted a fresh one is drawn and recorded.
    workers : int
        Number of processes; the summary is bit-identical for any value.
    clip_to_data : bool
        Passed to `empirical_design` for every resample.
    """
    k = resolve_k(k)
    levels = np.asarray(levels, dtype=float)
    if seed is None:
        seed = fresh_seed()
    stat = partial(_quantile_statistic, k=k, levels=levels, clip_to_data=clip_to_data)
    reps, skipped = run_replicates(sample, stat, m, seed, workers)
    return BootstrapSummary.from_replicates(levels, reps, seed, skipped)
