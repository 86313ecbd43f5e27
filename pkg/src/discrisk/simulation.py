"""Monte Carlo studies of the smoothed quantile estimator.

Three modes:

* ``theoretical``: population design from closed-form moments, smoothed
  quantiles and H D H' (the n = infinity targets);
* ``simulate``: `reps` independent samples of size `n`, reporting the
  mean estimate and ``n`` times the sample covariance;
* ``bootstrap-validate``: one sample of size `n`, then `reps` bootstrap
  resamples of it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import __version__
from ._streams import fresh_seed, master_seed, run_chunked
from .asymptotics import hdh
from .bootstrap import bootstrap_quantiles
from .distributions import CountModel, parse_model
from .errors import DomainError
from .smoothing import smoothed_quantile
from .truncation import empirical_design, k_label, population_design, resolve_k

__all__ = ["StudyConfig", "StudyReport", "run_study", "MODES"]

MODES = ("simulate", "bootstrap-validate", "theoretical")
QUARTILES = (0.25, 0.50, 0.75)


@dataclass(frozen=True)
class StudyConfig:
    model: CountModel
    k: float
    n: int | None = None
    reps: int = 10_000
    levels: tuple[float, ...] = QUARTILES
    seed: int | None = None
    mode: str = "simulate"
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.model, str):
            object.__setattr__(self, "model", parse_model(self.model))
        object.__setattr__(self, "k", resolve_k(self.k))
        object.__setattr__(self, "levels", tuple(float(u) for u in self.levels))
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode != "theoretical":
            if self.n is None or self.n < 2:
                raise DomainError("sample size n must be at least 2")
            if self.reps < 1:
                raise DomainError("reps must be at least 1")
            if self.mode == "bootstrap-validate" and self.reps < 2:
                raise DomainError("bootstrap validation needs reps >= 2")

    def to_dict(self) -> dict:
        return {
            "model": self.model.spec_string(),
            "k": self.k,
            "k_label": k_label(self.k),
            "n": self.n,
            "reps": self.reps if self.mode != "theoretical" else None,
            "levels": list(self.levels),
            "seed": self.seed,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class StudyReport:
    config: StudyConfig
    means: np.ndarray
    scaled_cov: np.ndarray | None
    mean_se: np.ndarray | None = None
    skipped: int = 0
    design: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "config": self.config.to_dict(),
            "means": self.means.tolist(),
            "scaled_cov": None if self.scaled_cov is None else self.scaled_cov.tolist(),
            "mean_se": None if self.mean_se is None else self.mean_se.tolist(),
            "skipped": self.skipped,
            "design": self.design,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        cfg = self.config
        digits = 3 if cfg.mode == "theoretical" else 2
        n_label = "inf" if cfg.mode == "theoretical" else str(cfg.n)
        lines = [
            f"{cfg.model.spec_string()}  k={k_label(cfg.k)}  n={n_label}  mode={cfg.mode}",
            "means: (" + ", ".join(f"{v:.{digits}f}" for v in self.means) + ")",
        ]
        if self.scaled_cov is None:
            lines.append("n x cov: n/a (single replicate)")
        else:
            lines.append("n x cov:")
            for row in self.scaled_cov:
                lines.append("  " + "  ".join(f"{v:8.{digits}f}" for v in row))
        return "\n".join(lines)


def _simulated_estimates(rng, model: CountModel, n: int, k: float, levels: np.ndarray):
    design = empirical_design(model.sample(n, rng), k)
    return smoothed_quantile(design, levels)


def run_study(cfg: StudyConfig) -> StudyReport:
    """Run one cell of the simulation study described by `cfg`."""
    levels = np.asarray(cfg.levels)
    if cfg.mode == "theoretical":
        design = population_design(cfg.model, cfg.k)
        return StudyReport(cfg, np.atleast_1d(smoothed_quantile(design, levels)),
                           hdh(design, levels), design=design.to_dict())

    seed = cfg.seed if cfg.seed is not None else fresh_seed()
    if seed != cfg.seed:
        cfg = StudyConfig(cfg.model, cfg.k, cfg.n, cfg.reps, cfg.levels, seed, cfg.mode,
                          cfg.workers)

    if cfg.mode == "simulate":
        draw = partial(_simulated_estimates, model=cfg.model, n=cfg.n, k=cfg.k,
                       levels=levels)
        est, skipped = run_chunked(draw, cfg.reps, seed, cfg.workers)
        means = est.mean(axis=0)
        if cfg.reps < 2:
            return StudyReport(cfg, means, None, None, skipped)
        cov = np.atleast_2d(np.cov(est, rowvar=False, ddof=1))
        se = est.std(axis=0, ddof=1) / math.sqrt(cfg.reps)
        return StudyReport(cfg, means, cov * cfg.n, se, skipped)

    # bootstrap-validate: child 0 generates the data, child 1 drives the bootstrap.
    data_seed, boot_seed = master_seed(seed).spawn(2)
    sample = cfg.model.sample(cfg.n, np.random.Generator(np.random.PCG64(data_seed)))
    summary = bootstrap_quantiles(sample, cfg.reps, cfg.k, levels, seed=boot_seed,
                                  workers=cfg.workers)
    se = summary.replicates.std(axis=0, ddof=1) / math.sqrt(cfg.reps)
    design = empirical_design(sample, cfg.k).to_dict()
    design["sample_digest"] = sample.digest()
    return StudyReport(cfg, summary.col_means, summary.cov * cfg.n, se, summary.skipped,
                       design)
