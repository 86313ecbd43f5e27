"""Smoothed quantiles, C5NS summaries and tail probabilities for claim counts."""

__version__ = "0.1.0"

from .asymptotics import QuantileCovariance, normal_ci, quantile_covariance
from .bootstrap import BootstrapSummary, bootstrap_quantiles
from .distributions import CountModel, parse_model
from .empirical import DiscreteSample, sample_moments
from .errors import (
    ConvergenceError,
    DegenerateSampleError,
    DesignError,
    DomainError,
    IntegerCutError,
)
from .risk import (
    C5nsResult,
    TailProbEstimate,
    c5ns_levels,
    c5ns_summary,
    interpolated_tail_prob,
    smoothed_tail_prob,
    tail_prob_bootstrap,
)
from .smoothing import map_truncated_level, smoothed_quantile, smoothing_weights
from .special import BetaParams, beta_cdf, beta_pdf
from .truncation import (
    TruncationDesign,
    coverage_bound,
    empirical_design,
    finite_design,
    population_design,
    resolve_k,
)
from .datasets import load_dataset, DATASETS
