import math

import numpy as np
import pytest

from discrisk.distributions import CountModel
from discrisk.empirical import DiscreteSample
from discrisk.errors import DesignError, DomainError, IntegerCutError
from discrisk.truncation import (
    TruncationDesign, coverage_bound, empirical_design, finite_design, k_label,
    population_design, resolve_k,
)


@pytest.mark.parametrize("n,expected", [(10, 0.909), (50, 0.941), (100, 0.950), (None, 0.960),
                                        (math.inf, 0.960)])
def test_coverage_bound_k5(n, expected):
    assert round(coverage_bound(n, 5), 3) == expected


@pytest.mark.parametrize("k,expected", [("pi", 0.899), ("pi2", 0.990), ("pi3", 0.999)])
def test_coverage_bound_chebyshev(k, expected):
    assert round(coverage_bound(None, k), 3) == expected


def test_coverage_bound_brute_force():
    # Finite-n bound equals the integer count of admissible outliers, computed directly.
    for n in (3, 7, 25, 400):
        for k in (1.7, 2.5, math.pi):
            outside = math.floor((n + 1) / n * ((n - 1) / k**2 + 1))
            assert coverage_bound(n, k) == pytest.approx(1 - outside / (n + 1), abs=1e-15)


def test_coverage_bound_rejects():
    with pytest.raises(DomainError):
        coverage_bound(10, 1.0)
    with pytest.raises(DomainError):
        coverage_bound(0, 3)


def test_k_names():
    assert resolve_k("pi2") == pytest.approx(math.pi**2)
    assert k_label(math.pi**3) == "pi3"
    with pytest.raises(DomainError):
        resolve_k("tau")


def test_poisson_pi_design(poisson9):
    des = population_design(poisson9, "pi")
    assert des.lower == pytest.approx(9 - 3 * math.pi)
    assert des.upper == pytest.approx(9 + 3 * math.pi)
    assert (des.y_first, des.y_last, des.d) == (0, 18, 19)
    assert des.f_star[18] == 1.0
    assert des.cdf_at_lower == 0.0


def test_zip_design_clamps_lower():
    des = population_design(CountModel.zip(1, 0.8), "pi")
    assert des.lower == -0.5 and des.y_first == 0


def test_empirical_design_o(data_o):
    des = empirical_design(data_o, "pi3")
    mean, sd = data_o.mean(), data_o.sd()
    assert des.lower == -0.5
    assert des.upper == pytest.approx(mean + math.pi**3 * sd)
    assert round(des.upper) == 17 and des.y_last == math.floor(des.upper)


def test_empirical_design_clipped_to_observed_range(data_o):
    des = empirical_design(data_o, "pi3", clip_to_data=True)
    assert (des.y_first, des.y_last, des.d) == (0, 7, 8)


def test_two_point_sample():
    s = DiscreteSample.from_counts([(0, 50), (1, 50)])
    des = empirical_design(s, "pi")
    assert des.f_star[des.support == 1][0] == 1.0
    assert (des.cdf_at_lower, des.cdf_at_upper) == (0.0, 1.0)


def test_empirical_design_mass_excluded():
    obs = np.r_[np.zeros(200, int), np.ones(100, int), [40]]
    des = empirical_design(DiscreteSample.from_observations(obs), 2.5)
    assert des.cdf_at_upper == pytest.approx(300 / 301)


def test_integer_cut_guard():
    # mean 1 and sd sqrt(2), so k = sqrt(2) puts U on the integer 3.
    s = DiscreteSample.from_observations([0, 2])
    with pytest.raises(IntegerCutError):
        empirical_design(s, math.sqrt(2))


def test_design_validation():
    with pytest.raises(DesignError):
        TruncationDesign(None, -0.5, 1.5, np.array([0.0]), np.array([1.0]), 0.0, 1.0)
    with pytest.raises(DesignError):
        TruncationDesign(None, -0.5, 1.5, np.array([0.0, 1.0]), np.array([0.5, 0.9]), 0.0, 1.0)


def test_shifted_design(poisson9):
    des = population_design(poisson9, "pi")
    sh = des.shifted(5)
    np.testing.assert_array_equal(sh.support, des.support + 5)
    np.testing.assert_array_equal(sh.f_star, des.f_star)


def test_finite_design():
    des = finite_design([1, 2, 4], [0.2, 0.5, 1.0])
    assert des.d == 3 and des.window_mass == 1.0
