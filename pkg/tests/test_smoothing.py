import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special as sps

from discrisk.distributions import CountModel
from discrisk.errors import DomainError
from discrisk.smoothing import (
    map_truncated_level, quantile_curve, smoothed_quantile, smoothing_weights,
)
from discrisk.truncation import TruncationDesign, finite_design, population_design


def random_design(rng, d):
    support = np.cumsum(rng.integers(1, 4, size=d)).astype(float) - 1
    mass = rng.dirichlet(np.ones(d))
    return finite_design(support, np.cumsum(mass))


def test_two_point_symmetric_weights():
    des = finite_design([0, 1], [0.5, 1.0])
    np.testing.assert_allclose(smoothing_weights(des, 0.5), [0.5, 0.5], atol=1e-15)


def test_weights_match_panel_quadrature(poisson9):
    des = population_design(poisson9, "pi")
    d, u = des.d, 0.25
    a, b = (d + 1) * u, (d + 1) * (1 - u)
    norm = math.exp(sps.betaln(a, b))
    edges = np.r_[0.0, des.f_star]
    ref = [integrate.quad(lambda t: t ** (a - 1) * (1 - t) ** (b - 1) / norm, lo, hi,
                          epsabs=1e-14, epsrel=1e-13)[0]
           for lo, hi in zip(edges[:-1], edges[1:])]
    np.testing.assert_allclose(smoothing_weights(des, u), ref, atol=1e-12)


def test_weights_sum_and_monotone_random_designs():
    rng = np.random.default_rng(11)
    grid = np.linspace(0.01, 0.99, 99)
    for _ in range(50):
        des = random_design(rng, int(rng.integers(2, 30)))
        for u in rng.uniform(0.001, 0.999, size=5):
            assert abs(smoothing_weights(des, u).sum() - 1.0) <= 1e-12
        q = smoothed_quantile(des, grid)
        assert np.all(np.diff(q) >= -1e-12)
        assert des.support[0] - 1e-12 <= q.min() and q.max() <= des.support[-1] + 1e-12


def test_point_mass_design():
    des = TruncationDesign(None, -0.5, 3.5, np.arange(4.0), np.array([0, 0, 1, 1.0]), 0.0, 1.0)
    np.testing.assert_allclose(smoothed_quantile(des, [0.05, 0.5, 0.95]), 2.0, atol=1e-14)


def test_shift_equivariance():
    rng = np.random.default_rng(5)
    des = random_design(rng, 9)
    u = np.array([0.1, 0.5, 0.9])
    np.testing.assert_allclose(smoothed_quantile(des.shifted(7), u),
                               smoothed_quantile(des, u) + 7, atol=1e-12)


def test_extreme_levels_approach_endpoints():
    des = finite_design([0, 1, 2, 3], [0.25, 0.5, 0.75, 1.0])
    assert smoothed_quantile(des, 1e-9) == pytest.approx(0.0, abs=1e-6)
    assert smoothed_quantile(des, 1 - 1e-9) == pytest.approx(3.0, abs=1e-6)


def test_quantile_against_mpmath_oracle():
    des = finite_design([0, 1, 3, 4], [0.1, 0.45, 0.8, 1.0])
    u, d = 0.37, 4
    a, b = (d + 1) * u, (d + 1) * (1 - u)
    with mpmath.workdps(30):
        cdf = lambda x: mpmath.betainc(a, b, 0, x, regularized=True)
        prev, ref = mpmath.mpf(0), mpmath.mpf(0)
        for y, f in zip(des.support, des.f_star):
            cur = cdf(f)
            ref += (cur - prev) * y
            prev = cur
    assert smoothed_quantile(des, u) == pytest.approx(float(ref), abs=1e-13)


@pytest.mark.parametrize("model,k,expected", [
    (CountModel.poisson(9), "pi", (6.815, 8.835, 11.021)),
    (CountModel.poisson(9), "pi2", (6.856, 8.838, 10.982)),
    (CountModel.nb(9, 1), "pi3", (5.928, 8.504, 11.554)),
    (CountModel.zinb(1, 1, 0.8), "pi3", (0.000, 0.000, 0.270)),
])
def test_population_quartiles(model, k, expected):
    q = smoothed_quantile(population_design(model, k), [0.25, 0.5, 0.75])
    np.testing.assert_allclose(q, expected, atol=5e-4)


def test_level_mapping(poisson9):
    des = TruncationDesign(None, -0.5, 1.5, np.array([0.0, 1.0]), np.array([0.5, 1.0]), 0.0, 1.0)
    assert map_truncated_level(des, 0.37) == pytest.approx(0.37)
    des2 = TruncationDesign(None, -0.5, 1.5, np.array([0.0, 1.0]), np.array([0.5, 1.0]), 0.1, 0.9)
    assert map_truncated_level(des2, 0.5) == pytest.approx(0.5)
    pd = population_design(poisson9, "pi")
    with mpmath.workdps(50):
        f_u = mpmath.fsum(mpmath.exp(-9) * mpmath.mpf(9) ** y / mpmath.factorial(y)
                          for y in range(19))
    assert map_truncated_level(pd, 0.99) == pytest.approx(0.99 * float(f_u), abs=1e-14)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.2, float("nan")])
def test_levels_outside_open_interval_rejected(u):
    with pytest.raises(DomainError):
        smoothed_quantile(finite_design([0, 1], [0.5, 1.0]), u)


def test_quantile_curve_shape(poisson9):
    curve = quantile_curve(population_design(poisson9, "pi"), 9)
    assert curve.shape == (9, 2)
    np.testing.assert_allclose(curve[:, 0], np.arange(1, 10) / 10)
    assert np.all(np.diff(curve[:, 1]) > 0)
