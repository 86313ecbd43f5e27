import itertools
import math

import numpy as np
import pytest

from discrisk.asymptotics import (
    QuantileCovariance, d_matrix, h_matrix, hdh, normal_ci, quantile_covariance, z_quantile,
)
from discrisk.datasets import load_dataset
from discrisk.distributions import CountModel
from discrisk.special import beta_pdf
from discrisk.truncation import empirical_design, finite_design, population_design


def brute_force_hdh(design, levels):
    """Oracle: explicit index sums over H[i, a] D[a, b] H[j, b]."""
    y, f, d = design.support, design.f_star, design.d
    out = np.zeros((len(levels), len(levels)))
    for i, j in itertools.product(range(len(levels)), repeat=2):
        total = 0.0
        for a, b in itertools.product(range(d - 1), repeat=2):
            if not (0 < f[a] < 1 and 0 < f[b] < 1):
                continue
            dab = min(f[a], f[b]) * (1 - max(f[a], f[b]))
            ha = (y[a] - y[a + 1]) * beta_pdf(f[a], (d + 1) * levels[i], (d + 1) * (1 - levels[i]))
            hb = (y[b] - y[b + 1]) * beta_pdf(f[b], (d + 1) * levels[j], (d + 1) * (1 - levels[j]))
            total += ha * dab * hb
        out[i, j] = total
    return out


def test_three_point_designs_match_index_sum_oracle():
    rng = np.random.default_rng(7)
    levels = [0.2, 0.5, 0.85]
    for _ in range(25):
        support = np.cumsum(rng.integers(1, 5, size=3)).astype(float)
        des = finite_design(support, np.cumsum(rng.dirichlet(np.ones(3))))
        got = hdh(des, levels)
        np.testing.assert_allclose(got, brute_force_hdh(des, levels), atol=1e-12, rtol=0)
        np.testing.assert_array_equal(got, got.T)
        assert np.linalg.eigvalsh(got).min() >= -1e-12


def test_two_point_scalar_expansion():
    des = finite_design([0.0, 3.0], [0.5, 1.0])
    b = beta_pdf(0.5, 1.5, 1.5)
    assert hdh(des, [0.5])[0, 0] == pytest.approx((0 - 3) ** 2 * b**2 * 0.25, rel=1e-14)


def test_d_matrix_definition():
    des = finite_design([0, 1, 2, 3], [0.1, 0.4, 0.7, 1.0])
    dm = d_matrix(des)
    assert dm.shape == (3, 3)
    assert dm[0, 2] == pytest.approx(0.1 * 0.3)
    assert dm[1, 1] == pytest.approx(0.4 * 0.6)


def test_h_matrix_zero_on_boundary_columns():
    des = population_design(CountModel.zinb(1, 1, 0.8), "pi3")
    h = h_matrix(des, [0.5])
    assert np.all(np.isfinite(h))


def test_poisson_pi_table_matrix(poisson9):
    got = quantile_covariance(population_design(poisson9, "pi"), [0.25, 0.5, 0.75], 1).scaled
    ref = [[11.367, 8.360, 5.539], [8.360, 11.497, 9.753], [5.539, 9.753, 15.478]]
    np.testing.assert_allclose(got, ref, atol=5e-4)


def test_nb_pi3_diagonal():
    des = population_design(CountModel.nb(9, 1), "pi3")
    np.testing.assert_allclose(np.diag(hdh(des, [0.25, 0.5, 0.75])), [17.673, 28.408, 40.813],
                               atol=5e-4)


def test_normal_ci_trivial_cases():
    qc = QuantileCovariance(np.array([0.5, 0.6]), np.array([0.0, 2.0]),
                            np.array([[1.0, 0.0], [0.0, 0.0]]), 1)
    ci = normal_ci(qc, 0.95)
    assert ci[0] == pytest.approx([-1.959963984540054, 1.959963984540054], abs=1e-12)
    assert ci[1].tolist() == [2.0, 2.0]


def test_z_quantile():
    assert z_quantile(0.95) == pytest.approx(1.959963984540054, abs=1e-12)


def test_o_interval_at_099():
    des = empirical_design(load_dataset("O"), "pi3", clip_to_data=True)
    qc = quantile_covariance(des, [0.99], 9461)
    lo, hi = normal_ci(qc, 0.95)[0]
    assert (round(lo, 2), round(hi, 2)) == (5.15, 5.50)
