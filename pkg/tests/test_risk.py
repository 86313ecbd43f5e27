import numpy as np
import pytest

from discrisk.datasets import DATASETS, load_dataset
from discrisk.empirical import DiscreteSample
from discrisk.errors import DomainError
from discrisk.risk import (
    c5ns_levels, c5ns_summary, continuity_corrected, design_tail_prob,
    interpolated_tail_prob, smoothed_tail_prob, tail_prob_bootstrap, var_classical,
    var_smoothed,
)
from discrisk.smoothing import smoothed_quantile
from discrisk.truncation import empirical_design


def test_c5ns_levels():
    np.testing.assert_allclose(c5ns_levels(0.90), [0.91, 0.925, 0.95, 0.975, 0.99])
    np.testing.assert_allclose(c5ns_levels(0.0), [0.10, 0.25, 0.50, 0.75, 0.90])
    np.testing.assert_allclose(c5ns_levels(1.0), 1.0)


def test_c5ns_row_o(data_o):
    res = c5ns_summary(data_o, 0.90, "pi3", 0.95)
    np.testing.assert_allclose(res.quantiles, [1.35, 1.60, 2.28, 3.70, 5.33], atol=0.01)
    np.testing.assert_allclose(res.intervals[-1], [5.15, 5.50], atol=0.02)


def test_c5ns_row_m3():
    res = c5ns_summary(load_dataset("M3"))
    np.testing.assert_allclose(res.quantiles, [2.30, 2.79, 3.85, 5.26, 6.27], atol=0.01)


def test_c5ns_rows_increase_down_the_table():
    rows = np.array([c5ns_summary(load_dataset(n)).quantiles for n in DATASETS])
    assert np.all(np.diff(rows, axis=0) >= 0)


def test_var_estimators(data_o):
    assert var_classical(data_o, 0.80) == 0
    assert var_classical(data_o, 0.90) == 1
    assert var_smoothed(data_o, 0.90) == pytest.approx(
        smoothed_quantile(empirical_design(data_o, "pi3", clip_to_data=True), 0.90))


def test_var_classical_exact_hit():
    s = DiscreteSample.from_counts([(0, 1), (1, 1), (2, 2)])
    assert var_classical(s, 0.5) == 1


def test_continuity_correction():
    assert continuity_corrected(0) == 0.5
    assert continuity_corrected(1.29) == 1.29


def test_interpolated_tail_values(data_o):
    assert interpolated_tail_prob(data_o, 0) == pytest.approx(1621 / 9461)
    assert interpolated_tail_prob(data_o, 1.29) == pytest.approx(
        0.71 * 304 / 9461 + 0.29 * 65 / 9461)
    assert interpolated_tail_prob(data_o, 7) == 0.0
    assert interpolated_tail_prob(data_o, 9.5) == 0.0


def test_smoothed_tail_values(data_o):
    assert smoothed_tail_prob(data_o, "pi3", 0) == pytest.approx(0.208, abs=0.005)
    assert smoothed_tail_prob(data_o, "pi3", 1.29) == pytest.approx(0.095, abs=0.005)
    assert smoothed_tail_prob(data_o, "pi3", -1) == 1.0
    assert smoothed_tail_prob(data_o, "pi3", 50) == 0.0


def test_tail_prob_inverts_quantile(data_o):
    des = empirical_design(data_o, "pi3", clip_to_data=True)
    for u in (0.3, 0.9, 0.97):
        q = smoothed_quantile(des, u)
        assert design_tail_prob(des, q) == pytest.approx(1 - u, abs=1e-9)


def test_tail_prob_monotone_in_threshold(data_o):
    des = empirical_design(data_o, "pi3", clip_to_data=True)
    probs = [design_tail_prob(des, a) for a in np.linspace(-1, 8, 40)]
    assert np.all(np.diff(probs) <= 1e-12)


def test_bootstrap_shares_resamples_across_methods(data_o):
    sm = tail_prob_bootstrap(data_o, [0, 1.29], "smoothed", m=200, seed=17)
    ip = tail_prob_bootstrap(data_o, [0, 1.29], "interpolated", m=200, seed=17)
    assert [e.threshold for e in sm] == [0.0, 1.29]
    assert sm[0].effective_threshold == 0.5 and ip[0].effective_threshold == 0.0
    assert all(s.mean >= i.mean for s, i in zip(sm, ip))
    assert sm[1].cv < ip[1].cv


def test_bad_method_rejected(data_o):
    with pytest.raises(DomainError):
        tail_prob_bootstrap(data_o, [0], "kernel", m=10, seed=1)


@pytest.mark.parametrize("p", [0.0, 1.0, 1.5])
def test_c5ns_rejects_bad_p(data_o, p):
    with pytest.raises(DomainError):
        c5ns_summary(data_o, p)
