import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lerwlab.stats import EstimatorSummary, empirical_pmf, fit_line, jackknife_ratio_moments, tv_distance


@given(st.lists(st.floats(0, 100), min_size=2, max_size=200))
def test_summary_invariants(xs):
    s = EstimatorSummary.from_samples("x", xs, seed=1)
    assert s.se == pytest.approx(math.sqrt(s.variance / s.trials))
    assert s.ci[0] == pytest.approx(s.mean - 1.96 * s.se)
    assert s.ci[1] == pytest.approx(s.mean + 1.96 * s.se)


def test_exact_summary():
    s = EstimatorSummary.exact_value("Es", 1.0, n=0)
    assert s.exact and s.se == 0 and s.ci == (1.0, 1.0)
    assert s.as_dict()["extra"] == {"n": 0}


def test_moment_ratios_of_exponential_are_one():
    x = np.random.default_rng(0).exponential(3.0, 10**6)
    rows = jackknife_ratio_moments(x, 4)
    for r in rows:
        assert abs(r["ratio"] - 1) < 4 * r["ratio_se"] + 1e-12
    assert rows[0]["moment"] == pytest.approx(x.mean())
    assert rows[1]["moment"] == pytest.approx((x**2).mean())


def test_jackknife_se_of_mean_matches_classical():
    x = np.random.default_rng(1).normal(5, 2, 5000)
    r = jackknife_ratio_moments(x, 1)[0]
    assert r["moment_se"] == pytest.approx(x.std(ddof=1) / math.sqrt(len(x)), rel=1e-9)


def test_fit_line_exact():
    f = fit_line([1, 2, 3, 4], [3, 5, 7, 9])
    assert f.slope == pytest.approx(2) and f.intercept == pytest.approx(1) and f.r2 == pytest.approx(1)


def test_tv_and_pmf():
    p = empirical_pmf([1, 1, 2, 3])
    assert p == {1: 0.5, 2: 0.25, 3: 0.25}
    assert tv_distance(p, p) == 0
    assert tv_distance({1: 1.0}, {2: 1.0}) == 1.0
