import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lerwlab.lattice import STEPS, ball
from lerwlab.oracle import empirical_tv, exact_hat_es, lerw_exact_laplacian, paths_to_codes
from lerwlab.sampling import (decode_path, encode_path, escape_trials, exit_samples, lerw_codes,
                              lerw_lengths, run_blocks)

O = (0, 0)


@given(st.lists(st.integers(0, 3), max_size=30), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_code_round_trip(dirs, start):
    path = [start]
    for d in dirs:
        path.append((path[-1][0] + STEPS[d][0], path[-1][1] + STEPS[d][1]))
    assert decode_path(encode_path(path), start) == path


def test_worker_count_does_not_change_output():
    D = ball(O, 6)
    a = lerw_lengths(D, 10000, 3, workers=1)
    b = lerw_lengths(D, 10000, 3, workers=3)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    assert np.array_equal(escape_trials(5, 9000, 4, workers=1)[0], escape_trials(5, 9000, 4, workers=2)[0])


def test_prefix_stability():
    a = lerw_lengths(ball(O, 5), 5000, 9)[0]
    b = lerw_lengths(ball(O, 5), 9000, 9)[0]
    assert np.array_equal(a, b[:5000])


def test_run_blocks_offsets():
    out = run_blocks(lambda first, count: np.arange(first, first + count), 10000, 1, first=7)
    assert np.array_equal(out, np.arange(7, 10007))


def test_unit_ball_lengths():
    steps, _, _ = lerw_lengths(ball(O, 1), 10000, 1)
    assert (steps == 2).all()


def test_b2_mean_length():
    steps, _, _ = lerw_lengths(ball(O, 2), 100000, 2)
    se = steps.std(ddof=1) / np.sqrt(len(steps))
    assert abs(steps.mean() - 3.22879684418146) < 3 * se


def test_lengths_at_least_radius():
    for n in (4, 10, 20):
        steps, inner, ex = lerw_lengths(ball(O, 2 * n), 2000, n, inner=ball(O, n))
        assert steps.min() >= 2 * n
        assert (inner <= steps + 1).all() and (inner >= n).all()
        assert (ex >= n).all() and (ex <= steps).all()


def test_forward_and_reverse_laws_small():
    D = ball(O, 2)
    exact = paths_to_codes(lerw_exact_laplacian(D))
    assert empirical_tv(lerw_codes(D, 100000, 3), exact) < 0.02
    assert empirical_tv(lerw_codes(D, 100000, 4, reverse=True), exact) < 0.02


def test_truncated_codes_are_short():
    codes = lerw_codes(ball(O, 6), 5000, 5, truncate=ball(O, 1))
    for c in np.unique(codes):
        p = decode_path(int(c), O)
        assert len(p) == 3 and p[-1] not in ball(O, 1)


def test_step_cap():
    with pytest.raises(RuntimeError):
        lerw_lengths(ball(O, 30), 10, 1, step_cap=5)


def test_exit_points_on_boundary():
    pts, tt = exit_samples(ball(O, 4), 5000, 6)
    r2 = (pts**2).sum(axis=1)
    assert (r2 > 16).all() and (tt >= 5).all()


def test_escape_one():
    ok, _ = escape_trials(1, 10**6, 7)
    se = np.sqrt(25 / 48 * 23 / 48 / 10**6)
    assert abs(ok.mean() - 25 / 48) < 3 * se


def test_hat_escape_one():
    ok, _ = escape_trials(1, 200000, 8, eta_radius=4, truncate_radius=1)
    p = exact_hat_es(1)
    assert abs(ok.mean() - p) < 3 * np.sqrt(p * (1 - p) / 200000)


def test_escape_walk_ball_must_fit():
    with pytest.raises(ValueError):
        escape_trials(5, 10, 1, eta_radius=4)
