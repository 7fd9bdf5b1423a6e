from collections import Counter

import numpy as np
import pytest
from scipy import stats

from lerwlab.lattice import Domain, ball, neighbors
from lerwlab.rng import RngStream
from lerwlab.sampling import exit_samples
from lerwlab.walk import Exit, FirstOf, Hit, StepCapExceeded, Trajectory, run_until, trajectory_vertex_set

ORIGIN = Domain(frozenset({(0, 0)}))


def test_exit_singleton_one_step():
    ends = Counter()
    for s in range(4000):
        t = run_until((0, 0), Exit(ORIGIN), RngStream(1, s))
        assert t.stop_time == 1 and len(t.vertices) == 2
        ends[t.vertices[-1]] += 1
    assert set(ends) == set(neighbors((0, 0)))
    assert stats.chisquare(list(ends.values())).pvalue > 0.001


def test_expected_exit_time_of_unit_ball():
    times = np.array([run_until((0, 0), Exit(ball((0, 0), 1)), RngStream(2, s)).stop_time for s in range(40000)])
    se = times.std(ddof=1) / np.sqrt(len(times))
    assert abs(times.mean() - 8 / 3) < 3 * se


def test_kernel_exit_time_matches():
    _, tt = exit_samples(ball((0, 0), 1), 200000, 3)
    se = tt.std(ddof=1) / np.sqrt(len(tt))
    assert abs(tt.mean() - 8 / 3) < 3 * se


def test_return_before_exit_probability():
    rule = FirstOf(Hit({(0, 0)}), Exit(ball((0, 0), 1)))
    hits = sum(isinstance(run_until((0, 0), rule, RngStream(4, s)).stop_reason, Hit) for s in range(40000))
    p = hits / 40000
    assert abs(p - 0.25) < 3 * np.sqrt(0.25 * 0.75 / 40000)


def test_fired_rule_holds_only_at_stop():
    D = ball((0, 0), 3)
    for s in range(200):
        t = run_until((0, 0), Exit(D), RngStream(5, s))
        assert t.vertices[t.stop_time] not in D
        assert all(v in D for v in t.vertices[1:t.stop_time])


def test_reproducible_trajectories():
    a = run_until((0, 0), Exit(ball((0, 0), 6)), RngStream(6, 9))
    b = run_until((0, 0), Exit(ball((0, 0), 6)), RngStream(6, 9))
    assert a.vertices == b.vertices


def test_one_step_distribution_uniform():
    counts = Counter()
    r = RngStream(7)
    for _ in range(10**6 // 4):
        counts[r.direction()] += 1
    d = RngStream(8).directions(10**6)
    assert stats.chisquare([counts[i] for i in range(4)]).pvalue > 0.001
    assert stats.chisquare(np.bincount(d, minlength=4)).pvalue > 0.001


def test_step_cap():
    with pytest.raises(StepCapExceeded):
        run_until((0, 0), Hit({(10**6, 0)}), RngStream(1), step_cap=100)


def test_visitor_and_streaming():
    seen = []
    t = run_until((0, 0), Exit(ball((0, 0), 4)), RngStream(9), visitor=lambda j, p: seen.append(p), store=False)
    full = run_until((0, 0), Exit(ball((0, 0), 4)), RngStream(9))
    assert seen == full.vertices and t.vertices == [full.vertices[-1]] and t.stop_time == full.stop_time


def test_vertex_set_examples():
    v, w = (1, 0), (0, 1)
    t = Trajectory([(0, 0), v, (0, 0), w], None, 3)
    assert trajectory_vertex_set(t, 0) == {(0, 0), v, w}
    assert trajectory_vertex_set(Trajectory([(0, 0), v], None, 1), 1) == {v}
    assert trajectory_vertex_set(t, 3) == {w}
    with pytest.raises(IndexError):
        trajectory_vertex_set(t, 4)


def _orbit(p):
    x, y = p
    return frozenset({(a, b) for a, b in [(x, y), (y, x)]} | {(s * a, t * b) for a, b in [(x, y), (y, x)]
                                                             for s in (1, -1) for t in (1, -1)})


def test_exit_point_symmetry():
    pts, _ = exit_samples(ball((0, 0), 5), 400000, 10)
    counts = Counter(map(tuple, pts.tolist()))
    orbits = {}
    for p, c in counts.items():
        orbits.setdefault(_orbit(p), {})[p] = c
    chi2, dof = 0.0, 0
    for orb, members in orbits.items():
        obs = np.array([members.get(p, 0) for p in sorted(orb)])
        exp = obs.mean()
        chi2 += ((obs - exp) ** 2 / exp).sum()
        dof += len(orb) - 1
    assert stats.chi2.sf(chi2, dof) > 0.001
