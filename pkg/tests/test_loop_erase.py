import itertools
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lerwlab.lattice import STEPS, Domain, ball, is_path
from lerwlab.loop_erase import (LoopEraser, count_steps, is_self_avoiding, loop_erase, reverse_loop_erase,
                                truncate_at_exit)
from lerwlab.rng import RngStream
from lerwlab.walk import Exit, run_until

O, E, N, W, S = (0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)


def _walk(dirs, start=(0, 0)):
    path = [start]
    for d in dirs:
        dx, dy = STEPS[d]
        path.append((path[-1][0] + dx, path[-1][1] + dy))
    return path


def _cycle_popping(path):
    """Delete each loop the moment it closes."""
    out = []
    for p in path:
        if p in out:
            del out[out.index(p) + 1:]
        else:
            out.append(p)
    return out


walks = st.lists(st.integers(0, 3), max_size=60).map(_walk)


def test_examples():
    assert loop_erase([O, E, (1, 1)]) == [O, E, (1, 1)]
    assert loop_erase([O, E, O, N]) == [O, N]
    assert loop_erase([O, E, (1, 1), N, O, N]) == [O, N]
    assert reverse_loop_erase([O, E, O, N]) == [O, N]
    assert reverse_loop_erase([O, E, (1, 1)]) == [O, E, (1, 1)]


def test_empty_path_rejected():
    with pytest.raises(ValueError):
        loop_erase([])


@given(walks)
def test_invariants(path):
    L = loop_erase(path)
    assert is_self_avoiding(L) and is_path(L)
    assert L[0] == path[0] and L[-1] == path[-1]
    assert set(L) <= set(path)
    assert loop_erase(L) == L


@given(walks)
def test_matches_cycle_popping(path):
    assert loop_erase(path) == _cycle_popping(path)


@given(walks)
def test_streaming_matches(path):
    e = LoopEraser(path[0])
    e.extend(path[1:])
    assert e.path == loop_erase(path)


@given(walks)
def test_reverse_is_conjugate(path):
    R = reverse_loop_erase(path)
    assert R == loop_erase(path[::-1])[::-1]
    assert is_self_avoiding(R) and R[0] == path[0] and R[-1] == path[-1]


def test_forward_and_reverse_can_differ():
    found = None
    for n in range(1, 9):
        for dirs in itertools.product(range(4), repeat=n):
            p = _walk(dirs)
            if loop_erase(p) != reverse_loop_erase(p):
                found = p
                break
        if found:
            break
    assert found is not None
    assert reverse_loop_erase(found) == loop_erase(found[::-1])[::-1] != loop_erase(found)


def test_count_steps():
    g = [O, E, (2, 0), (3, 0), (4, 0)]
    assert count_steps(g) == 4
    assert count_steps([O, E, (2, 0)], ball(O, 1)) == 2
    assert count_steps(g, Domain(frozenset(g))) == 5


@given(walks)
def test_restricted_count_bounded(path):
    L = loop_erase(path)
    assert 0 <= count_steps(L, ball(O, 3)) <= count_steps(L) + 1


def test_lerw_to_ball_boundary_has_at_least_n_steps():
    for n in (1, 3, 6):
        for s in range(100):
            t = run_until(O, Exit(ball(O, n)), RngStream(n, s))
            assert count_steps(loop_erase(t.vertices)) >= n


def test_truncate_at_exit():
    assert truncate_at_exit([O, E, (2, 0), (3, 0)], ball(O, 1)) == [O, E, (2, 0)]


def test_linear_time():
    r = RngStream(1)
    small = _walk(r.directions(200_000).tolist())
    big = _walk(r.directions(800_000).tolist())

    def clock(p):
        t = time.perf_counter()
        loop_erase(p)
        return time.perf_counter() - t

    ratio = min(clock(big) for _ in range(3)) / min(clock(small) for _ in range(3))
    assert ratio < 8
