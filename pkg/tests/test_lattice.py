import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lerwlab.lattice import (Domain, Grid, adjacent, ball, cone_annulus, in_cone_annulus, inner_boundary,
                             is_connected, is_path, is_simply_connected, neighbors, outer_boundary,
                             path_length, square)

points = st.tuples(st.integers(-20, 20), st.integers(-20, 20))
small_sets = st.frozensets(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=30)


def test_ball_sizes():
    assert ball((0, 0), 0).sites == {(0, 0)}
    assert len(ball((0, 0), 1)) == 5
    assert len(ball((0, 0), 2)) == 13


def test_square_sizes():
    assert [len(square(n)) for n in (0, 1, 2)] == [1, 9, 25]


@given(st.integers(0, 40), points)
def test_ball_matches_enumeration(n, c):
    brute = {(c[0] + x, c[1] + y) for x in range(-n, n + 1) for y in range(-n, n + 1) if x * x + y * y <= n * n}
    assert ball(c, n).sites == brute


def test_boundaries_examples():
    assert outer_boundary(Domain(frozenset({(0, 0)}))) == set(neighbors((0, 0)))
    assert len(outer_boundary(ball((0, 0), 1))) == 8
    assert inner_boundary(ball((0, 0), 1)) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_empty_domain_has_empty_boundaries():
    D = Domain(frozenset())
    assert outer_boundary(D) == set() and inner_boundary(D) == set()


@given(small_sets)
def test_boundary_invariants(sites):
    D = Domain(sites)
    ob, ib = outer_boundary(D), inner_boundary(D)
    assert not (ob & D.sites)
    assert ib <= D.sites
    assert all(any(q in D for q in neighbors(p)) for p in ob)
    assert all(any(q not in D for q in neighbors(p)) for p in ib)


def test_simple_connectivity_examples():
    assert is_simply_connected(ball((0, 0), 3))
    assert not is_simply_connected(ball((0, 0), 3).minus(ball((0, 0), 1)))
    diag = Domain(frozenset(square(1).sites | {(x + 3, y + 3) for x, y in square(1).sites}))
    assert not is_connected(diag)
    assert not is_simply_connected(diag)


@pytest.mark.parametrize("n", range(0, 65))
def test_balls_and_squares_simply_connected(n):
    assert is_simply_connected(ball((0, 0), n))
    assert is_simply_connected(square(n))


def test_cone_annulus_examples():
    assert in_cone_annulus((1, 0), 2, (2, 0))
    assert in_cone_annulus((1, 0), 2, (2, 1))
    assert not in_cone_annulus((1, 0), 2, (1, 2))
    assert not in_cone_annulus((1, 0), 2, (1, 0))


@given(points, st.integers(1, 30))
def test_cone_annulus_inside_ball(x, n):
    A = cone_annulus(x, n)
    assert A.sites <= ball(x, n).sites
    assert x not in A


@given(points, st.integers(1, 30), points)
def test_cone_annulus_matches_float_definition(x, n, z):
    d = (z[0] - x[0], z[1] - x[1])
    r = math.hypot(*d)
    ok = n / 4 - 1e-9 <= r <= 3 * n / 4 + 1e-9 and r > 0 and abs(math.atan2(d[1], d[0])) <= math.pi / 4 + 1e-12
    assert in_cone_annulus(x, n, z) == ok


def test_paths_and_adjacency():
    assert adjacent((0, 0), (1, 0)) and not adjacent((0, 0), (1, 1))
    assert is_path([(0, 0), (1, 0), (1, 1)])
    assert not is_path([(0, 0), (2, 0)])
    assert path_length([(0, 0)]) == 0
    assert path_length([(0, 0), (1, 0), (1, 1)]) == 2


@given(small_sets)
def test_text_round_trip(sites):
    D = Domain(sites)
    assert Domain.from_text(D.to_text()) == D


def test_descriptor_round_trip():
    for D in (ball((1, -2), 5), square(3), Domain(frozenset({(0, 0), (1, 0)}))):
        assert Domain.from_descriptor(D.descriptor()) == D


def test_grid_raster():
    D = ball((0, 0), 2)
    g = Grid(D)
    assert g.mask.sum() == 13
    for p in D:
        assert g.mask[g.cell(p)] == 1
        assert g.point(*g.cell(p)) == p
