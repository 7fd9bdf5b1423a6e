import io
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lerwlab.lattice import STEPS, Domain, ball, is_connected, neighbors
from lerwlab.oracle import (MAX_ENUM_SITES, PathDistribution, domain_markov_check, exact_es, exact_length_pmf,
                            lerw_exact_green_product, lerw_exact_laplacian, parse_path, truncate_distribution)
from lerwlab.potential import PreconditionError

O = (0, 0)
B1, B2 = ball(O, 1), ball(O, 2)


@pytest.fixture(scope="module")
def law_b2():
    return lerw_exact_laplacian(B2)


def test_singleton_domain():
    d = lerw_exact_laplacian(Domain(frozenset({O})))
    assert len(d) == 4 and all(p == pytest.approx(0.25, abs=1e-15) for p in d.values())
    assert lerw_exact_green_product(Domain(frozenset({O})), [O, (1, 0)]) == pytest.approx(0.25, abs=1e-15)


def test_unit_ball_uniform():
    d = lerw_exact_laplacian(B1)
    assert len(d) == 12
    assert all(p == pytest.approx(1 / 12, abs=1e-14) for p in d.values())
    assert lerw_exact_green_product(B1, [O, (1, 0), (2, 0)]) == pytest.approx(1 / 12, abs=1e-14)


def test_b2_normalized_and_routes_agree(law_b2):
    assert abs(law_b2.total() - 1) < 1e-12
    assert len(law_b2) == 148
    for path, p in law_b2.items():
        assert abs(p - lerw_exact_green_product(B2, path)) < 1e-10


def test_law_invariant_under_lattice_symmetries(law_b2):
    for a, b, s in itertools.product((1, -1), (1, -1), (0, 1)):
        def g(p):
            q = (p[1], p[0]) if s else p
            return (q[0] * a, q[1] * b)
        for path, p in law_b2.items():
            assert law_b2[tuple(g(v) for v in path)] == pytest.approx(p, abs=1e-13)


def test_invalid_paths_rejected():
    with pytest.raises(ValueError):
        lerw_exact_green_product(B1, [O, (1, 0)])
    with pytest.raises(ValueError):
        lerw_exact_green_product(B1, [O, (2, 0)])
    with pytest.raises(ValueError):
        lerw_exact_green_product(B1, [O, (1, 0), O, (0, 1), (0, 2)])


def test_size_refusal():
    with pytest.raises(PreconditionError, match="sites"):
        lerw_exact_laplacian(ball(O, 3))
    assert MAX_ENUM_SITES >= 13


def _connected_domains():
    @st.composite
    def grow(draw):
        sites = {O}
        for _ in range(draw(st.integers(0, 12))):
            frontier = sorted({q for p in sites for q in neighbors(p)} - sites)
            sites.add(draw(st.sampled_from(frontier)))
        return Domain(frozenset(sites))
    return grow()


@settings(max_examples=25)
@given(_connected_domains())
def test_cross_oracle_on_random_domains(D):
    assert is_connected(D) and len(D) <= 13
    d = lerw_exact_laplacian(D)
    assert abs(d.total() - 1) < 1e-12
    for path, p in d.items():
        assert abs(p - lerw_exact_green_product(D, path)) < 1e-10


def test_truncation(law_b2):
    assert truncate_distribution(law_b2, 2) == law_b2
    t = truncate_distribution(law_b2, 1)
    assert len(t) == 12 and abs(t.total() - 1) < 1e-12
    assert all(len(path) == 3 for path in t)


def test_length_pmfs(law_b2):
    assert exact_length_pmf(lerw_exact_laplacian(Domain(frozenset({O})))) == pytest.approx({1: 1.0})
    assert exact_length_pmf(lerw_exact_laplacian(B1)) == pytest.approx({2: 1.0})
    pmf = exact_length_pmf(law_b2)
    assert len(pmf) > 1
    assert sum(k * v for k, v in pmf.items()) == pytest.approx(3.22879684418146, abs=1e-12)


def test_domain_markov(law_b2):
    assert domain_markov_check(B2, [O], law_b2) < 1e-12
    assert domain_markov_check(B2, [O, (1, 0)], law_b2) < 1e-10
    assert max(domain_markov_check(B2, [O, v], law_b2) for v in neighbors(O)) < 1e-10
    with pytest.raises(PreconditionError):
        domain_markov_check(B2, [O, (1, 0), (0, 0)], law_b2)


def test_csv_round_trip(law_b2):
    buf = io.StringIO()
    law_b2.to_csv(buf)
    buf.seek(0)
    back = PathDistribution.from_csv(buf)
    assert back == law_b2
    assert parse_path("0,0-1,0-1,-1") == ((0, 0), (1, 0), (1, -1))
    assert parse_path("-1,0--2,0") == ((-1, 0), (-2, 0))


def test_es_one_by_brute_force():
    """Each LERW path [0, v, w] has mass 1/12; an independent walk from 0
    leaves B_1 within two steps or returns to 0."""
    total = 0.0
    for path in lerw_exact_laplacian(B1):
        eta = set(path)
        miss = 0
        for d1, d2 in itertools.product(range(4), repeat=2):
            u = STEPS[d1]
            x2 = (u[0] + STEPS[d2][0], u[1] + STEPS[d2][1])
            miss += u not in eta and x2 not in eta
        total += miss / 16 / 12
    assert total == pytest.approx(25 / 48, abs=1e-15)
    assert exact_es(1) == pytest.approx(25 / 48, abs=1e-14)
    assert exact_es(0) == 1.0
