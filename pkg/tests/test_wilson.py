import io

import numpy as np
import pytest

from lerwlab.lattice import Domain, ball
from lerwlab.oracle import empirical_tv, lerw_exact_laplacian, paths_to_codes
from lerwlab.stats import empirical_pmf, tv_distance
from lerwlab.wilson import ROOT, WiredTree, branch_codes, ust_branch, wilson_ust

O = (0, 0)


def test_singleton_tree():
    D = Domain(frozenset({O}))
    for s in range(20):
        t = wilson_ust(D, 1, s)
        assert t.edges() == 1 and t.parent_of(O) == ROOT


def test_edge_count_and_spanning():
    for n in (1, 2, 4, 7):
        D = ball(O, n)
        for s in range(20):
            t = wilson_ust(D, 2, s)
            assert t.edges() == len(D)
            assert t.is_spanning_tree()


def test_cycle_detected():
    D = Domain(frozenset({(0, 0), (1, 0)}))
    assert not WiredTree(D, {(0, 0): (1, 0), (1, 0): (0, 0)}).is_spanning_tree()


def test_branch_properties():
    D = ball(O, 6)
    t = wilson_ust(D, 3)
    b = ust_branch(t, O)
    assert len(set(b)) == len(b) and b[-1] not in D and all(p in D for p in b[:-1])
    edge = (6, 0)
    if t.parent_of(edge) == ROOT:
        assert len(ust_branch(t, edge)) == 2
    with pytest.raises(ValueError):
        ust_branch(t, (50, 50))


def test_export_format():
    t = wilson_ust(ball(O, 1), 4)
    buf = io.StringIO()
    t.export(buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 5
    assert all(" -> " in ln for ln in lines)
    assert sum(ln.endswith(ROOT) for ln in lines) >= 1


def test_branch_law_matches_oracle_small():
    D = ball(O, 2)
    exact = paths_to_codes(lerw_exact_laplacian(D))
    assert empirical_tv(branch_codes(D, 40000, 5), exact) < 0.03


def test_scan_order_invariance():
    D = ball(O, 2)
    order = sorted(D.sites, key=lambda p: (-p[1], p[0]))
    a = branch_codes(D, 40000, 6)
    b = branch_codes(D, 40000, 7, order=order)
    assert tv_distance(empirical_pmf(a), empirical_pmf(b)) < 0.03
    with pytest.raises(ValueError):
        branch_codes(D, 10, 1, order=order[:-1])


def test_branch_length_grows_like_lerw():
    means = []
    for n in (8, 16, 32):
        D = ball(O, n)
        lens = [len(ust_branch(wilson_ust(D, 8, s), O)) - 1 for s in range(300)]
        means.append(np.mean(lens))
    slope = np.polyfit(np.log([8, 16, 32]), np.log(means), 1)[0]
    assert 1.0 < slope < 1.5
