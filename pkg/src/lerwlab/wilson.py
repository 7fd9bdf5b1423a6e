"""Wired uniform spanning trees by Wilson's algorithm."""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Sequence, TextIO

import numpy as np

from . import _kernels as K
from .lattice import STEPS, Domain, Grid, Point
from .sampling import DEFAULT_STEP_CAP, encode_path, run_blocks

ROOT = "ROOT"


@dataclass
class WiredTree:
    """Parent map on the sites of D; parents outside D are the wired root."""

    domain: Domain
    parent: dict

    def edges(self) -> int:
        return len(self.parent)

    def parent_of(self, v: Point):
        p = self.parent[v]
        return ROOT if p not in self.domain else p

    def export(self, out: TextIO) -> None:
        for v in sorted(self.parent):
            p = self.parent_of(v)
            ps = ROOT if p == ROOT else f"{p[0]},{p[1]}"
            out.write(f"{v[0]},{v[1]} -> {ps}\n")

    def is_spanning_tree(self) -> bool:
        """Every site reaches the root and no cycle exists."""
        state: dict = {}
        for v in self.parent:
            seen = []
            cur = v
            while cur in self.domain and cur not in state:
                if cur in seen:
                    return False
                seen.append(cur)
                cur = self.parent[cur]
            ok = cur not in self.domain or state.get(cur, False)
            for s in seen:
                state[s] = ok
            if not ok:
                return False
        return len(self.parent) == len(self.domain)


def ust_branch(tree: WiredTree, v: Point) -> list[Point]:
    """Parent chain from v to the boundary; the final vertex is the boundary
    point through which the branch meets the root."""
    if v not in tree.domain:
        raise ValueError(f"{v} is not a site of the tree's domain")
    out = [v]
    while out[-1] in tree.domain:
        out.append(tree.parent[out[-1]])
        if len(out) > len(tree.domain) + 1:
            raise RuntimeError("parent map has a cycle")
    return out


def _scan_order(D: Domain, order: Sequence[Point] | None) -> list[Point]:
    if order is None:
        return sorted(D.sites)
    order = list(order)
    if set(order) != set(D.sites) or len(order) != len(D):
        raise ValueError("scan order must list every site exactly once")
    return order


def _wilson_block(seed, mask, site_id, ox, oy, cap, first, count):
    return K.wilson_parents(np.uint64(seed), first, count, mask, site_id, ox, oy, cap)


def wilson_parent_codes(D: Domain, trials: int, seed: int, order=None,
                        workers: int | None = None, step_cap: int = DEFAULT_STEP_CAP):
    """Raw kernel output: (scan order, parent direction codes per tree)."""
    order = _scan_order(D, order)
    g = Grid(D, pad=1)
    site_id = np.full(g.shape, -1, dtype=np.int64)
    cells = np.array([g.cell(p) for p in order], dtype=np.int64)
    site_id[cells[:, 0], cells[:, 1]] = np.arange(len(order))
    fn = partial(_wilson_block, seed, g.mask, site_id, cells[:, 0].copy(), cells[:, 1].copy(), step_cap)
    return order, run_blocks(fn, trials, workers)


def wilson_ust(D: Domain, seed: int, stream: int = 0, order=None) -> WiredTree:
    """One wired UST; the sites are scanned in ``order`` (default: sorted)."""
    order = _scan_order(D, order)
    g = Grid(D, pad=1)
    site_id = np.full(g.shape, -1, dtype=np.int64)
    cells = np.array([g.cell(p) for p in order], dtype=np.int64)
    site_id[cells[:, 0], cells[:, 1]] = np.arange(len(order))
    codes = K.wilson_parents(np.uint64(seed), stream, 1, g.mask, site_id,
                             cells[:, 0].copy(), cells[:, 1].copy(), DEFAULT_STEP_CAP)[0]
    parent = {}
    for p, d in zip(order, codes):
        dx, dy = STEPS[int(d)]
        parent[p] = (p[0] + dx, p[1] + dy)
    return WiredTree(D, parent)


def branch_codes(D: Domain, trials: int, seed: int, v: Point = (0, 0), order=None,
                 workers: int | None = None) -> np.ndarray:
    """Path codes of the branch from v in independent wired USTs."""
    order, parents = wilson_parent_codes(D, trials, seed, order, workers)
    pos = {p: i for i, p in enumerate(order)}
    out = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        row = parents[t]
        path = [v]
        while path[-1] in pos:
            d = STEPS[int(row[pos[path[-1]]])]
            path.append((path[-1][0] + d[0], path[-1][1] + d[1]))
        out[t] = encode_path(path)
    return out
