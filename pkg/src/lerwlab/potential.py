"""Exact potential theory on finite pieces of Z^2.

Green's functions, Dirichlet problems for hitting probabilities, and numeric
checks of the identities and inequalities the LERW estimates lean on.
Systems with at most ``DENSE_MAX`` unknowns are solved densely; larger ones
use a sparse LU factorization (or preconditioned CG on request).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .lattice import Domain, Grid, Point, ball, inner_boundary, neighbors, reflect

DENSE_MAX = 4000
CG_TOL = 1e-10
_SHIFTS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class PreconditionError(ValueError):
    pass


def _frame(points: Iterable[Point], pad: int = 1) -> Grid:
    return Grid(Domain(frozenset(points)), pad=pad)


def _operator(grid: Grid, unknown: np.ndarray):
    """I - P restricted to the unknown cells, plus the cell index table."""
    idx = np.full(grid.shape, -1, dtype=np.int64)
    ci, cj = np.nonzero(unknown)
    n = len(ci)
    idx[ci, cj] = np.arange(n)
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.ones(n)]
    for dx, dy in _SHIFTS:
        nb = idx[ci + dx, cj + dy]
        keep = nb >= 0
        rows.append(np.nonzero(keep)[0])
        cols.append(nb[keep])
        vals.append(np.full(keep.sum(), -0.25))
    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return A, idx, ci, cj


class _Factor:
    def __init__(self, A: sp.csr_matrix, method: str = "auto"):
        n = A.shape[0]
        if method == "auto":
            method = "dense" if n <= DENSE_MAX else "splu"
        self.method = method
        self.A = A
        if method == "dense":
            self._lu = sla.lu_factor(A.toarray())
        elif method == "splu":
            self._lu = spla.splu(A.tocsc())
        elif method == "cg":
            self._diag = A.diagonal()
        else:
            raise ValueError(f"unknown solver {method!r}")

    def solve(self, b: np.ndarray) -> np.ndarray:
        if self.method == "dense":
            return sla.lu_solve(self._lu, b)
        if self.method == "splu":
            return self._lu.solve(b)
        M = spla.LinearOperator(self.A.shape, matvec=lambda v: v / self._diag)
        x, info = spla.cg(self.A, b, rtol=CG_TOL, atol=0.0, M=M, maxiter=100 * self.A.shape[0])
        if info != 0:
            raise RuntimeError(f"CG did not converge (info={info})")
        return x


class GreenOperator:
    """G_D = (I - P_D)^{-1}: expected visits before leaving D."""

    def __init__(self, D: Domain, method: str = "auto"):
        if len(D) == 0:
            raise ValueError("Green's function of an empty domain")
        self.domain = D
        self.grid = Grid(D, pad=1)
        A, self._idx, ci, cj = _operator(self.grid, self.grid.mask.astype(bool))
        self.sites = [self.grid.point(i, j) for i, j in zip(ci, cj)]
        self._factor = _Factor(A, method)
        self._cols: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.sites)

    def index(self, p: Point) -> int:
        i, j = self.grid.cell(p)
        if not (0 <= i < self.grid.shape[0] and 0 <= j < self.grid.shape[1]) or self._idx[i, j] < 0:
            raise KeyError(f"{p} is not in the domain")
        return int(self._idx[i, j])

    @property
    def operator(self) -> sp.csr_matrix:
        return self._factor.A

    def solve(self, b: np.ndarray) -> np.ndarray:
        return self._factor.solve(np.asarray(b, dtype=float))

    def column(self, y: Point) -> np.ndarray:
        """G_D(., y) over ``self.sites`` (equal to the row by symmetry)."""
        k = self.index(y)
        if k not in self._cols:
            e = np.zeros(len(self))
            e[k] = 1.0
            self._cols[k] = self.solve(e)
        return self._cols[k]

    def __call__(self, x: Point, y: Point) -> float:
        if x not in self.domain or y not in self.domain:
            return 0.0
        return float(self.column(y)[self.index(x)])

    def matrix(self) -> np.ndarray:
        if len(self) > DENSE_MAX:
            raise ValueError("dense Green matrix requested for a large domain")
        return self.solve(np.eye(len(self)))

    def residual(self) -> float:
        G = self.matrix()
        return float(np.abs(self.operator @ G - np.eye(len(self))).max())

    def dump(self, out: TextIO, which: str = "green") -> None:
        """Coordinate text dump, one ``row col value`` line per nonzero entry."""
        M = sp.coo_matrix(self.matrix() if which == "green" else self.operator)
        for r, c, v in zip(M.row, M.col, M.data):
            if v != 0.0:
                out.write(f"{r} {c} {v:.17g}\n")


def green_matrix(D: Domain, method: str = "auto") -> GreenOperator:
    return GreenOperator(D, method)


@dataclass
class HittingField:
    """h(z) = P^z{xi_K1 < xi_K2} solved on a finite region.

    Outside the region the walk is absorbed with value 0 (the region's
    complement belongs to K2).
    """

    K1: frozenset
    K2: frozenset
    region: Domain
    grid: Grid = field(repr=False)
    values: np.ndarray = field(repr=False)
    unknown: np.ndarray = field(repr=False)

    def __call__(self, z: Point) -> float:
        if z in self.K1:
            return 1.0
        i, j = self.grid.cell(z)
        if not (0 <= i < self.grid.shape[0] and 0 <= j < self.grid.shape[1]):
            return 0.0
        return float(self.values[i, j])

    def escape_from(self, z: Point) -> float:
        """Positive-time version: the mean of h over the neighbours of z."""
        return 0.25 * sum(self(q) for q in neighbors(z))

    def interior(self) -> list[Point]:
        ci, cj = np.nonzero(self.unknown)
        return [self.grid.point(i, j) for i, j in zip(ci, cj)]

    def harmonic_residual(self) -> float:
        v = self.values
        ci, cj = np.nonzero(self.unknown)
        avg = 0.25 * (v[ci + 1, cj] + v[ci - 1, cj] + v[ci, cj + 1] + v[ci, cj - 1])
        return float(np.abs(avg - v[ci, cj]).max()) if len(ci) else 0.0


def hitting_probability(K1: Iterable[Point], K2: Iterable[Point], region: Domain,
                        absorb_outside: bool = True, method: str = "auto") -> HittingField:
    """Solve the Dirichlet problem with data 1 on K1 and 0 on K2.

    Unknowns are region \\ (K1 u K2). Neighbours outside the region that are
    not in K1 u K2 are absorbing (value 0) when ``absorb_outside``; otherwise
    they are a contract violation.
    """
    K1, K2 = frozenset(K1), frozenset(K2)
    if K1 & K2:
        raise PreconditionError("K1 and K2 must be disjoint")
    grid = Grid(Domain(region.sites | K1 | K2), pad=2)
    unknown = grid.raster(region.sites - K1 - K2).astype(bool)
    if not absorb_outside:
        known = grid.raster(region.sites | K1 | K2).astype(bool)
        ci, cj = np.nonzero(unknown)
        for dx, dy in _SHIFTS:
            if not known[ci + dx, cj + dy].all():
                raise PreconditionError("K1 u K2 must enclose the solve region")
    ones = grid.raster(K1).astype(float)
    values = _dirichlet(grid, unknown, ones, method)
    return HittingField(K1, K2, region, grid, values, unknown)


def _dirichlet(grid: Grid, unknown: np.ndarray, data: np.ndarray, method: str = "auto") -> np.ndarray:
    """Harmonic extension of ``data`` (given off ``unknown``) into ``unknown``."""
    A, idx, ci, cj = _operator(grid, unknown)
    boundary = np.where(unknown, 0.0, data)
    b = np.zeros(len(ci))
    for dx, dy in _SHIFTS:
        b += 0.25 * boundary[ci + dx, cj + dy]
    out = boundary.copy()
    if len(ci):
        out[ci, cj] = _Factor(A, method).solve(b)
    return out


def escape_probability(D: Domain, K: Iterable[Point], points: Iterable[Point]) -> dict:
    """P^z{sigma_D < xi_K} for each z (positive hitting/exit times)."""
    K = frozenset(K)
    outside = {q for q in _outer(D) if q not in K}
    field_ = hitting_probability(outside, K & D.sites, D)
    return {z: field_.escape_from(z) for z in points}


def _outer(D: Domain) -> set[Point]:
    return {q for p in D.sites for q in neighbors(p) if q not in D}


# ---- identities of the h-transform and last-exit decomposition ------------

@dataclass
class IdentityReport:
    last_exit_residual: float
    green_conditioned_residual: float
    points_checked: int
    tolerance: float = 1e-8

    @property
    def ok(self) -> bool:
        return max(self.last_exit_residual, self.green_conditioned_residual) <= self.tolerance


def verify_green_hitting_identities(D: Domain, K1: Iterable[Point], K2: Iterable[Point]) -> IdentityReport:
    """Check the last-exit formula for h and G^X = (h(y)/h(x)) G on a finite
    universe D: the walk is killed on leaving D, K1 and K2 lie inside D."""
    K1, K2 = frozenset(K1), frozenset(K2)
    if K1 & K2:
        raise PreconditionError("K1 and K2 must be disjoint")
    if not (K1 | K2) <= D.sites:
        raise PreconditionError("K1 and K2 must lie inside D")
    if len(D) > 500:
        raise PreconditionError("identity checks are limited to 500 sites")
    if not K1:
        raise PreconditionError("K1 must be nonempty")
    U = D.minus(K1 | K2)
    h = hitting_probability(K1, K2, D)
    G12 = GreenOperator(U).matrix() if len(U) else np.zeros((0, 0))
    U1 = D.minus(K1)
    G1_op = GreenOperator(U1)
    G1 = G1_op.matrix()
    hit_pts = sorted(inner_boundary(K1))
    # q[y][x] = P^x{S(xi_K1) = y, xi_K1 < sigma_D}
    q = {y: hitting_probability({y}, K1 - {y}, D) for y in hit_pts}
    u_sites = sorted(U.sites)
    worst = 0.0
    for a, x in enumerate(u_sites):
        ratio_terms = 0.0
        u_avoid = hitting_probability({x}, K1 | K2, D)
        u_free = hitting_probability({x}, K1, D)
        for y in hit_pts:
            num = u_avoid.escape_from(y)
            den = u_free.escape_from(y)
            if den > 0:
                ratio_terms += num / den * q[y](x)
        i1 = G1_op.index(x)
        rhs = G12[a, a] / G1[i1, i1] * ratio_terms
        worst = max(worst, abs(h(x) - rhs))
    # conditioned Green function on the states with h > 0
    pos = [x for x in u_sites if h(x) > 0]
    hv = np.array([h(x) for x in pos])
    where = {x: k for k, x in enumerate(pos)}
    PX = np.zeros((len(pos), len(pos)))
    for k, x in enumerate(pos):
        for nb in neighbors(x):
            j = where.get(nb)
            if j is not None:
                PX[k, j] = 0.25 * hv[j] / hv[k]
    GX = np.linalg.inv(np.eye(len(pos)) - PX) if pos else PX
    Gpos = GreenOperator(Domain(frozenset(pos))).matrix() if pos else PX
    # GreenOperator orders sites by grid cell (x-major), as does sorted(pos)
    expect = Gpos * hv[None, :] / hv[:, None]
    worst_g = float(np.abs(GX - expect).max()) if pos else 0.0
    return IdentityReport(worst, worst_g, len(u_sites))


# ---- reflection and Harnack-type probes -----------------------------------

def check_reflection_hypotheses(D: Domain, K: Iterable[Point], z: Point) -> None:
    K = frozenset(K)
    d_plus = {p for p in D.sites if p[0] > 0}
    d_minus_ref = {reflect(p) for p in D.sites if p[0] < 0}
    if not d_plus <= d_minus_ref:
        raise PreconditionError("D_+ is not contained in the reflection of D_-")
    k_plus = {p for p in K if p[0] > 0}
    k_minus_ref = {reflect(p) for p in K if p[0] < 0}
    if not k_plus <= k_minus_ref:
        raise PreconditionError("K_+ is not contained in the reflection of K_-")
    if not K <= D.sites:
        raise PreconditionError("K must be a subset of D")
    if not (z in D and z[0] < 0):
        raise PreconditionError("z must lie in D_-")


def reflection_pair(D: Domain, K: Iterable[Point], z: Point) -> tuple[float, float]:
    """(P^z{sigma_D < xi_K}, P^zbar{sigma_D < xi_K})."""
    check_reflection_hypotheses(D, K, z)
    p = escape_probability(D, K, [z, reflect(z)])
    return p[z], p[reflect(z)]


def reflection_inequality_check(D: Domain, K: Iterable[Point], z: Point, slack: float = 1e-12) -> bool:
    left, right = reflection_pair(D, K, z)
    return left <= right + slack


def random_reflection_instance(rng: np.random.Generator, size: int = 6, density: float = 0.75):
    """A random (D, K, z) satisfying the reflection hypotheses, with z and
    its mirror image both in D and z outside K."""
    while True:
        left = {(x, y) for x in range(-size, 0) for y in range(-size, size + 1) if rng.random() < density}
        axis = {(0, y) for y in range(-size, size + 1) if rng.random() < density}
        right = {reflect(p) for p in left if rng.random() < 0.8}
        k_left = {p for p in left if rng.random() < 0.15}
        k_axis = {p for p in axis if rng.random() < 0.15}
        k_right = {reflect(p) for p in k_left if reflect(p) in right and rng.random() < 0.5}
        K = k_left | k_axis | k_right
        cands = sorted(p for p in left - K if reflect(p) in right)
        if cands:
            z = cands[rng.integers(len(cands))]
            return Domain(frozenset(left | axis | right)), frozenset(K), z


def harnack_ratio(values: Iterable[float]) -> float:
    """max h / min h over a set of positive harmonic values."""
    v = np.asarray(list(values), dtype=float)
    if (v <= 0).any():
        raise ValueError("Harnack ratio needs positive values")
    return float(v.max() / v.min())


def boundary_point_field(n: int, b: Point) -> HittingField:
    """h(z) = P^z{S(sigma_n) = b} for b on the outer boundary of B_n."""
    B = ball((0, 0), n)
    outer = _outer(B)
    if b not in outer:
        raise ValueError(f"{b} is not on the outer boundary of B_{n}")
    return hitting_probability({b}, outer - {b}, B)


def harnack_ratio_probe(n: int, b: Point | None = None) -> float:
    """Max ratio of the harmonic measure of a boundary point over B_{n/2} minus B_{n/4}."""
    b = (n + 1, 0) if b is None else b
    h = boundary_point_field(n, b)
    r2_lo, r2_hi = (n / 4) ** 2, (n / 2) ** 2
    pts = [p for p in ball((0, 0), n // 2) if r2_lo <= p[0] ** 2 + p[1] ** 2 <= r2_hi]
    return harnack_ratio(h(p) for p in pts)


def green_origin(n: int, method: str = "auto") -> float:
    """G_n(0, 0) by a single solve."""
    return GreenOperator(ball((0, 0), n), method)(((0, 0)), (0, 0))


def annulus_hit_probability(m: int, n: int, z: Point) -> float:
    """Exact P^z{xi_{B_m} < sigma_n}."""
    Bn = ball((0, 0), n)
    h = hitting_probability(ball((0, 0), m).sites, _outer(Bn), Bn)
    return h(z)


def annulus_formula(m: int, n: int, r: float) -> float:
    return (math.log(n) - math.log(r)) / (math.log(n) - math.log(m))


def right_arc_exit_given_escape(n: int, K: Iterable[Point], start: Point = (0, 0)) -> float:
    """P^start{arg S(sigma_n) in [-pi/4, pi/4] | sigma_n < xi_K}."""
    K = frozenset(K)
    if any(p[0] > 0 for p in K):
        raise PreconditionError("K must lie in the closed left half-plane")
    Bn = ball((0, 0), n)
    outer = _outer(Bn)
    arc = {p for p in outer if p[0] >= abs(p[1])}
    num = hitting_probability(arc, (outer - arc) | (K & Bn.sites), Bn).escape_from(start)
    den = hitting_probability(outer, K & Bn.sites, Bn).escape_from(start)
    if den <= 0:
        raise PreconditionError("conditioning event has probability zero")
    return num / den
