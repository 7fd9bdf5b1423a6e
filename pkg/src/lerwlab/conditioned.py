"""Walks conditioned through Doob's h-transform, and the conditioned LERW
step statistic on cone-annuli."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, partial

import numpy as np

from . import _kernels as K
from .lattice import STEPS, Domain, Point, ball, cone_annulus, neighbors, square
from .potential import HittingField, PreconditionError, hitting_probability
from .rng import RngStream
from .sampling import DEFAULT_STEP_CAP, run_blocks
from .stats import EstimatorSummary
from .walk import FirstOf, Hit, Trajectory, _fired, run_until

H_FLOOR = 1e-300


class HTransformChain:
    """SRW conditioned to hit K1 before K2: p(x, y) = h(y) / sum_{y'~x} h(y').

    When h is harmonic at x the denominator is 4 h(x), the usual h-transform.
    Normalizing by the neighbour sum also covers starting points on K2
    (positive-time conditioning), where h(x) itself is 0.
    """

    def __init__(self, field: HittingField):
        self.field = field

    def h(self, z: Point) -> float:
        v = self.field(z)
        return v if v >= H_FLOOR else 0.0

    def start_weight(self, z: Point) -> float:
        """h at a starting point, in the positive-time sense."""
        return 0.25 * sum(self.h(q) for q in neighbors(z))

    def transitions(self, x: Point) -> list[tuple[Point, float]]:
        w = [(y, self.h(y)) for y in neighbors(x)]
        tot = math.fsum(v for _, v in w)
        if tot <= 0:
            raise PreconditionError(f"h vanishes around {x}")
        return [(y, v / tot) for y, v in w]

    def path_probability(self, path) -> float:
        p = 1.0
        for a, b in zip(path, path[1:]):
            p *= dict(self.transitions(a))[b]
        return p


def sample_conditioned(start: Point, chain: HTransformChain, rule, rng: RngStream,
                       step_cap: int = DEFAULT_STEP_CAP) -> Trajectory:
    """Run the h-transformed walk until ``rule`` fires."""
    if chain.start_weight(start) <= 0:
        raise PreconditionError("conditioning on a null event: h(start) = 0")
    K1, K2 = chain.field.K1, chain.field.K2
    verts = [start]
    x = start
    j = 0
    while True:
        trans = chain.transitions(x)
        u = rng.uniform()
        acc = 0.0
        nxt = trans[-1][0]
        for y, p in trans:
            acc += p
            if u < acc:
                nxt = y
                break
        x = nxt
        j += 1
        verts.append(x)
        if x in K2:
            raise AssertionError("conditioned walk hit K2 before K1")
        reason = _fired(rule, x)
        if reason is not None:
            return Trajectory(verts, reason, j)
        if x in K1:
            return Trajectory(verts, "K1", j)
        if j >= step_cap:
            raise RuntimeError("step cap exceeded in conditioned walk")


def sample_by_rejection(start: Point, K1, K2, rule, rng: RngStream, max_tries: int = 10**6,
                        step_cap: int = DEFAULT_STEP_CAP) -> Trajectory:
    """The same conditioned law by brute force: run SRW until ``rule`` or a
    hit of K1 u K2, and retry until K1 is reached first. Independent of any
    Dirichlet solve; used as an oracle for :func:`sample_conditioned`."""
    K1, K2 = frozenset(K1), frozenset(K2)
    stop = FirstOf(Hit(K2), Hit(K1), rule)
    for _ in range(max_tries):
        t = run_until(start, stop, rng, step_cap)
        end = t.vertices[-1]
        if end in K2:
            continue
        return Trajectory(t.vertices, "K1" if end in K1 else _fired(rule, end), t.stop_time)
    raise RuntimeError("rejection sampler: no accepted trajectory")


# ---- the conditioned statistic on cone-annuli ------------------------------

@dataclass
class ConditionedStatistic:
    m: int
    n: int
    N: int
    x: Point
    K: frozenset
    values: np.ndarray
    codes: np.ndarray | None = None


def check_mk_parameters(m: int, n: int, N: int, x: Point, K) -> list[str]:
    bad = []
    if min(m, n, N) < 0 or n < 1:
        bad.append("sizes must be nonnegative with n >= 1")
    if math.sqrt(2) * m + n > N:
        bad.append(f"sqrt(2)*m + n <= N fails: {math.sqrt(2) * m + n:.4g} > {N}")
    if x[0] != m or abs(x[1]) > m:
        bad.append(f"x = {x} is not on the right side of R_{m}")
    Rm = square(m)
    if not frozenset(K) <= Rm.sites:
        bad.append(f"K is not contained in R_{m}")
    return bad


@lru_cache(maxsize=8)
def conditioning_field(N: int, K: frozenset) -> HittingField:
    """h(z) = P^z{sigma_N < xi_K}; cached per (N, K)."""
    BN = ball((0, 0), N)
    outer = {q for p in BN.sites for q in neighbors(p) if q not in BN}
    return hitting_probability(outer, K, BN)


def _mk_block(seed, h, outer, sx, sy, near, cone, cap, codes, first, count):
    return K.conditioned_lerw(np.uint64(seed), first, count, h, outer, sx, sy,
                              near, cone, cap, codes)


def sample_MK(m: int, n: int, N: int, x: Point, Kset, trials: int, seed: int,
              workers: int | None = None, want_codes: bool = False,
              step_cap: int = DEFAULT_STEP_CAP) -> ConditionedStatistic:
    """Number of vertices in A_n(x) of alpha = L(X[0, sigma_N]) cut at the
    first exit of B_n(x), X from x conditioned on sigma_N < xi_K."""
    Kset = frozenset(Kset)
    bad = check_mk_parameters(m, n, N, x, Kset)
    if bad:
        raise PreconditionError("; ".join(bad))
    field = conditioning_field(N, Kset)
    chain = HTransformChain(field)
    if chain.start_weight(x) <= 0:
        raise PreconditionError("x is enclosed by K: conditioning event is null")
    g = field.grid
    h = np.where(field.values >= H_FLOOR, field.values, 0.0)
    outer = g.raster(ball((0, 0), N))
    near = g.raster(ball(x, n))
    cone = g.raster(cone_annulus(x, n))
    sx, sy = g.cell(x)
    fn = partial(_mk_block, seed, h, outer, sx, sy, near, cone, step_cap, want_codes)
    vals, codes = run_blocks(fn, trials, workers)
    return ConditionedStatistic(m, n, N, x, Kset, vals, codes if want_codes else None)


def estimate_MK_moments(m, n, N, x, Kset, trials, seed, workers=None):
    """(first moment, second moment) summaries of the conditioned statistic."""
    if trials < 1:
        raise PreconditionError("trials must be positive")
    stat = sample_MK(m, n, N, x, Kset, trials, seed, workers)
    v = stat.values.astype(float)
    first = EstimatorSummary.from_samples("MK_mean", v, seed, m=m, n=n, N=N)
    second = EstimatorSummary.from_samples("MK_second_moment", v**2, seed, m=m, n=n, N=N)
    return first, second


def exact_MK_mean(m, n, N, x, Kset) -> float:
    """E[M^K_{m,n,N,x}] by the Laplacian-walk recursion (tiny instances)."""
    from .oracle import lerw_exact_laplacian

    Kset = frozenset(Kset)
    bad = check_mk_parameters(m, n, N, x, Kset)
    if bad:
        raise PreconditionError("; ".join(bad))
    A = cone_annulus(x, n)
    dist = lerw_exact_laplacian(ball((0, 0), N), x, avoid=Kset, stop=ball(x, n), max_sites=40)
    return dist.mean(lambda path: sum(1 for p in path if p in A))
