"""Exact LERW laws on tiny domains.

Two independent routes:

* the Laplacian-walk recursion: the next vertex after a self-avoiding prefix
  gamma is chosen with probability proportional to P^y{sigma_D < xi_gamma},
  every factor an exact Dirichlet solve;
* the Green's-product formula 4^{-|w|} prod_i G_{D minus w_0..w_{i-1}}(w_i, w_i).

Agreement between the two is the correctness certificate used everywhere
else.
"""

from __future__ import annotations

import csv
import math
import re
from collections import defaultdict
from typing import Iterable, TextIO

from .lattice import Domain, Path, Point, ball, neighbors
from .loop_erase import truncate_at_exit
from .potential import GreenOperator, PreconditionError, hitting_probability

MAX_ENUM_SITES = 15


class PathDistribution(dict):
    """Map from path (tuple of points) to probability."""

    def total(self) -> float:
        return math.fsum(self.values())

    def tv(self, other: "PathDistribution") -> float:
        keys = set(self) | set(other)
        return 0.5 * math.fsum(abs(self.get(k, 0.0) - other.get(k, 0.0)) for k in keys)

    def mean(self, f) -> float:
        return math.fsum(p * f(path) for path, p in self.items())

    def to_csv(self, out: TextIO) -> None:
        w = csv.writer(out)
        w.writerow(["path", "probability"])
        for path, p in sorted(self.items()):
            w.writerow(["-".join(f"{x},{y}" for x, y in path), repr(p)])

    @classmethod
    def from_csv(cls, fh: TextIO) -> "PathDistribution":
        r = csv.reader(fh)
        next(r)
        return cls((parse_path(path), float(p)) for path, p in r)


_VERTEX = re.compile(r"(-?\d+),(-?\d+)")


def parse_path(text: str) -> tuple:
    """Inverse of the CSV path format: "x,y" vertices joined by '-'."""
    pts, pos = [], 0
    while pos < len(text):
        m = _VERTEX.match(text, pos)
        if m is None:
            raise ValueError(f"bad path text at {pos}: {text!r}")
        pts.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
        if pos < len(text):
            if text[pos] != "-":
                raise ValueError(f"expected '-' at {pos}: {text!r}")
            pos += 1
    return tuple(pts)


class _EscapeCache:
    """P^y{sigma_D < xi_F} for forbidden sets F, memoized by F."""

    def __init__(self, D: Domain):
        self.D = D
        self.outer = {q for p in D.sites for q in neighbors(p) if q not in D}
        self._cache: dict[frozenset, object] = {}

    def field(self, forbidden: frozenset):
        f = self._cache.get(forbidden)
        if f is None:
            f = hitting_probability(self.outer - forbidden, forbidden & self.D.sites, self.D)
            self._cache[forbidden] = f
        return f


def lerw_exact_laplacian(D: Domain, start: Point = (0, 0), avoid: Iterable[Point] = (),
                         stop: Domain | None = None,
                         max_sites: int = MAX_ENUM_SITES) -> PathDistribution:
    """Exact law of L(S[0, sigma_D]) from ``start``.

    ``avoid``: condition the walk to leave D before hitting this set.
    ``stop``: return the law of the path cut at its first vertex outside
    ``stop`` (a pushforward computed directly, so D may be large).
    """
    avoid = frozenset(avoid)
    if start not in D:
        raise PreconditionError("start must lie in D")
    enum_region = D if stop is None else Domain(D.sites & stop.sites)
    if len(enum_region) > max_sites:
        raise PreconditionError(
            f"enumeration region has {len(enum_region)} sites (> {max_sites}); "
            "path enumeration is exponential"
        )
    cache = _EscapeCache(D)
    out = PathDistribution()

    def rec(path: list, prob: float, used: frozenset):
        tip = path[-1]
        if tip not in D or (stop is not None and tip not in stop):
            out[tuple(path)] = out.get(tuple(path), 0.0) + prob
            return
        field = cache.field(used | avoid)
        weights = []
        for y in neighbors(tip):
            if y in used or y in avoid:
                continue
            w = 1.0 if y not in D else field(y)
            if w > 0.0:
                weights.append((y, w))
        tot = math.fsum(w for _, w in weights)
        for y, w in weights:
            path.append(y)
            rec(path, prob * w / tot, used | {y})
            path.pop()

    rec([start], 1.0, frozenset([start]))
    return out


def _check_exit_path(D: Domain, omega) -> None:
    omega = list(omega)
    if len(omega) < 2:
        raise PreconditionError("an exit path has at least one step")
    if len(set(omega)) != len(omega):
        raise PreconditionError("path is not self-avoiding")
    if any(abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1 for a, b in zip(omega, omega[1:])):
        raise PreconditionError("consecutive vertices must be adjacent")
    if any(p not in D for p in omega[:-1]) or omega[-1] in D:
        raise PreconditionError("path must stay in D and end on its outer boundary")


def lerw_exact_green_product(D: Domain, omega) -> float:
    """4^{-|w|} prod_{i<|w|} G_{D minus {w_0..w_{i-1}}}(w_i, w_i)."""
    _check_exit_path(D, omega)
    omega = list(omega)
    logp = -(len(omega) - 1) * math.log(4.0)
    for i, p in enumerate(omega[:-1]):
        sub = D.minus(omega[:i])
        logp += math.log(GreenOperator(sub)(p, p))
    return math.exp(logp)


def truncate_distribution(dist: PathDistribution, l: int, center: Point = (0, 0)) -> PathDistribution:
    """Pushforward under truncation at the first exit of B_l(center)."""
    B = ball(center, l)
    out = PathDistribution()
    for path, p in dist.items():
        key = tuple(truncate_at_exit(path, B))
        out[key] = out.get(key, 0.0) + p
    return out


def exact_length_pmf(dist: PathDistribution) -> dict[int, float]:
    pmf: dict[int, float] = defaultdict(float)
    for path, p in dist.items():
        pmf[len(path) - 1] += p
    return dict(sorted(pmf.items()))


def _self_avoiding_exits(D: Domain, start: Point, forbidden: frozenset):
    """All self-avoiding paths from start inside D minus forbidden, ending at
    their first step outside D."""
    out = []

    def rec(path, used):
        tip = path[-1]
        if tip not in D:
            out.append(tuple(path))
            return
        for y in neighbors(tip):
            if y in used or y in forbidden:
                continue
            path.append(y)
            rec(path, used | {y})
            path.pop()

    rec([start], frozenset([start]))
    return out


def continuation_law_green(D: Domain, prefix) -> PathDistribution:
    """Exact law of L(Y[0, sigma_D]) for Y from the prefix tip conditioned to
    leave D before hitting the prefix.

    Uses the h-transform path weight h(end)/h(start) 4^{-|eta|} and the
    identity G^Y = G on the diagonal, so each path has probability
    4^{-|eta|} prod_{i>=1} G_{D minus (prefix u eta_1..eta_{i-1})}(eta_i, eta_i) / h(tip).
    The i = 0 factor is 1 because Y never returns to the tip.
    """
    prefix = list(prefix)
    tip = prefix[-1]
    forbidden = frozenset(prefix[:-1])
    h_tip = _EscapeCache(D).field(frozenset(prefix)).escape_from(tip)
    if h_tip <= 0:
        raise PreconditionError("conditioning on a null event")
    out = PathDistribution()
    base = D.minus(forbidden)
    for eta in _self_avoiding_exits(D, tip, forbidden):
        logp = -(len(eta) - 1) * math.log(4.0)
        for i in range(1, len(eta) - 1):
            logp += math.log(GreenOperator(base.minus(eta[:i]))(eta[i], eta[i]))
        out[eta] = math.exp(logp) / h_tip
    return out


def domain_markov_check(D: Domain, prefix, full: PathDistribution | None = None) -> float:
    """TV distance between the conditional law of the LERW continuation given
    ``prefix`` and the law of L(Y) for the conditioned walk Y."""
    prefix = tuple(prefix)
    k = len(prefix)
    full = lerw_exact_laplacian(D, prefix[0]) if full is None else full
    cond = PathDistribution()
    for path, p in full.items():
        if path[:k] == prefix:
            cond[path[k - 1 :]] = cond.get(path[k - 1 :], 0.0) + p
    mass = cond.total()
    if mass <= 0:
        raise PreconditionError("prefix has probability zero")
    for key in cond:
        cond[key] /= mass
    return cond.tv(continuation_law_green(D, prefix))


def exact_escape(n: int, eta: Iterable[Point]) -> float:
    """P{S[1, sigma_n] misses eta} for S from the origin; eta must contain 0."""
    eta = frozenset(eta)
    Bn = ball((0, 0), n)
    outer = {q for p in Bn.sites for q in neighbors(p) if q not in Bn}
    field = hitting_probability(outer - eta, eta & Bn.sites, Bn)
    return field.escape_from((0, 0))


def exact_es(n: int) -> float:
    """Es(n) from the exact LERW law on B_n (tiny n only)."""
    if n == 0:
        return 1.0
    dist = lerw_exact_laplacian(ball((0, 0), n))
    return math.fsum(p * exact_escape(n, path) for path, p in dist.items())


def exact_hat_es(n: int, outer_factor: int = 4) -> float:
    """The analog of the infinite-LERW escape probability with the LERW run
    to the boundary of B_{outer_factor n} and cut at its first exit of B_n."""
    dist = lerw_exact_laplacian(ball((0, 0), outer_factor * n), stop=ball((0, 0), n))
    return math.fsum(p * exact_escape(n, path) for path, p in dist.items())


def paths_to_codes(dist: PathDistribution) -> dict[int, float]:
    from .sampling import encode_path

    return {encode_path(list(path)): p for path, p in dist.items()}


def empirical_tv(codes, exact: dict[int, float]) -> float:
    """TV distance between the empirical law of integer path codes and an
    exact law given on the same codes."""
    import numpy as np

    vals, counts = np.unique(np.asarray(codes), return_counts=True)
    emp = dict(zip(vals.tolist(), (counts / counts.sum()).tolist()))
    keys = set(emp) | set(exact)
    return 0.5 * math.fsum(abs(emp.get(k, 0.0) - exact.get(k, 0.0)) for k in keys)
