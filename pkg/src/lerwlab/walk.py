"""Simple random walk sampling with composable stopping rules.

The Python-level sampler here is exact but slow; it serves tests, the small
exact checks and anything needing the whole trajectory. Production runs go
through the compiled kernels in :mod:`lerwlab.sampling`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .lattice import STEPS, Domain, Path, Point
from .rng import RngStream

DEFAULT_STEP_CAP = 10**9


class StepCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Exit:
    """Fires at sigma_D = min{j >= 1 : X_j not in D}."""

    domain: Domain

    def fires(self, p: Point) -> bool:
        return p not in self.domain


@dataclass(frozen=True)
class Hit:
    """Fires at xi_K = min{j >= 1 : X_j in K}."""

    points: frozenset

    def __init__(self, points: Iterable[Point]):
        object.__setattr__(self, "points", frozenset(points))

    def fires(self, p: Point) -> bool:
        return p in self.points


@dataclass(frozen=True)
class FirstOf:
    rules: tuple

    def __init__(self, *rules):
        object.__setattr__(self, "rules", tuple(rules))

    def fires(self, p: Point) -> bool:
        return any(r.fires(p) for r in self.rules)

    def which(self, p: Point):
        for r in self.rules:
            if r.fires(p):
                return r
        return None


StoppingRule = Exit | Hit | FirstOf


@dataclass
class Trajectory:
    vertices: Path
    stop_reason: object
    stop_time: int


def _fired(rule, p: Point):
    if isinstance(rule, FirstOf):
        return rule.which(p)
    return rule if rule.fires(p) else None


def run_until(
    start: Point,
    rule: StoppingRule,
    rng: RngStream,
    step_cap: int = DEFAULT_STEP_CAP,
    visitor: Callable[[int, Point], None] | None = None,
    store: bool = True,
) -> Trajectory:
    """Run SRW from ``start`` until ``rule`` fires (positive times only).

    ``visitor(j, X_j)`` is called on every vertex including X_0; with
    ``store=False`` only the final vertex is kept in the trajectory.
    """
    x, y = start
    verts = [start]
    if visitor is not None:
        visitor(0, start)
    j = 0
    while True:
        dx, dy = STEPS[rng.direction()]
        x += dx
        y += dy
        j += 1
        p = (x, y)
        if store:
            verts.append(p)
        if visitor is not None:
            visitor(j, p)
        reason = _fired(rule, p)
        if reason is not None:
            if not store:
                verts = [p]
            return Trajectory(verts, reason, j)
        if j >= step_cap:
            raise StepCapExceeded(
                f"walk from {start} ran {step_cap} steps without stopping; "
                "the rule is probably almost-surely infinite"
            )


def trajectory_vertex_set(t: Trajectory, from_index: int = 0) -> set[Point]:
    """Distinct vertices visited at indices >= from_index."""
    if not 0 <= from_index <= t.stop_time:
        raise IndexError(f"from_index {from_index} outside [0, {t.stop_time}]")
    if len(t.vertices) != t.stop_time + 1:
        raise ValueError("trajectory was not stored")
    return set(t.vertices[from_index:])
