"""Geometry of Z^2: points, paths, finite domains and their boundaries."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

Point = tuple[int, int]
Path = list[Point]

# E, N, W, S; direction code d moves by STEPS[d]
STEPS: tuple[Point, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))


def neighbors(p: Point) -> list[Point]:
    x, y = p
    return [(x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)]


def adjacent(a: Point, b: Point) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def is_path(vertices: Sequence[Point]) -> bool:
    return len(vertices) > 0 and all(
        adjacent(vertices[i - 1], vertices[i]) for i in range(1, len(vertices))
    )


def path_length(vertices: Sequence[Point]) -> int:
    """Number of steps |w| (vertices minus one)."""
    return len(vertices) - 1


def norm(p: Point) -> float:
    return math.hypot(p[0], p[1])


@dataclass(frozen=True, eq=False)
class Domain:
    """A finite subset of Z^2 with O(1) membership through an occupancy grid.

    ``kind``/``params`` describe parametric domains (ball, square) for the JSON
    descriptor; anything else is ``custom``.
    """

    sites: frozenset
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sites:
            xs = [p[0] for p in self.sites]
            ys = [p[1] for p in self.sites]
            x0, y0 = min(xs), min(ys)
            grid = np.zeros((max(xs) - x0 + 1, max(ys) - y0 + 1), dtype=bool)
            grid[np.asarray(xs) - x0, np.asarray(ys) - y0] = True
        else:
            x0 = y0 = 0
            grid = np.zeros((0, 0), dtype=bool)
        grid.setflags(write=False)
        object.__setattr__(self, "_origin", (x0, y0))
        object.__setattr__(self, "_grid", grid)

    def __contains__(self, p) -> bool:
        i, j = p[0] - self._origin[0], p[1] - self._origin[1]
        g = self._grid
        return 0 <= i < g.shape[0] and 0 <= j < g.shape[1] and bool(g[i, j])

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self) -> Iterator[Point]:
        return iter(sorted(self.sites))

    def __eq__(self, other) -> bool:
        return isinstance(other, Domain) and self.sites == other.sites

    def __hash__(self) -> int:
        return hash(self.sites)

    def __repr__(self) -> str:
        if self.kind != "custom":
            return f"Domain({self.kind}, {self.params})"
        return f"Domain(custom, {len(self.sites)} sites)"

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        """(xmin, ymin, xmax, ymax); undefined for the empty domain."""
        x0, y0 = self._origin
        return x0, y0, x0 + self._grid.shape[0] - 1, y0 + self._grid.shape[1] - 1

    def radius(self) -> float:
        """Largest Euclidean norm of a site."""
        return max((norm(p) for p in self.sites), default=0.0)

    def minus(self, points: Iterable[Point]) -> "Domain":
        return Domain(self.sites - frozenset(points))

    def union(self, points: Iterable[Point]) -> "Domain":
        return Domain(self.sites | frozenset(points))

    # serialization
    def to_text(self) -> str:
        return "".join(f"{x},{y}\n" for x, y in self)

    @classmethod
    def from_text(cls, text: str) -> "Domain":
        sites = set()
        for line in text.splitlines():
            line = line.strip()
            if line:
                x, y = line.split(",")
                sites.add((int(x), int(y)))
        return cls(frozenset(sites))

    def descriptor(self) -> dict:
        if self.kind == "custom":
            return {"kind": "custom", "sites": [list(p) for p in self]}
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_descriptor(cls, desc: dict | str) -> "Domain":
        if isinstance(desc, str):
            desc = json.loads(desc)
        kind = desc["kind"]
        if kind == "ball":
            return ball(tuple(desc.get("center", (0, 0))), desc["n"])
        if kind == "square":
            return square(desc["n"])
        if kind == "custom":
            return cls(frozenset(tuple(p) for p in desc["sites"]))
        raise ValueError(f"unknown domain kind {kind!r}")


class Grid:
    """A domain rasterized into a padded mask with a fixed origin."""

    def __init__(self, D: Domain, pad: int = 2, frame: Domain | None = None):
        ref = frame if frame is not None else D
        xmin, ymin, xmax, ymax = ref.bbox
        self.ox, self.oy = xmin - pad, ymin - pad
        self.shape = (xmax - xmin + 1 + 2 * pad, ymax - ymin + 1 + 2 * pad)
        self.mask = self.raster(D)

    def raster(self, points) -> np.ndarray:
        m = np.zeros(self.shape, dtype=np.uint8)
        pts = np.array(sorted(points.sites if isinstance(points, Domain) else points),
                       dtype=np.int64).reshape(-1, 2)
        if len(pts):
            i, j = pts[:, 0] - self.ox, pts[:, 1] - self.oy
            if i.min() < 0 or j.min() < 0 or i.max() >= self.shape[0] or j.max() >= self.shape[1]:
                raise ValueError("points fall outside the grid frame")
            m[i, j] = 1
        return m

    def cell(self, p: Point) -> tuple[int, int]:
        return p[0] - self.ox, p[1] - self.oy

    def point(self, i, j) -> Point:
        return int(i) + self.ox, int(j) + self.oy


def ball(center: Point, n: int) -> Domain:
    """B_n(center) = {z : |z - center| <= n}, Euclidean norm."""
    if n < 0:
        raise ValueError("radius must be nonnegative")
    cx, cy = center
    n2 = n * n
    sites = frozenset(
        (cx + i, cy + j)
        for i in range(-n, n + 1)
        for j in range(-n, n + 1)
        if i * i + j * j <= n2
    )
    return Domain(sites, "ball", {"center": [cx, cy], "n": n})


def square(n: int) -> Domain:
    """R_n = [-n, n]^2."""
    if n < 0:
        raise ValueError("half-width must be nonnegative")
    sites = frozenset((i, j) for i in range(-n, n + 1) for j in range(-n, n + 1))
    return Domain(sites, "square", {"n": n})


def outer_boundary(D: Domain | Iterable[Point]) -> set[Point]:
    """Points outside D adjacent to D. Empty input gives an empty set."""
    sites = D.sites if isinstance(D, Domain) else set(D)
    return {q for p in sites for q in neighbors(p) if q not in sites}


def inner_boundary(D: Domain | Iterable[Point]) -> set[Point]:
    """Points of D adjacent to a non-site."""
    sites = D.sites if isinstance(D, Domain) else set(D)
    return {p for p in sites if any(q not in sites for q in neighbors(p))}


def _components(cells: set[Point]) -> list[set[Point]]:
    seen: set[Point] = set()
    comps = []
    for start in cells:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for q in neighbors(p):
                if q in cells and q not in seen:
                    seen.add(q)
                    comp.add(q)
                    queue.append(q)
        comps.append(comp)
    return comps


def is_connected(D: Domain | Iterable[Point]) -> bool:
    sites = set(D.sites if isinstance(D, Domain) else D)
    return len(_components(sites)) <= 1


def is_simply_connected(D: Domain) -> bool:
    """Connected, and every complement component reaches the frame of the
    bounding box extended by 2 (i.e. is infinite)."""
    if not D.sites or not is_connected(D):
        return False
    xmin, ymin, xmax, ymax = D.bbox
    xmin, ymin, xmax, ymax = xmin - 2, ymin - 2, xmax + 2, ymax + 2
    comp = {
        (x, y)
        for x in range(xmin, xmax + 1)
        for y in range(ymin, ymax + 1)
        if (x, y) not in D
    }
    for c in _components(comp):
        if not any(p[0] in (xmin, xmax) or p[1] in (ymin, ymax) for p in c):
            return False
    return True


def in_cone_annulus(x: Point, n: int, z: Point) -> bool:
    """z in A_n(x): n/4 <= |z - x| <= 3n/4 and |arg(z - x)| <= pi/4 (inclusive)."""
    if n < 1:
        raise ValueError("n must be positive")
    dx, dy = z[0] - x[0], z[1] - x[1]
    # compare squared lengths in integers: 16|d|^2 vs n^2 and 9n^2
    d2 = 16 * (dx * dx + dy * dy)
    if d2 < n * n or d2 > 9 * n * n:
        return False
    # |arg| <= pi/4  <=>  dx >= |dy|
    return dx >= abs(dy)


def cone_annulus(x: Point, n: int) -> Domain:
    sites = frozenset(z for z in ball(x, n) if in_cone_annulus(x, n, z))
    return Domain(sites)


def reflect(z: Point) -> Point:
    """Reflection across the vertical axis."""
    return (-z[0], z[1])
