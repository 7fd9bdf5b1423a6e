"""Chronological loop-erasure and step-count statistics."""

from __future__ import annotations

from typing import Iterable, Sequence

from .lattice import Domain, Path, Point


def loop_erase(path: Sequence[Point]) -> Path:
    """Chronological loop-erasure L(path).

    Follows the last-visit recursion: s_0 is the last visit to path[0], and
    s_i is the last visit to path[s_{i-1} + 1], until the final index.
    Runs in linear time using a last-occurrence table.
    """
    if len(path) == 0:
        raise ValueError("cannot loop-erase an empty path")
    last = {p: i for i, p in enumerate(path)}
    end = len(path) - 1
    out = []
    s = last[path[0]]
    out.append(path[s])
    while s != end:
        s = last[path[s + 1]]
        out.append(path[s])
    return out


def reverse_loop_erase(path: Sequence[Point]) -> Path:
    """L^R(path) = reverse(L(reverse(path)))."""
    return loop_erase(list(path)[::-1])[::-1]


class LoopEraser:
    """Streaming loop-erasure: feed vertices one at a time, keep only the
    erased stack and a position index."""

    def __init__(self, start: Point):
        self.stack: Path = [start]
        self.pos: dict[Point, int] = {start: 0}

    def push(self, p: Point) -> None:
        k = self.pos.get(p)
        if k is None:
            self.pos[p] = len(self.stack)
            self.stack.append(p)
        else:
            for q in self.stack[k + 1 :]:
                del self.pos[q]
            del self.stack[k + 1 :]

    def extend(self, points: Iterable[Point]) -> None:
        for p in points:
            self.push(p)

    @property
    def path(self) -> Path:
        return list(self.stack)


def count_steps(gamma: Sequence[Point], restrict_to: Domain | None = None) -> int:
    """|gamma| in steps, or the number of vertices of gamma in ``restrict_to``."""
    if restrict_to is None:
        return len(gamma) - 1
    return sum(1 for p in gamma if p in restrict_to)


def is_self_avoiding(gamma: Sequence[Point]) -> bool:
    return len(set(gamma)) == len(gamma)


def truncate_at_exit(gamma: Sequence[Point], D: Domain) -> Path:
    """gamma up to and including its first vertex outside D."""
    for i, p in enumerate(gamma):
        if p not in D:
            return list(gamma[: i + 1])
    return list(gamma)
