"""Batched, worker-count-independent drivers for the compiled kernels.

Trials are cut into fixed blocks of ``BLOCK`` stream indices. Blocks are
farmed out to a process pool and reassembled in index order, so every output
array is a function of (seed, trial count) alone.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from multiprocessing import get_context

import numpy as np

from . import _kernels as K
from .lattice import Domain, Grid, Point, ball

BLOCK = 4096
DEFAULT_STEP_CAP = 10**9


def default_workers() -> int:
    return int(os.environ.get("LERWLAB_WORKERS", "1"))


def run_blocks(fn, total: int, workers: int | None = None, first: int = 0):
    """Call ``fn(first, count)`` over fixed blocks and concatenate outputs.

    ``fn`` must return an array or a tuple of arrays (first axis = trials)
    and be picklable when ``workers > 1``.
    """
    workers = default_workers() if workers is None else workers
    spans = [(s, min(BLOCK, first + total - s)) for s in range(first, first + total, BLOCK)]
    if workers <= 1 or len(spans) <= 1:
        parts = [fn(s, c) for s, c in spans]
    else:
        with ProcessPoolExecutor(workers, mp_context=get_context("fork")) as ex:
            parts = list(ex.map(_call, [fn] * len(spans), spans))
    if not parts:
        return parts
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate([p[i] for p in parts]) for i in range(len(parts[0])))
    return np.concatenate(parts)


def _call(fn, span):
    return fn(*span)


def decode_path(code: int, start: Point) -> list[Point]:
    """Inverse of the kernels' path codes."""
    from .lattice import STEPS

    if code < 1:
        raise ValueError("invalid path code")
    pts = [start]
    x, y = start
    while code > 1:
        d = code % 4
        code //= 4
        x, y = x + STEPS[d][0], y + STEPS[d][1]
        pts.append((x, y))
    return pts


def encode_path(path) -> int:
    code, p = 0, 1
    for a, b in zip(path, path[1:]):
        d = {(1, 0): 0, (0, 1): 1, (-1, 0): 2, (0, -1): 3}[(b[0] - a[0], b[1] - a[1])]
        code += d * p
        p *= 4
    return code + p


# ---- block functions (module level so they pickle) -------------------------

def _lengths_block(seed, mask, inner, sx, sy, cap, first, count):
    return K.lerw_lengths(np.uint64(seed), first, count, mask, inner, sx, sy, cap)


def _codes_block(seed, mask, sx, sy, trunc, cap, first, count):
    return K.lerw_codes(np.uint64(seed), first, count, mask, sx, sy, trunc, cap)


def _rcodes_block(seed, mask, sx, sy, cap, first, count):
    return K.reverse_lerw_codes(np.uint64(seed), first, count, mask, sx, sy, cap)


def _exit_block(seed, mask, sx, sy, cap, first, count):
    return K.exit_samples(np.uint64(seed), first, count, mask, sx, sy, cap)


def _escape_block(seed, eta_mask, walk_mask, cx, cy, seg_r2, trunc_r2, sep, cap, first, count):
    return K.escape_trials(np.uint64(seed), first, count, eta_mask, walk_mask, cx, cy,
                           seg_r2, trunc_r2, sep, cap)


# ---- public samplers --------------------------------------------------------

def lerw_lengths(D: Domain, trials: int, seed: int, start: Point = (0, 0),
                 inner: Domain | None = None, workers: int | None = None,
                 step_cap: int = DEFAULT_STEP_CAP):
    """Per-trial M_D (steps of L(S[0, sigma_D])), its vertex count in ``inner``
    and the index of its first vertex outside ``inner``."""
    g = Grid(D)
    inner_mask = g.raster(inner.sites & D.sites) if inner is not None else np.zeros_like(g.mask)
    sx, sy = g.cell(start)
    fn = partial(_lengths_block, seed, g.mask, inner_mask, sx, sy, step_cap)
    steps, inner_counts, inner_exit = run_blocks(fn, trials, workers)
    if (steps < 0).any():
        raise RuntimeError("step cap exceeded in LERW sampling")
    return steps, inner_counts, inner_exit


def lerw_codes(D: Domain, trials: int, seed: int, start: Point = (0, 0),
               truncate: Domain | None = None, reverse: bool = False,
               workers: int | None = None, step_cap: int = DEFAULT_STEP_CAP):
    """Path codes (see :func:`encode_path`) of L or L^R of SRW stopped at sigma_D."""
    g = Grid(D)
    sx, sy = g.cell(start)
    if reverse:
        if truncate is not None:
            raise ValueError("truncation is not supported for reverse erasure")
        fn = partial(_rcodes_block, seed, g.mask, sx, sy, step_cap)
    else:
        trunc = g.raster(truncate.sites & D.sites) if truncate is not None else np.zeros((0, 0), np.uint8)
        fn = partial(_codes_block, seed, g.mask, sx, sy, trunc, step_cap)
    return run_blocks(fn, trials, workers)


def exit_samples(D: Domain, trials: int, seed: int, start: Point = (0, 0),
                 workers: int | None = None, step_cap: int = DEFAULT_STEP_CAP):
    """Exit points (as an (n, 2) array of coordinates) and exit times."""
    g = Grid(D)
    sx, sy = g.cell(start)
    ex, ey, tt = run_blocks(partial(_exit_block, seed, g.mask, sx, sy, step_cap), trials, workers)
    return np.stack([ex + g.ox, ey + g.oy], axis=1), tt


def escape_trials(n: int, trials: int, seed: int, *, eta_radius: int | None = None,
                  segment_radius: int | None = None, truncate_radius: int | None = None,
                  separation: bool = False, workers: int | None = None,
                  step_cap: int = DEFAULT_STEP_CAP):
    """Run the Es-family trial pairs. See :func:`lerwlab._kernels.escape_trials`."""
    eta_radius = n if eta_radius is None else eta_radius
    if eta_radius < n:
        raise ValueError("the LERW ball must contain the walk ball")
    eta_ball = ball((0, 0), eta_radius)
    walk_ball = ball((0, 0), n)
    g = Grid(eta_ball)
    walk_mask = g.raster(walk_ball)
    cx, cy = g.cell((0, 0))
    seg = -1 if segment_radius is None else segment_radius**2
    tr = -1 if truncate_radius is None else truncate_radius**2
    fn = partial(_escape_block, seed, g.mask, walk_mask, cx, cy, seg, tr, separation, step_cap)
    return run_blocks(fn, trials, workers)
