"""Compiled sampling kernels.

Conventions shared by every kernel:

* a domain is a uint8 ``mask`` (1 = site) with origin ``(ox, oy)``; the mask
  is padded so every exit point has a cell;
* ``idx`` is an int32 scratch grid of the same shape holding
  ``1 + position`` of a vertex in the current loop-erased stack, 0 otherwise;
  kernels leave it all-zero on return;
* trial ``t`` of a batch uses stream index ``first + t``; substream 0 drives
  the primary walk, substream 1 the second walk of a pair.
"""

import numba
import numpy as np

from .rng import stream_key, to_unit, word

DX = np.array([1, 0, -1, 0], dtype=np.int64)
DY = np.array([0, 1, 0, -1], dtype=np.int64)
_S62 = np.uint64(62)
_S2 = np.uint64(2)
CODE_OVERFLOW = -1


@numba.njit(cache=True)
def erase_walk(key, mask, idx, sx, sy, stx, sty, max_steps):
    """SRW from grid cell (sx, sy) until it leaves ``mask``, erasing loops as
    they close. Returns (stack length, number of steps); steps = -1 if the
    cap was hit. The stack stays marked in ``idx``."""
    L = 1
    stx[0] = sx
    sty[0] = sy
    idx[sx, sy] = 1
    x, y = sx, sy
    ctr = np.uint64(0)
    w = np.uint64(0)
    nb = 0
    steps = 0
    while True:
        if nb == 0:
            w = word(key, ctr)
            ctr += np.uint64(1)
            nb = 32
        d = w >> _S62
        w = w << _S2
        nb -= 1
        x += DX[d]
        y += DY[d]
        steps += 1
        k = idx[x, y]
        if k != 0:
            for j in range(k, L):
                idx[stx[j], sty[j]] = 0
            L = k
        else:
            stx[L] = x
            sty[L] = y
            L += 1
            idx[x, y] = L
        if mask[x, y] == 0:
            return L, steps
        if steps >= max_steps:
            return L, -1


@numba.njit(cache=True)
def clear_stack(idx, stx, sty, L):
    for j in range(L):
        idx[stx[j], sty[j]] = 0


@numba.njit(cache=True)
def path_code(stx, sty, lo, hi):
    """Direction code of the path stack[lo..hi]: 4**len + sum d_i 4**i."""
    n = hi - lo
    if n > 30:
        return CODE_OVERFLOW
    code = np.int64(0)
    p = np.int64(1)
    for j in range(lo, hi):
        ddx = stx[j + 1] - stx[j]
        ddy = sty[j + 1] - sty[j]
        if ddx == 1:
            d = 0
        elif ddy == 1:
            d = 1
        elif ddx == -1:
            d = 2
        else:
            d = 3
        code += d * p
        p *= 4
    return code + p


@numba.njit(cache=True)
def lerw_lengths(seed, first, count, mask, inner, sx, sy, max_steps):
    """Steps of L(S[0, sigma_D]), number of its vertices in ``inner`` and the
    index of its first vertex outside ``inner`` (-1 if none)."""
    idx = np.zeros(mask.shape, dtype=np.int32)
    cap = int(mask.sum()) + 2
    stx = np.empty(cap, dtype=np.int64)
    sty = np.empty(cap, dtype=np.int64)
    steps_out = np.empty(count, dtype=np.int64)
    inner_out = np.empty(count, dtype=np.int64)
    exit_out = np.empty(count, dtype=np.int64)
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        L, steps = erase_walk(key, mask, idx, sx, sy, stx, sty, max_steps)
        if steps < 0:
            steps_out[t] = -1
        else:
            steps_out[t] = L - 1
        c = 0
        ex = -1
        for j in range(L):
            v = inner[stx[j], sty[j]]
            c += v
            if v == 0 and ex < 0:
                ex = j
        inner_out[t] = c
        exit_out[t] = ex
        clear_stack(idx, stx, sty, L)
    return steps_out, inner_out, exit_out


@numba.njit(cache=True)
def lerw_codes(seed, first, count, mask, sx, sy, trunc, max_steps):
    """Path codes of L(S[0, sigma_D]); if ``trunc`` is not None-like (shape
    nonempty) the path is cut at its first vertex outside ``trunc``."""
    idx = np.zeros(mask.shape, dtype=np.int32)
    cap = int(mask.sum()) + 2
    stx = np.empty(cap, dtype=np.int64)
    sty = np.empty(cap, dtype=np.int64)
    out = np.empty(count, dtype=np.int64)
    use_trunc = trunc.shape[0] > 0
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        L, steps = erase_walk(key, mask, idx, sx, sy, stx, sty, max_steps)
        hi = L - 1
        if use_trunc:
            for j in range(L):
                if trunc[stx[j], sty[j]] == 0:
                    hi = j
                    break
        out[t] = path_code(stx, sty, 0, hi)
        clear_stack(idx, stx, sty, L)
    return out


@numba.njit(cache=True)
def _erase_array(px, py, n, idx, stx, sty):
    L = 0
    for i in range(n):
        x = px[i]
        y = py[i]
        k = idx[x, y]
        if k != 0:
            for j in range(k, L):
                idx[stx[j], sty[j]] = 0
            L = k
        else:
            stx[L] = x
            sty[L] = y
            L += 1
            idx[x, y] = L
    return L


@numba.njit(cache=True)
def reverse_lerw_codes(seed, first, count, mask, sx, sy, max_steps):
    """Path codes of L^R(S[0, sigma_D]) = reverse(L(reverse(S)))."""
    idx = np.zeros(mask.shape, dtype=np.int32)
    cap = int(mask.sum()) + 2
    stx = np.empty(cap, dtype=np.int64)
    sty = np.empty(cap, dtype=np.int64)
    out = np.empty(count, dtype=np.int64)
    wx = np.empty(1024, dtype=np.int64)
    wy = np.empty(1024, dtype=np.int64)
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        x, y = sx, sy
        n = 0
        ctr = np.uint64(0)
        w = np.uint64(0)
        nb = 0
        while True:
            if n == wx.shape[0]:
                nx = np.empty(2 * n, dtype=np.int64)
                ny = np.empty(2 * n, dtype=np.int64)
                nx[:n] = wx
                ny[:n] = wy
                wx = nx
                wy = ny
            wx[n] = x
            wy[n] = y
            n += 1
            if n > 1 and mask[x, y] == 0:
                break
            if n > max_steps:
                break
            if nb == 0:
                w = word(key, ctr)
                ctr += np.uint64(1)
                nb = 32
            d = w >> _S62
            w = w << _S2
            nb -= 1
            x += DX[d]
            y += DY[d]
        # reverse, erase, reverse back
        rx = wx[:n][::-1].copy()
        ry = wy[:n][::-1].copy()
        L = _erase_array(rx, ry, n, idx, stx, sty)
        clear_stack(idx, stx, sty, L)
        bx = stx[:L][::-1].copy()
        by = sty[:L][::-1].copy()
        out[t] = path_code(bx, by, 0, L - 1)
    return out


@numba.njit(cache=True)
def exit_samples(seed, first, count, mask, sx, sy, max_steps):
    """Exit point (grid cell) and exit time of SRW from (sx, sy)."""
    ex = np.empty(count, dtype=np.int64)
    ey = np.empty(count, dtype=np.int64)
    tt = np.empty(count, dtype=np.int64)
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        x, y = sx, sy
        ctr = np.uint64(0)
        w = np.uint64(0)
        nb = 0
        steps = 0
        while True:
            if nb == 0:
                w = word(key, ctr)
                ctr += np.uint64(1)
                nb = 32
            d = w >> _S62
            w = w << _S2
            nb -= 1
            x += DX[d]
            y += DY[d]
            steps += 1
            if mask[x, y] == 0 or steps >= max_steps:
                break
        ex[t] = x
        ey[t] = y
        tt[t] = steps if mask[x, y] == 0 else -1
    return ex, ey, tt


@numba.njit(cache=True)
def escape_trials(seed, first, count, eta_mask, walk_mask, cx, cy,
                  seg_r2, trunc_r2, sep, max_steps):
    """Non-intersection trials for the Es family.

    eta = L(S'[0, sigma]) for S' leaving ``eta_mask``; if ``trunc_r2 >= 0``
    eta is cut at its first vertex with |z|^2 > trunc_r2; if ``seg_r2 >= 0``
    only eta[k0:] is kept, k0 = max{j >= 1 : |eta_j|^2 <= seg_r2} (k0 = 0
    when no such j). S runs from the centre until leaving ``walk_mask``; the
    trial succeeds iff S[1, sigma] misses the kept part of eta.

    Returns (success flags, separation d_n; NaN unless ``sep`` and success).
    Grid cell (cx, cy) is the origin.
    """
    idx = np.zeros(eta_mask.shape, dtype=np.int32)
    cap = int(eta_mask.sum()) + 2
    stx = np.empty(cap, dtype=np.int64)
    sty = np.empty(cap, dtype=np.int64)
    ok = np.zeros(count, dtype=np.uint8)
    dn = np.full(count, np.nan)
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        L, steps = erase_walk(key, eta_mask, idx, cx, cy, stx, sty, max_steps)
        hi = L - 1
        if trunc_r2 >= 0:
            for j in range(L):
                ax = stx[j] - cx
                ay = sty[j] - cy
                if ax * ax + ay * ay > trunc_r2:
                    hi = j
                    break
        lo = 0
        if seg_r2 >= 0:
            for j in range(hi, 0, -1):
                ax = stx[j] - cx
                ay = sty[j] - cy
                if ax * ax + ay * ay <= seg_r2:
                    lo = j
                    break
        ex = stx[hi]
        ey = sty[hi]
        key2 = stream_key(seed, np.uint64(first + t), np.uint64(1))
        x, y = cx, cy
        ctr = np.uint64(0)
        w = np.uint64(0)
        nb = 0
        n_steps = 0
        hit = False
        best = np.inf
        while True:
            if nb == 0:
                w = word(key2, ctr)
                ctr += np.uint64(1)
                nb = 32
            d = w >> _S62
            w = w << _S2
            nb -= 1
            x += DX[d]
            y += DY[d]
            n_steps += 1
            k = idx[x, y] - 1
            if k >= lo and k <= hi:
                hit = True
                break
            if sep:
                dd = float((x - ex) ** 2 + (y - ey) ** 2)
                if dd < best:
                    best = dd
            if walk_mask[x, y] == 0 or n_steps >= max_steps:
                break
        if not hit:
            ok[t] = 1
            if sep:
                # S[0] is the origin, which is eta[0]
                d0 = float((cx - ex) ** 2 + (cy - ey) ** 2)
                if d0 < best:
                    best = d0
                b2 = np.inf
                for j in range(lo, hi + 1):
                    dd = float((stx[j] - x) ** 2 + (sty[j] - y) ** 2)
                    if dd < b2:
                        b2 = dd
                dn[t] = np.sqrt(min(best, b2))
        clear_stack(idx, stx, sty, L)
    return ok, dn


@numba.njit(cache=True)
def wilson_parents(seed, first, count, mask, site_id, ox_sites, oy_sites, max_steps):
    """Wired UST via Wilson's algorithm. Every non-site cell counts as the root.

    Returns parent direction codes, shape (count, n_sites): site i's parent is
    site i moved by direction parents[t, i]."""
    nsites = ox_sites.shape[0]
    out = np.empty((count, nsites), dtype=np.int8)
    idx = np.zeros(mask.shape, dtype=np.int32)
    stx = np.empty(nsites + 2, dtype=np.int64)
    sty = np.empty(nsites + 2, dtype=np.int64)
    in_tree = np.zeros(mask.shape, dtype=np.uint8)
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        ctr = np.uint64(0)
        w = np.uint64(0)
        nb = 0
        in_tree[:, :] = 1 - mask
        for s in range(nsites):
            sx = ox_sites[s]
            sy = oy_sites[s]
            if in_tree[sx, sy]:
                continue
            L = 1
            stx[0] = sx
            sty[0] = sy
            idx[sx, sy] = 1
            x, y = sx, sy
            steps = 0
            while True:
                if nb == 0:
                    w = word(key, ctr)
                    ctr += np.uint64(1)
                    nb = 32
                d = w >> _S62
                w = w << _S2
                nb -= 1
                x += DX[d]
                y += DY[d]
                steps += 1
                if in_tree[x, y]:
                    stx[L] = x
                    sty[L] = y
                    L += 1
                    break
                k = idx[x, y]
                if k != 0:
                    for j in range(k, L):
                        idx[stx[j], sty[j]] = 0
                    L = k
                else:
                    stx[L] = x
                    sty[L] = y
                    L += 1
                    idx[x, y] = L
                if steps >= max_steps:
                    raise RuntimeError("step cap exceeded in Wilson walk")
            for j in range(L - 1):
                a = stx[j]
                b = sty[j]
                idx[a, b] = 0
                in_tree[a, b] = 1
                ddx = stx[j + 1] - a
                ddy = sty[j + 1] - b
                if ddx == 1:
                    dcode = 0
                elif ddy == 1:
                    dcode = 1
                elif ddx == -1:
                    dcode = 2
                else:
                    dcode = 3
                out[t, site_id[a, b]] = dcode
    return out


@numba.njit(cache=True)
def conditioned_lerw(seed, first, count, h, outer, sx, sy, near, cone,
                     max_steps, want_codes):
    """Loop-erasure of the h-transformed walk from (sx, sy) until it leaves
    ``outer``, cut at its first vertex outside ``near``.

    Returns (number of vertices of the cut path lying in ``cone``, path
    codes of the cut path or -1). Steps are weighted by the neighbours' h,
    so the start may sit on the conditioning set where h = 0."""
    idx = np.zeros(outer.shape, dtype=np.int32)
    cap = int(outer.sum()) + 2
    stx = np.empty(cap, dtype=np.int64)
    sty = np.empty(cap, dtype=np.int64)
    vals = np.empty(count, dtype=np.int64)
    codes = np.full(count, -1, dtype=np.int64)
    for t in range(count):
        key = stream_key(seed, np.uint64(first + t), np.uint64(0))
        ctr = np.uint64(0)
        L = 1
        stx[0] = sx
        sty[0] = sy
        idx[sx, sy] = 1
        x, y = sx, sy
        steps = 0
        while True:
            h0 = h[x + 1, y]
            h1 = h[x, y + 1]
            h2 = h[x - 1, y]
            h3 = h[x, y - 1]
            tot = h0 + h1 + h2 + h3
            u = to_unit(word(key, ctr)) * tot
            ctr += np.uint64(1)
            if u < h0:
                x += 1
            elif u < h0 + h1:
                y += 1
            elif u < h0 + h1 + h2:
                x -= 1
            else:
                y -= 1
            steps += 1
            k = idx[x, y]
            if k != 0:
                for j in range(k, L):
                    idx[stx[j], sty[j]] = 0
                L = k
            else:
                stx[L] = x
                sty[L] = y
                L += 1
                idx[x, y] = L
            if outer[x, y] == 0:
                break
            if steps >= max_steps:
                raise RuntimeError("step cap exceeded in conditioned walk")
        hi = L - 1
        for j in range(L):
            if near[stx[j], sty[j]] == 0:
                hi = j
                break
        c = 0
        for j in range(hi + 1):
            c += cone[stx[j], sty[j]]
        vals[t] = c
        if want_codes:
            codes[t] = path_code(stx, sty, 0, hi)
        clear_stack(idx, stx, sty, L)
    return vals, codes
