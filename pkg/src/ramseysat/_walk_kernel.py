"""numba kernels for local search over valid colorings.

State per instance (all arrays, see ``walksat.ColoringState``):

- ``color[e]``: current color of element e (1..c)
- ``cnt[p, k]``: how many elements of pattern p have color k
- ``fix[e]``: monochromatic patterns containing e (recoloring e repairs all of them)
- ``make[e, k]``: patterns containing e whose other elements all have color k
- ``unsat`` / ``upos``: dense list of monochromatic patterns and positions

Recoloring e to k changes the number of monochromatic patterns by
``make[e, k] - fix[e]``.

Random numbers come from xoshiro256** with its state in a 4-word array so
a run is fully determined by the seed, independent of chunking.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

_MASK = 0xFFFFFFFFFFFFFFFF


@njit(cache=True, inline="always")
def _rotl(x, k):
    return (x << uint64(k)) | (x >> uint64(64 - k))


@njit(cache=True)
def next_u64(s):
    result = _rotl(s[1] * uint64(5), 7) * uint64(9)
    t = s[1] << uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True)
def rand_float(s):
    return (next_u64(s) >> uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def rand_below(s, n):
    return int(rand_float(s) * n)


@njit(cache=True)
def init_state(pats, ep_start, ep_list, ncol, color, cnt, make, fix, unsat, upos, nunsat):
    npat, size = pats.shape
    cnt[:, :] = 0
    make[:, :] = 0
    fix[:] = 0
    upos[:] = -1
    nunsat[0] = 0
    for p in range(npat):
        for r in range(size):
            cnt[p, color[pats[p, r]]] += 1
        for k in range(1, ncol + 1):
            if cnt[p, k] == size:
                upos[p] = nunsat[0]
                unsat[nunsat[0]] = p
                nunsat[0] += 1
                for r in range(size):
                    fix[pats[p, r]] += 1
        for r in range(size):
            q = pats[p, r]
            for k in range(1, ncol + 1):
                others = cnt[p, k] - (1 if color[q] == k else 0)
                if others == size - 1:
                    make[q, k] += 1


@njit(cache=True)
def apply_move(pats, ep_start, ep_list, e, new, color, cnt, make, fix, unsat, upos, nunsat):
    size = pats.shape[1]
    old = color[e]
    for t in range(ep_start[e], ep_start[e + 1]):
        p = ep_list[t]
        was_mono = cnt[p, old] == size
        for r in range(size):
            q = pats[p, r]
            if q != e and cnt[p, old] - (1 if color[q] == old else 0) == size - 1:
                make[q, old] -= 1
        cnt[p, old] -= 1
        cnt[p, new] += 1
        for r in range(size):
            q = pats[p, r]
            if q != e and cnt[p, new] - (1 if color[q] == new else 0) == size - 1:
                make[q, new] += 1
        if was_mono:
            i = upos[p]
            last = unsat[nunsat[0] - 1]
            unsat[i] = last
            upos[last] = i
            upos[p] = -1
            nunsat[0] -= 1
            for r in range(size):
                fix[pats[p, r]] -= 1
        if cnt[p, new] == size:
            upos[p] = nunsat[0]
            unsat[nunsat[0]] = p
            nunsat[0] += 1
            for r in range(size):
                fix[pats[p, r]] += 1
    color[e] = new


@njit(cache=True)
def random_coloring(ncol, color, rng):
    for e in range(color.shape[0]):
        color[e] = 1 + rand_below(rng, ncol)


@njit(cache=True)
def _best_color(e, ncol, color, make, rng):
    # the replacement color creating the fewest new monochromatic patterns
    best = -1
    best_make = 1 << 62
    ties = 0
    for k in range(1, ncol + 1):
        if k == color[e]:
            continue
        m = make[e, k]
        if m < best_make:
            best_make = m
            best = k
            ties = 1
        elif m == best_make:
            ties += 1
            if rand_below(rng, ties) == 0:
                best = k
    return best


@njit(cache=True)
def walk(pats, ep_start, ep_list, ncol, color, cnt, make, fix, unsat, upos, nunsat,
         rng, noise, max_flips, stamp, stamp_ctr, moves_out):
    """Run at most ``max_flips`` moves; returns the number performed.

    Stops early (before flipping) as soon as no pattern is monochromatic.
    ``moves_out`` receives (element, color) per move when it is large
    enough, for reproducibility checks.
    """
    size = pats.shape[1]
    record = moves_out.shape[0]
    flips = 0
    while flips < max_flips:
        if nunsat[0] == 0:
            return flips
        if rand_float(rng) < noise:
            p = unsat[rand_below(rng, nunsat[0])]
            e = pats[p, rand_below(rng, size)]
            k = _best_color(e, ncol, color, make, rng)
        else:
            stamp_ctr[0] += 1
            mark = stamp_ctr[0]
            best_score = -(1 << 62)
            ties = 0
            e = -1
            k = -1
            for i in range(nunsat[0]):
                p = unsat[i]
                for r in range(size):
                    q = pats[p, r]
                    if stamp[q] == mark:
                        continue
                    stamp[q] = mark
                    for kk in range(1, ncol + 1):
                        if kk == color[q]:
                            continue
                        score = fix[q] - make[q, kk]
                        if score > best_score:
                            best_score = score
                            e = q
                            k = kk
                            ties = 1
                        elif score == best_score:
                            ties += 1
                            if rand_below(rng, ties) == 0:
                                e = q
                                k = kk
        if flips < record:
            moves_out[flips, 0] = e
            moves_out[flips, 1] = k
        apply_move(pats, ep_start, ep_list, e, k, color, cnt, make, fix, unsat, upos, nunsat)
        flips += 1
    return flips
