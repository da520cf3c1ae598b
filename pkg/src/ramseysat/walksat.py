"""Probabilistic local search.

``local_search`` is the plain variable-flipping walk over any CNF formula.
``coloring_search`` is the variant used for the Ramsey-type instances: it
only ever visits valid colorings, so the exactly-one clauses can never be
violated and a move recolors a single element (the net effect of the two
variable flips that implies).

Both are incomplete: failure is reported as UNKNOWN, never UNSAT.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _walk_kernel as K
from .cnf import Assignment, Formula, lit_var
from .encoders import Coloring, ProblemSpec, coloring_to_assignment, pattern_indices
from .result import SearchStats, SolveResult, Status

CHUNK_FLIPS = 1 << 16


@dataclass(frozen=True)
class WalksatConfig:
    noise: float = 0.5
    max_flips: Optional[int] = None  # default: 100 x number of variables
    restarts: int = 50
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError("noise must lie in [0, 1]")
        if self.max_flips is not None and self.max_flips < 1:
            raise ValueError("max_flips must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")

    def flips_for(self, num_vars: int) -> int:
        return self.max_flips if self.max_flips is not None else max(1, 100 * num_vars)


def restart_seed(seed: int, restart: int, words: int = 4) -> np.ndarray:
    """Per-restart generator state: restart r draws from the substream
    ``SeedSequence(seed, spawn_key=(r,))``."""
    ss = np.random.SeedSequence(seed % 2**64, spawn_key=(restart,))
    state = ss.generate_state(words, dtype=np.uint64)
    if not state.any():
        state[0] = 1
    return state


def local_search(
    f: Formula, cfg: WalksatConfig, trace: Optional[list] = None
) -> SolveResult:
    start = time.perf_counter()
    stats = SearchStats()
    n = f.num_vars
    max_flips = cfg.flips_for(n)
    occ: list[list[int]] = [[] for _ in range(2 * n + 2)]
    for ci, clause in enumerate(f.clauses):
        for lit in clause:
            occ[lit if lit > 0 else n - lit].append(ci)

    def occ_of(lit):
        return occ[lit if lit > 0 else n - lit]

    for r in range(cfg.restarts):
        stats.restarts += 1
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed % 2**64, spawn_key=(r,))))
        value = [False] + [bool(x) for x in rng.integers(0, 2, size=n)]
        ntrue = [sum(1 for lit in c if (value[lit] if lit > 0 else not value[-lit])) for c in f.clauses]
        unsat = [ci for ci, t in enumerate(ntrue) if t == 0]
        upos = {ci: i for i, ci in enumerate(unsat)}

        def delta(v):
            # decrease in unsatisfied clauses if v is flipped
            becomes_true = -v if value[v] else v
            make = sum(1 for ci in occ_of(becomes_true) if ntrue[ci] == 0)
            brk = sum(1 for ci in occ_of(-becomes_true) if ntrue[ci] == 1)
            return make - brk

        def flip(v):
            lit = -v if value[v] else v  # literal that becomes true
            value[v] = not value[v]
            for ci in occ_of(lit):
                ntrue[ci] += 1
                if ntrue[ci] == 1:
                    i = upos.pop(ci)
                    last = unsat.pop()
                    if last != ci:
                        unsat[i] = last
                        upos[last] = i
            for ci in occ_of(-lit):
                ntrue[ci] -= 1
                if ntrue[ci] == 0:
                    upos[ci] = len(unsat)
                    unsat.append(ci)

        for _ in range(max_flips):
            if not unsat:
                break
            if rng.random() < cfg.noise:
                clause = f.clauses[unsat[rng.integers(len(unsat))]]
                var = lit_var(clause[rng.integers(len(clause))])
            else:
                candidates = sorted({lit_var(l) for ci in unsat for l in f.clauses[ci]})
                scores = [delta(v) for v in candidates]
                best = max(scores)
                tied = [v for v, s in zip(candidates, scores) if s == best]
                var = tied[rng.integers(len(tied))]
            flip(var)
            stats.flips += 1
            if trace is not None:
                trace.append(var)
        if not unsat:
            stats.elapsed = time.perf_counter() - start
            return SolveResult(Status.SAT, Assignment(n, [None] + value[1:]), stats)
    stats.elapsed = time.perf_counter() - start
    return SolveResult(Status.UNKNOWN, stats=stats, reason="budget")


class ColoringState:
    """A valid coloring plus incrementally maintained monochromatic patterns."""

    def __init__(self, spec: ProblemSpec, colors, patterns=None):
        self.spec = spec
        if patterns is None:
            patterns = pattern_indices(spec)
        size = 3 if spec.is_grid else 2
        self.pats = np.array(patterns, dtype=np.int64).reshape(len(patterns), size)
        nel = spec.num_elements
        counts = np.bincount(self.pats.ravel(), minlength=nel)
        self.ep_start = np.zeros(nel + 1, dtype=np.int64)
        np.cumsum(counts, out=self.ep_start[1:])
        owners = np.repeat(np.arange(len(patterns), dtype=np.int64), size)
        self.ep_list = owners[np.argsort(self.pats.ravel(), kind="stable")]
        self.color = np.array(colors, dtype=np.int64)
        c = spec.c
        self.cnt = np.zeros((len(patterns), c + 1), dtype=np.int64)
        self.make = np.zeros((nel, c + 1), dtype=np.int64)
        self.fix = np.zeros(nel, dtype=np.int64)
        self.unsat = np.zeros(max(1, len(patterns)), dtype=np.int64)
        self.upos = np.zeros(len(patterns), dtype=np.int64)
        self.nunsat = np.zeros(1, dtype=np.int64)
        self.reset(self.color)

    def reset(self, colors) -> None:
        self.color[:] = colors
        K.init_state(self.pats, self.ep_start, self.ep_list, self.spec.c, self.color,
                     self.cnt, self.make, self.fix, self.unsat, self.upos, self.nunsat)

    @property
    def unsat_set(self) -> set[int]:
        return set(int(p) for p in self.unsat[: self.nunsat[0]])

    @property
    def num_unsat(self) -> int:
        return int(self.nunsat[0])

    def delta(self, element: int, color: int) -> int:
        """Change in the number of monochromatic patterns if recolored."""
        return int(self.make[element, color] - self.fix[element])

    def apply_move(self, element: int, color: int) -> None:
        """Recolor 0-based ``element``; touches only patterns containing it."""
        if not 1 <= color <= self.spec.c:
            raise ValueError(f"color {color} not in 1..{self.spec.c}")
        if self.color[element] == color:
            raise ValueError("recoloring to the current color is not a move")
        K.apply_move(self.pats, self.ep_start, self.ep_list, element, color, self.color,
                     self.cnt, self.make, self.fix, self.unsat, self.upos, self.nunsat)

    def recount(self) -> set[int]:
        """Monochromatic patterns computed from scratch."""
        cols = self.color[self.pats]
        return set(np.flatnonzero((cols == cols[:, :1]).all(axis=1)).tolist())

    def coloring(self) -> Coloring:
        return Coloring(self.spec, tuple(int(x) for x in self.color))


def coloring_search(
    spec: ProblemSpec,
    cfg: WalksatConfig,
    deadline: Optional[float] = None,
    cancel=None,
    patterns=None,
) -> SolveResult:
    """Local search over valid colorings of ``spec``.

    With probability ``noise`` a random element of a random monochromatic
    pattern is recolored; otherwise the best (element, color) move among
    elements of monochromatic patterns is taken.  Ties are broken uniformly
    at random.  ``deadline`` is a ``time.monotonic`` value.
    """
    start = time.perf_counter()
    stats = SearchStats()
    max_flips = cfg.flips_for(spec.num_vars)
    state = ColoringState(spec, np.ones(spec.num_elements, dtype=np.int64), patterns)
    stamp = np.zeros(spec.num_elements, dtype=np.int64)
    stamp_ctr = np.zeros(1, dtype=np.int64)
    no_record = np.zeros((0, 2), dtype=np.int64)
    reason = "budget"

    for r in range(cfg.restarts):
        stats.restarts += 1
        rng = restart_seed(cfg.seed, r)
        K.random_coloring(spec.c, state.color, rng)
        state.reset(state.color)
        if spec.c == 1 and state.num_unsat:
            break  # no alternative color exists
        done = 0
        while state.num_unsat and done < max_flips:
            if cancel is not None and cancel.is_set():
                reason = "cancelled"
                break
            if deadline is not None and time.monotonic() >= deadline:
                reason = "timeout"
                break
            step = min(CHUNK_FLIPS, max_flips - done)
            done += K.walk(state.pats, state.ep_start, state.ep_list, spec.c, state.color,
                           state.cnt, state.make, state.fix, state.unsat, state.upos,
                           state.nunsat, rng, cfg.noise, step, stamp, stamp_ctr, no_record)
        stats.flips += done
        if state.num_unsat == 0:
            stats.elapsed = time.perf_counter() - start
            coloring = state.coloring()
            return SolveResult(Status.SAT, coloring_to_assignment(coloring), stats, coloring)
        if reason != "budget":
            break
    stats.elapsed = time.perf_counter() - start
    return SolveResult(Status.UNKNOWN, stats=stats, reason=reason)
