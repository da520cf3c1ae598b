"""Parallel execution: seed portfolios for local search and subtree
splitting for DPLL.

Workers are processes.  They share only immutable problem data, one
result queue and a cancellation event which every solver checks between
bounded chunks of work (flips or DPLL node visits).
"""

from __future__ import annotations

import dataclasses
import logging
import multiprocessing as mp
import os
import queue
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .cnf import Assignment, Formula, is_2cnf
from .dpll import dpll_solve, pick_branch_literal, two_sat, unit_propagate
from .encoders import Coloring, ProblemSpec, coloring_to_assignment
from .result import SearchStats, SolveResult, Status
from .verifier import verify_coloring
from .walksat import WalksatConfig, coloring_search

log = logging.getLogger(__name__)

GRACE_SECONDS = 5.0


def default_split_depth(workers: int) -> int:
    d = 0
    while 2**d < 4 * workers:
        d += 1
    return min(d, 10)


@dataclass(frozen=True)
class ParallelConfig:
    workers: int = 8
    timeout: Optional[float] = None  # seconds
    base_seed: int = 0
    split_depth: Optional[int] = None  # DPLL only; default from worker count

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.split_depth is not None and self.split_depth < 0:
            raise ValueError("split_depth must be non-negative")

    @property
    def depth(self) -> int:
        return default_split_depth(self.workers) if self.split_depth is None else self.split_depth


def _context():
    if sys.platform.startswith("linux"):
        return mp.get_context("fork")
    return mp.get_context("spawn")


def _deadline(timeout: Optional[float]) -> Optional[float]:
    return None if timeout is None else time.monotonic() + timeout


def _shutdown(procs, grace: float = GRACE_SECONDS) -> None:
    end = time.monotonic() + grace
    for p in procs:
        p.join(max(0.0, end - time.monotonic()))
    for p in procs:
        if p.is_alive():
            log.warning("terminating unresponsive worker %s", p.pid)
            p.terminate()
            p.join()


# -- local search portfolio -------------------------------------------------

def _portfolio_worker(i, spec, cfg, timeout, cancel, results):
    try:
        res = coloring_search(spec, cfg, deadline=_deadline(timeout), cancel=cancel)
        colors = res.coloring.colors if res.coloring is not None else None
        results.put((i, res.status, colors, res.stats, res.reason))
    except BaseException as exc:  # report instead of dying silently
        results.put((i, None, None, SearchStats(), repr(exc)))


def portfolio_search(spec: ProblemSpec, cfg: WalksatConfig, pcfg: ParallelConfig) -> SolveResult:
    """Independent ``coloring_search`` runs with seeds ``base_seed + i``.

    The first verified coloring wins and the other workers are cancelled.
    """
    start = time.perf_counter()
    if pcfg.workers == 1:
        res = coloring_search(spec, dataclasses.replace(cfg, seed=pcfg.base_seed),
                              deadline=_deadline(pcfg.timeout))
        res.stats.elapsed = time.perf_counter() - start
        return res

    ctx = _context()
    cancel = ctx.Event()
    results = ctx.Queue()
    procs = [
        ctx.Process(
            target=_portfolio_worker,
            args=(i, spec, dataclasses.replace(cfg, seed=pcfg.base_seed + i),
                  pcfg.timeout, cancel, results),
            daemon=True,
        )
        for i in range(pcfg.workers)
    ]
    for p in procs:
        p.start()
    stats = SearchStats()
    winner: Optional[Coloring] = None
    reasons = []
    try:
        for _ in procs:
            i, status, colors, wstats, reason = results.get()
            stats.merge(wstats)
            if status is None:
                raise RuntimeError(f"portfolio worker {i} failed: {reason}")
            if status is Status.SAT and winner is None:
                candidate = Coloring(spec, colors)
                if verify_coloring(candidate) is None:
                    winner = candidate
                    cancel.set()
                    log.info("worker %d (seed %d) found a coloring", i, pcfg.base_seed + i)
                else:
                    log.error("worker %d returned an invalid coloring; ignored", i)
            elif status is Status.UNKNOWN:
                reasons.append(reason)
    finally:
        cancel.set()
        _shutdown(procs)
    stats.elapsed = time.perf_counter() - start
    if winner is not None:
        return SolveResult(Status.SAT, coloring_to_assignment(winner), stats, winner)
    reason = "timeout" if "timeout" in reasons else "budget"
    return SolveResult(Status.UNKNOWN, stats=stats, reason=reason)


# -- DPLL subtree split -----------------------------------------------------

@dataclass
class _Split:
    leaves: list  # (reduced formula, partial assignment) pairs in DFS order
    model: Optional[Assignment]  # set when the expansion itself found a model
    stats: SearchStats


def split_tree(f: Formula, depth: int) -> _Split:
    """Expand the DPLL tree for ``depth`` decisions, left branch first.

    Nodes closed during expansion (conflict, empty formula, 2-SAT) are
    resolved on the spot; open nodes at the cut become leaves.
    """
    stats = SearchStats()
    leaves = []
    stack = [(f, Assignment(f.num_vars), 0)]
    while stack:
        g, a, d = stack.pop()
        propagated = unit_propagate(g, a, stats)
        if propagated is None:
            continue
        g, a = propagated
        if not g.clauses:
            return _Split([], a.completed(), stats)
        if is_2cnf(g):
            stats.two_sat_calls += 1
            sub = two_sat(g)
            if sub.status is Status.SAT:
                return _Split([], _merge(a, sub.model), stats)
            continue
        if d == depth:
            leaves.append((g, a))
            continue
        lit = pick_branch_literal(g)
        stats.decisions += 1
        neg_a = a.copy()
        neg_a.set_literal(-lit)
        pos_a = a.copy()
        pos_a.set_literal(lit)
        stack.append((g, neg_a, d + 1))
        stack.append((g, pos_a, d + 1))
    return _Split(leaves, None, stats)


def _merge(partial: Assignment, sub_model: Assignment) -> Assignment:
    model = partial.copy()
    for v in range(1, model.num_vars + 1):
        if model[v] is None:
            model[v] = sub_model[v]
    return model


def _dpll_worker(tasks, results, cancel, timeout):
    deadline = _deadline(timeout)
    while True:
        item = tasks.get()
        if item is None:
            return
        idx, g = item
        if cancel.is_set():
            results.put((idx, Status.UNKNOWN, None, SearchStats(), "cancelled"))
            continue
        try:
            res = dpll_solve(g, deadline=deadline, cancel=cancel)
            values = res.model.values if res.model is not None else None
            results.put((idx, res.status, values, res.stats, res.reason))
        except BaseException as exc:
            results.put((idx, None, None, SearchStats(), repr(exc)))


def parallel_dpll(f: Formula, pcfg: ParallelConfig) -> SolveResult:
    """DPLL with the top ``split_depth`` decisions expanded up front and the
    resulting subtrees solved concurrently.

    The status always matches ``dpll_solve``; the model may differ because
    whichever satisfiable subtree finishes first wins.
    """
    start = time.perf_counter()
    deadline = _deadline(pcfg.timeout)
    if pcfg.depth == 0:
        return dpll_solve(f, deadline=deadline)

    split = split_tree(f, pcfg.depth)
    stats = split.stats
    if split.model is not None:
        stats.elapsed = time.perf_counter() - start
        return SolveResult(Status.SAT, split.model, stats)
    leaves = split.leaves
    log.info("split depth %d produced %d open subtrees", pcfg.depth, len(leaves))

    if pcfg.workers == 1 or len(leaves) <= 1:
        for g, a in leaves:
            res = dpll_solve(g, deadline=deadline)
            stats.merge(res.stats)
            if res.status is Status.SAT:
                stats.elapsed = time.perf_counter() - start
                return SolveResult(Status.SAT, _merge(a, res.model), stats)
            if res.status is Status.UNKNOWN:
                stats.elapsed = time.perf_counter() - start
                return SolveResult(Status.UNKNOWN, stats=stats, reason=res.reason)
        stats.elapsed = time.perf_counter() - start
        return SolveResult(Status.UNSAT, stats=stats)

    ctx = _context()
    cancel = ctx.Event()
    tasks = ctx.Queue()
    results = ctx.Queue()
    for idx, (g, _) in enumerate(leaves):
        tasks.put((idx, g))
    nworkers = min(pcfg.workers, len(leaves))
    for _ in range(nworkers):
        tasks.put(None)
    remaining = None if pcfg.timeout is None else pcfg.timeout
    procs = [
        ctx.Process(target=_dpll_worker, args=(tasks, results, cancel, remaining), daemon=True)
        for _ in range(nworkers)
    ]
    for p in procs:
        p.start()
    model = None
    reason = None
    try:
        for _ in leaves:
            idx, status, values, wstats, wreason = results.get()
            stats.merge(wstats)
            if status is None:
                raise RuntimeError(f"DPLL worker failed: {wreason}")
            if status is Status.SAT and model is None and not cancel.is_set():
                model = _merge(leaves[idx][1], Assignment(f.num_vars, values))
                cancel.set()
            elif status is Status.UNKNOWN and model is None:
                reason = reason or wreason
                cancel.set()
    finally:
        cancel.set()
        _shutdown(procs)
    stats.elapsed = time.perf_counter() - start
    if model is not None:
        return SolveResult(Status.SAT, model, stats)
    if reason is not None:
        return SolveResult(Status.UNKNOWN, stats=stats, reason=reason)
    return SolveResult(Status.UNSAT, stats=stats)


def default_workers() -> int:
    env = os.environ.get("RAMSEYSAT_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
