"""Deterministic DPLL solver.

The search at every node is:

1. propagate unit clauses to a fixpoint (a conflict kills the branch);
2. succeed if no clause is left;
3. hand a formula whose clauses all have at most two literals to the
   linear-time 2-SAT procedure;
4. otherwise branch, first on the first literal of the first two-literal
   clause if there is one, else on the literal with the largest weight,
   where a clause of length s adds 1/s to each of its literals.

The chosen literal is tried true first, then false.  Weights are exact and
recomputed on the current reduced formula; ties go to the lowest variable,
positive before negative.

Two engines implement this search.  ``"python"`` works directly on reduced
``Formula`` objects and is easy to audit; ``"compiled"`` is a numba kernel
over clause counters that visits the same nodes in the same order.
"""

from __future__ import annotations

import time
from typing import Optional

from .cnf import Assignment, Formula, Literal, is_2cnf, lit_var, literal_weights, reduce, unit_literals
from .result import SearchStats, SolveResult, Status


def unit_propagate(
    f: Formula, a: Assignment, stats: Optional[SearchStats] = None
) -> Optional[tuple[Formula, Assignment]]:
    """Satisfy unit clauses until none remain; ``None`` on conflict.

    The input assignment is not modified.
    """
    a = a.copy()
    reduced = reduce(f, a)
    while reduced is not None:
        units = unit_literals(reduced)
        if not units:
            return reduced, a
        for lit in units:
            a.set_literal(lit)
        if stats is not None:
            stats.propagations += len(units)
        reduced = reduce(reduced, a)
    return None


def _tarjan_order(num_nodes: int, adj: list[list[int]], roots: list[int]) -> list[int]:
    """Component id per node, ids assigned in reverse topological order."""
    index = [-1] * num_nodes
    low = [0] * num_nodes
    comp = [-1] * num_nodes
    onstack = [False] * num_nodes
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in roots:
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        call = [(root, iter(adj[root]))]
        while call:
            node, edges = call[-1]
            for w in edges:
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    call.append((w, iter(adj[w])))
                    break
                if onstack[w] and index[w] < low[node]:
                    low[node] = index[w]
            else:
                if low[node] == index[node]:
                    while True:
                        w = stack.pop()
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == node:
                            break
                    ncomp += 1
                call.pop()
                if call:
                    parent = call[-1][0]
                    low[parent] = min(low[parent], low[node])
    return comp


def _node(lit: Literal) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


def two_sat(f: Formula) -> SolveResult:
    """Solve a 2-CNF formula through strongly connected components of its
    implication graph.

    Unit clauses are read as ``(l or l)``.  Variables that do not occur in
    any clause are set false in the model.
    """
    if not is_2cnf(f):
        raise ValueError("two_sat requires clauses of length at most 2")
    start = time.perf_counter()
    n = f.num_vars
    adj: list[list[int]] = [[] for _ in range(2 * n + 2)]
    occurs = [False] * (n + 1)
    for clause in f.clauses:
        a = clause[0]
        b = clause[1] if len(clause) == 2 else a
        adj[_node(-a)].append(_node(b))
        adj[_node(-b)].append(_node(a))
        occurs[lit_var(a)] = occurs[lit_var(b)] = True
    roots = [node for v in range(1, n + 1) if occurs[v] for node in (2 * v, 2 * v + 1)]
    comp = _tarjan_order(2 * n + 2, adj, roots)
    stats = SearchStats(two_sat_calls=1)
    model = Assignment(n)
    for v in range(1, n + 1):
        if not occurs[v]:
            model[v] = False
        elif comp[2 * v] == comp[2 * v + 1]:
            stats.elapsed = time.perf_counter() - start
            return SolveResult(Status.UNSAT, stats=stats)
        else:
            model[v] = comp[2 * v] < comp[2 * v + 1]
    stats.elapsed = time.perf_counter() - start
    return SolveResult(Status.SAT, model, stats)


def pick_branch_literal(f: Formula) -> Literal:
    for clause in f.clauses:
        if len(clause) == 2:
            return clause[0]
    weights = literal_weights(f)
    if not weights:
        raise ValueError("cannot branch on an empty formula")
    return min(weights, key=lambda lit: (-weights[lit], lit_var(lit), lit < 0))


def _solve_python(f: Formula, stats: SearchStats) -> Optional[Assignment]:
    # Each frame: (formula before branching, assignment, literal, second_try)
    stack: list[tuple[Formula, Assignment, Literal, bool]] = []
    pending: Optional[tuple[Formula, Assignment]] = (f, Assignment(f.num_vars))
    while True:
        if pending is not None:
            node_f, node_a = pending
            pending = None
            propagated = unit_propagate(node_f, node_a, stats)
            if propagated is not None:
                g, a = propagated
                if not g.clauses:
                    return a.completed()
                if is_2cnf(g):
                    stats.two_sat_calls += 1
                    sub = two_sat(g)
                    if sub.status is Status.SAT:
                        model = a.copy()
                        for v in range(1, f.num_vars + 1):
                            if model[v] is None:
                                model[v] = sub.model[v]
                        return model
                else:
                    lit = pick_branch_literal(g)
                    stats.decisions += 1
                    stack.append((g, a, lit, False))
                    child = a.copy()
                    child.set_literal(lit)
                    pending = (g, child)
                    continue
        # the current branch failed: move to the next untried alternative
        while stack and stack[-1][3]:
            stack.pop()
        if not stack:
            return None
        g, a, lit, _ = stack.pop()
        stack.append((g, a, lit, True))
        child = a.copy()
        child.set_literal(-lit)
        pending = (g, child)


class DpllRun:
    """A resumable compiled DPLL search; ``advance`` runs a bounded chunk."""

    def __init__(self, f: Formula):
        from ._dpll_kernel import Engine

        self.formula = f
        self.engine = Engine(f.num_vars, f.clauses)
        self.status: Optional[Status] = None

    def advance(self, max_steps: int = 1 << 16) -> Optional[Status]:
        from ._dpll_kernel import SAT, UNSAT

        if self.status is None:
            code = self.engine.step(max_steps)
            if code == SAT:
                self.status = Status.SAT
            elif code == UNSAT:
                self.status = Status.UNSAT
        return self.status

    @property
    def stats(self) -> SearchStats:
        e = self.engine
        return SearchStats(decisions=e.decisions, propagations=e.propagations,
                           two_sat_calls=e.two_sat_calls)

    def model(self) -> Assignment:
        values = [None] + [bool(x) for x in self.engine.model[1:]]
        return Assignment(self.formula.num_vars, values)


def compiled_supported(f: Formula) -> bool:
    from ._dpll_kernel import Engine

    return Engine.fits(f.num_vars, f.clauses)


def dpll_solve(
    f: Formula,
    engine: str = "auto",
    deadline: Optional[float] = None,
    cancel=None,
) -> SolveResult:
    """Decide ``f``.  Complete: the result is SAT (with a model) or UNSAT.

    ``deadline`` (a ``time.monotonic`` value) and ``cancel`` (an object with
    ``is_set()``) only apply to the compiled engine; when either fires the
    result is UNKNOWN with the partial statistics.
    """
    if engine == "auto":
        engine = "compiled" if compiled_supported(f) else "python"
    start = time.perf_counter()
    if engine == "python":
        stats = SearchStats()
        model = _solve_python(f, stats)
        stats.elapsed = time.perf_counter() - start
        if model is None:
            return SolveResult(Status.UNSAT, stats=stats)
        return SolveResult(Status.SAT, model, stats)
    if engine != "compiled":
        raise ValueError(f"unknown engine {engine!r}")

    run = DpllRun(f)
    while run.advance() is None:
        if cancel is not None and cancel.is_set():
            return _interrupted(run, start, "cancelled")
        if deadline is not None and time.monotonic() >= deadline:
            return _interrupted(run, start, "timeout")
    stats = run.stats
    stats.elapsed = time.perf_counter() - start
    if run.status is Status.SAT:
        return SolveResult(Status.SAT, run.model(), stats)
    return SolveResult(Status.UNSAT, stats=stats)


def _interrupted(run: DpllRun, start: float, reason: str) -> SolveResult:
    stats = run.stats
    stats.elapsed = time.perf_counter() - start
    return SolveResult(Status.UNKNOWN, stats=stats, reason=reason)
