"""Array-based DPLL engine compiled with numba.

It follows exactly the same search as the reference engine in ``dpll.py``
(unit propagation, 2-SAT fast path, first-2-clause branching, weighted
literal branching) but keeps one set of counters per clause plus a trail
instead of copying reduced formulas.  The search is resumable: ``run``
executes at most ``max_steps`` node visits and reports whether it finished,
so callers can enforce timeouts and cancellation between chunks.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

RUNNING, SAT, UNSAT = 0, 1, 2

# indices into the scalar state vector
S_TRAIL, S_QHEAD, S_OPEN, S_LONG, S_DEPTH, S_CONFLICT = 0, 1, 2, 3, 4, 5
S_DECISIONS, S_PROPS, S_TWOSAT, S_STARTED = 6, 7, 8, 9
N_SCALARS = 10


@njit(cache=True, inline="always")
def _code(lit):
    return 2 * lit if lit > 0 else -2 * lit + 1


@njit(cache=True)
def _assign(lit, val, nsat, nfalse, clen, occ_start, occ, trail, st):
    v = lit if lit > 0 else -lit
    val[v] = 1 if lit > 0 else 0
    c = _code(lit)
    for k in range(occ_start[c], occ_start[c + 1]):
        cl = occ[k]
        if nsat[cl] == 0:
            st[S_OPEN] -= 1
            if clen[cl] - nfalse[cl] >= 3:
                st[S_LONG] -= 1
        nsat[cl] += 1
    c = _code(-lit)
    for k in range(occ_start[c], occ_start[c + 1]):
        cl = occ[k]
        nfalse[cl] += 1
        if nsat[cl] == 0 and clen[cl] - nfalse[cl] == 2:
            st[S_LONG] -= 1
    trail[st[S_TRAIL]] = lit
    st[S_TRAIL] += 1


@njit(cache=True)
def _unassign(lit, val, nsat, nfalse, clen, occ_start, occ, st):
    c = _code(-lit)
    for k in range(occ_start[c], occ_start[c + 1]):
        cl = occ[k]
        if nsat[cl] == 0 and clen[cl] - nfalse[cl] == 2:
            st[S_LONG] += 1
        nfalse[cl] -= 1
    c = _code(lit)
    for k in range(occ_start[c], occ_start[c + 1]):
        cl = occ[k]
        nsat[cl] -= 1
        if nsat[cl] == 0:
            st[S_OPEN] += 1
            if clen[cl] - nfalse[cl] >= 3:
                st[S_LONG] += 1
    val[lit if lit > 0 else -lit] = -1


@njit(cache=True)
def _undo_to(pos, val, nsat, nfalse, clen, occ_start, occ, trail, st):
    while st[S_TRAIL] > pos:
        st[S_TRAIL] -= 1
        _unassign(trail[st[S_TRAIL]], val, nsat, nfalse, clen, occ_start, occ, st)
    if st[S_QHEAD] > pos:
        st[S_QHEAD] = pos


@njit(cache=True)
def _lit_state(lit, val):
    # 1 true, 0 false, -1 unassigned
    x = val[lit if lit > 0 else -lit]
    if x < 0:
        return -1
    return x if lit > 0 else 1 - x


@njit(cache=True)
def _propagate(cstart, lits, val, nsat, nfalse, clen, occ_start, occ, trail, st):
    """Process the trail from the queue head; returns True on conflict."""
    while st[S_QHEAD] < st[S_TRAIL]:
        lit = trail[st[S_QHEAD]]
        st[S_QHEAD] += 1
        c = _code(-lit)
        for k in range(occ_start[c], occ_start[c + 1]):
            cl = occ[k]
            if nsat[cl] != 0:
                continue
            rem = clen[cl] - nfalse[cl]
            if rem == 0:
                return True
            if rem == 1:
                for p in range(cstart[cl], cstart[cl + 1]):
                    if _lit_state(lits[p], val) == -1:
                        _assign(lits[p], val, nsat, nfalse, clen, occ_start, occ, trail, st)
                        st[S_PROPS] += 1
                        break
    return False


@njit(cache=True)
def _root_units(cstart, lits, val, nsat, nfalse, clen, occ_start, occ, trail, st):
    for cl in range(clen.shape[0]):
        if nsat[cl] != 0:
            continue
        rem = clen[cl] - nfalse[cl]
        if rem == 0:
            return True
        if rem == 1:
            for p in range(cstart[cl], cstart[cl + 1]):
                if _lit_state(lits[p], val) == -1:
                    _assign(lits[p], val, nsat, nfalse, clen, occ_start, occ, trail, st)
                    st[S_PROPS] += 1
                    break
    return _propagate(cstart, lits, val, nsat, nfalse, clen, occ_start, occ, trail, st)


@njit(cache=True)
def _pick(cstart, lits, val, nsat, nfalse, clen, scale, weight, nvars):
    m = clen.shape[0]
    for cl in range(m):
        if nsat[cl] == 0 and clen[cl] - nfalse[cl] == 2:
            for p in range(cstart[cl], cstart[cl + 1]):
                if _lit_state(lits[p], val) == -1:
                    return lits[p]
    weight[:] = 0
    for cl in range(m):
        if nsat[cl] != 0:
            continue
        share = scale // (clen[cl] - nfalse[cl])
        for p in range(cstart[cl], cstart[cl + 1]):
            if _lit_state(lits[p], val) == -1:
                weight[_code(lits[p])] += share
    best = 0
    best_w = -1
    for v in range(1, nvars + 1):
        if weight[2 * v] > best_w:
            best_w = weight[2 * v]
            best = v
        if weight[2 * v + 1] > best_w:
            best_w = weight[2 * v + 1]
            best = -v
    return best


@njit(cache=True)
def _two_sat(cstart, lits, val, nsat, nvars, model):
    """SCC-based 2-SAT over the open clauses; writes values of free vars."""
    m = nsat.shape[0]
    nnodes = 2 * nvars + 2
    deg = np.zeros(nnodes + 1, dtype=np.int64)
    occurs = np.zeros(nvars + 1, dtype=np.bool_)
    pair = np.zeros(2, dtype=np.int64)
    for cl in range(m):
        if nsat[cl] != 0:
            continue
        k = 0
        for p in range(cstart[cl], cstart[cl + 1]):
            if _lit_state(lits[p], val) == -1:
                pair[k] = lits[p]
                k += 1
        if k == 1:
            pair[1] = pair[0]
        a, b = pair[0], pair[1]
        deg[_code(-a) + 1] += 1
        deg[_code(-b) + 1] += 1
        occurs[abs(a)] = True
        occurs[abs(b)] = True
    for i in range(nnodes):
        deg[i + 1] += deg[i]
    adj = np.empty(deg[nnodes], dtype=np.int64)
    fill = deg[:nnodes].copy()
    for cl in range(m):
        if nsat[cl] != 0:
            continue
        k = 0
        for p in range(cstart[cl], cstart[cl + 1]):
            if _lit_state(lits[p], val) == -1:
                pair[k] = lits[p]
                k += 1
        if k == 1:
            pair[1] = pair[0]
        a, b = pair[0], pair[1]
        adj[fill[_code(-a)]] = _code(b)
        fill[_code(-a)] += 1
        adj[fill[_code(-b)]] = _code(a)
        fill[_code(-b)] += 1

    index = np.full(nnodes, -1, dtype=np.int64)
    low = np.zeros(nnodes, dtype=np.int64)
    comp = np.full(nnodes, -1, dtype=np.int64)
    onstack = np.zeros(nnodes, dtype=np.bool_)
    stack = np.empty(nnodes, dtype=np.int64)
    call = np.empty(nnodes, dtype=np.int64)
    eptr = np.empty(nnodes, dtype=np.int64)
    sp = 0
    counter = 0
    ncomp = 0
    for v in range(1, nvars + 1):
        if not occurs[v]:
            continue
        for root in (2 * v, 2 * v + 1):
            if index[root] >= 0:
                continue
            cp = 0
            call[0] = root
            eptr[0] = deg[root]
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            onstack[root] = True
            while cp >= 0:
                node = call[cp]
                if eptr[cp] < deg[node + 1]:
                    w = adj[eptr[cp]]
                    eptr[cp] += 1
                    if index[w] < 0:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        onstack[w] = True
                        cp += 1
                        call[cp] = w
                        eptr[cp] = deg[w]
                    elif onstack[w]:
                        if index[w] < low[node]:
                            low[node] = index[w]
                else:
                    if low[node] == index[node]:
                        while True:
                            sp -= 1
                            w = stack[sp]
                            onstack[w] = False
                            comp[w] = ncomp
                            if w == node:
                                break
                        ncomp += 1
                    cp -= 1
                    if cp >= 0:
                        parent = call[cp]
                        if low[node] < low[parent]:
                            low[parent] = low[node]
    for v in range(1, nvars + 1):
        if occurs[v] and comp[2 * v] == comp[2 * v + 1]:
            return False
    for v in range(1, nvars + 1):
        if val[v] >= 0:
            model[v] = val[v]
        elif occurs[v]:
            model[v] = 1 if comp[2 * v] < comp[2 * v + 1] else 0
        else:
            model[v] = 0
    return True


@njit(cache=True)
def run(cstart, lits, clen, occ_start, occ, scale, nvars,
        val, nsat, nfalse, trail, ftrail, flit, fstate, weight, model, st, max_steps):
    """Advance the search by at most ``max_steps`` node visits."""
    if st[S_STARTED] == 0:
        st[S_STARTED] = 1
        st[S_CONFLICT] = 1 if _root_units(cstart, lits, val, nsat, nfalse, clen,
                                          occ_start, occ, trail, st) else 0
    steps = 0
    while steps < max_steps:
        steps += 1
        if st[S_CONFLICT]:
            depth = st[S_DEPTH]
            while depth > 0 and fstate[depth - 1] == 1:
                depth -= 1
            st[S_DEPTH] = depth
            if depth == 0:
                return UNSAT
            d = depth - 1
            _undo_to(ftrail[d], val, nsat, nfalse, clen, occ_start, occ, trail, st)
            fstate[d] = 1
            _assign(-flit[d], val, nsat, nfalse, clen, occ_start, occ, trail, st)
            st[S_CONFLICT] = 1 if _propagate(cstart, lits, val, nsat, nfalse, clen,
                                             occ_start, occ, trail, st) else 0
            continue
        if st[S_OPEN] == 0:
            for v in range(1, nvars + 1):
                model[v] = val[v] if val[v] >= 0 else 0
            return SAT
        if st[S_LONG] == 0:
            st[S_TWOSAT] += 1
            if _two_sat(cstart, lits, val, nsat, nvars, model):
                return SAT
            st[S_CONFLICT] = 1
            continue
        lit = _pick(cstart, lits, val, nsat, nfalse, clen, scale, weight, nvars)
        st[S_DECISIONS] += 1
        d = st[S_DEPTH]
        ftrail[d] = st[S_TRAIL]
        flit[d] = lit
        fstate[d] = 0
        st[S_DEPTH] = d + 1
        _assign(lit, val, nsat, nfalse, clen, occ_start, occ, trail, st)
        st[S_CONFLICT] = 1 if _propagate(cstart, lits, val, nsat, nfalse, clen,
                                         occ_start, occ, trail, st) else 0
    return RUNNING


def weight_scale(max_len: int) -> int:
    return math.lcm(*range(1, max_len + 1)) if max_len > 0 else 1


class Engine:
    """Holds the compiled-engine arrays for one formula."""

    def __init__(self, num_vars: int, clauses):
        m = len(clauses)
        self.num_vars = num_vars
        self.clen = np.array([len(c) for c in clauses], dtype=np.int64)
        self.cstart = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(self.clen, out=self.cstart[1:])
        self.lits = np.array([l for c in clauses for l in c], dtype=np.int64)
        codes = np.where(self.lits > 0, 2 * self.lits, -2 * self.lits + 1)
        owner = np.repeat(np.arange(m, dtype=np.int64), self.clen)
        order = np.argsort(codes, kind="stable")
        self.occ = owner[order]
        counts = np.bincount(codes, minlength=2 * num_vars + 2)
        self.occ_start = np.zeros(2 * num_vars + 3, dtype=np.int64)
        np.cumsum(counts, out=self.occ_start[1:])
        self.scale = weight_scale(int(self.clen.max()) if m else 0)

        self.val = np.full(num_vars + 1, -1, dtype=np.int8)
        self.nsat = np.zeros(m, dtype=np.int64)
        self.nfalse = np.zeros(m, dtype=np.int64)
        self.trail = np.zeros(num_vars + 1, dtype=np.int64)
        self.ftrail = np.zeros(num_vars + 1, dtype=np.int64)
        self.flit = np.zeros(num_vars + 1, dtype=np.int64)
        self.fstate = np.zeros(num_vars + 1, dtype=np.int8)
        self.weight = np.zeros(2 * num_vars + 2, dtype=np.int64)
        self.model = np.zeros(num_vars + 1, dtype=np.int8)
        self.st = np.zeros(N_SCALARS, dtype=np.int64)
        self.st[S_OPEN] = m
        self.st[S_LONG] = int((self.clen >= 3).sum())

    @staticmethod
    def fits(num_vars: int, clauses) -> bool:
        """Whether integer weights stay well inside int64."""
        max_len = max((len(c) for c in clauses), default=0)
        total = sum(len(c) for c in clauses) + 1
        return weight_scale(max_len) * total < 2**62

    def step(self, max_steps: int) -> int:
        return run(self.cstart, self.lits, self.clen, self.occ_start, self.occ,
                   self.scale, self.num_vars, self.val, self.nsat, self.nfalse,
                   self.trail, self.ftrail, self.flit, self.fstate, self.weight,
                   self.model, self.st, max_steps)

    @property
    def decisions(self) -> int:
        return int(self.st[S_DECISIONS])

    @property
    def propagations(self) -> int:
        return int(self.st[S_PROPS])

    @property
    def two_sat_calls(self) -> int:
        return int(self.st[S_TWOSAT])
