"""Independent certificate checks and brute-force oracles.

Nothing here uses the encoders' pattern lists or the solvers: grids and
sequences are scanned directly from the definitions, and formulas are
decided by truth-table enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .cnf import Formula
from .encoders import Coloring, Kind, ProblemSpec
from .result import Status

MAX_BRUTE_VARS = 25
MAX_COLORINGS = 10**8


@dataclass(frozen=True)
class Violation:
    elements: tuple  # 1-based points or integers
    color: int

    def __str__(self) -> str:
        return f"monochromatic {self.elements} in color {self.color}"


def _as_rows(n: int, c: int, grid) -> list[list[int]]:
    if isinstance(grid, Coloring):
        if not grid.spec.is_grid or grid.spec.n != n:
            raise ValueError(f"expected an {n}x{n} grid coloring")
        grid = grid.rows
    rows = [list(r) for r in grid]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"grid must be {n}x{n}")
    for r in rows:
        for x in r:
            if not (isinstance(x, (int, np.integer)) and 1 <= x <= c):
                raise ValueError(f"color {x!r} not in 1..{c}")
    return rows


def verify_grid(n: int, c: int, grid) -> Union[Violation, None]:
    """First monochromatic L in (t, i, j) order, or ``None`` if there is none.

    An L is the point set {(i, j), (i, j+t), (i+t, j+t)} with t >= 1.
    """
    g = _as_rows(n, c, grid)
    for t in range(1, n):
        for i in range(n - t):
            for j in range(n - t):
                col = g[i][j]
                if g[i][j + t] == col and g[i + t][j + t] == col:
                    return Violation(((i + 1, j + 1), (i + 1, j + t + 1), (i + t + 1, j + t + 1)), col)
    return None


def _power(kind: Kind) -> int:
    kind = Kind(kind)
    if kind is Kind.VDS:
        return 2
    if kind is Kind.VDC:
        return 3
    raise ValueError(f"not a sequence problem: {kind}")


def verify_sequence(kind, n: int, c: int, seq) -> Union[Violation, None]:
    """First monochromatic pair (a, a + k^p) in (k, a) order, or ``None``."""
    p = _power(kind)
    if isinstance(seq, Coloring):
        seq = seq.colors
    seq = list(seq)
    if len(seq) != n:
        raise ValueError(f"sequence must have length {n}, got {len(seq)}")
    for x in seq:
        if not (isinstance(x, (int, np.integer)) and 1 <= x <= c):
            raise ValueError(f"color {x!r} not in 1..{c}")
    k = 1
    while k**p <= n - 1:
        d = k**p
        for a in range(1, n - d + 1):
            if seq[a - 1] == seq[a + d - 1]:
                return Violation((a, a + d), seq[a - 1])
        k += 1
    return None


def verify_coloring(coloring: Coloring) -> Union[Violation, None]:
    spec = coloring.spec
    if spec.is_grid:
        return verify_grid(spec.n, spec.c, coloring.rows)
    return verify_sequence(spec.kind, spec.n, spec.c, coloring.colors)


def brute_force_solve(f: Formula) -> Status:
    """Decide ``f`` by enumerating all 2^n assignments (n <= 25)."""
    n = f.num_vars
    if n > MAX_BRUTE_VARS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_VARS} variables, got {n}")
    if not f.clauses:
        return Status.SAT
    chunk = 1 << min(n, 18)
    for base in range(0, 1 << n, chunk):
        idx = np.arange(base, base + chunk, dtype=np.int64)
        alive = np.ones(chunk, dtype=bool)
        for clause in f.clauses:
            sat = np.zeros(chunk, dtype=bool)
            for lit in clause:
                bit = ((idx >> (abs(lit) - 1)) & 1).astype(bool)
                sat |= bit if lit > 0 else ~bit
            alive &= sat
            if not alive.any():
                break
        if alive.any():
            return Status.SAT
    return Status.UNSAT


def _forbidden_tuples(spec: ProblemSpec) -> list[tuple[int, ...]]:
    # element positions are row-major, 0-based
    n = spec.n
    if spec.is_grid:
        return [
            (i * n + j, i * n + j + t, (i + t) * n + j + t)
            for t in range(1, n)
            for i in range(n - t)
            for j in range(n - t)
        ]
    p = _power(spec.kind)
    out = []
    k = 1
    while k**p <= n - 1:
        out += [(a, a + k**p) for a in range(n - k**p)]
        k += 1
    return out


def exhaustive_coloring_search(spec: ProblemSpec) -> int:
    """Number of colorings of ``spec`` with no monochromatic pattern."""
    m = spec.num_elements
    total = spec.c**m
    if total > MAX_COLORINGS:
        raise ValueError(f"{total} colorings exceed the limit of {MAX_COLORINGS}")
    tuples = _forbidden_tuples(spec)
    chunk = min(total, 1 << 20)
    count = 0
    for base in range(0, total, chunk):
        idx = np.arange(base, min(base + chunk, total), dtype=np.int64)
        digits = np.empty((m, idx.size), dtype=np.int8)
        rest = idx
        for e in range(m):
            digits[e] = rest % spec.c
            rest = rest // spec.c
        ok = np.ones(idx.size, dtype=bool)
        for tup in tuples:
            first = digits[tup[0]]
            mono = np.ones(idx.size, dtype=bool)
            for e in tup[1:]:
                mono &= digits[e] == first
            ok &= ~mono
        count += int(ok.sum())
    return count


def count_colorings(spec: ProblemSpec, colorings: Sequence[Sequence[int]]) -> int:
    """How many of the given color vectors are pattern-free (test helper)."""
    good = 0
    for colors in colorings:
        if verify_coloring(Coloring(spec, tuple(colors))) is None:
            good += 1
    return good
