"""DIMACS CNF reading and writing."""

from __future__ import annotations

from typing import Optional

from .cnf import Formula
from .encoders import ProblemSpec


class DimacsError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def emit_dimacs(f: Formula, spec: Optional[ProblemSpec] = None) -> str:
    lines = []
    if spec is not None:
        lines.append(f"c problem {spec.kind} n={spec.n} c={spec.c}")
        if spec.is_grid:
            lines.append("c var ((i-1)*n + (j-1))*c + k  <=>  point (i,j) has color k")
        else:
            lines.append("c var (i-1)*c + k  <=>  element i has color k")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for clause in f.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def _column(raw: str, token_index: int) -> int:
    pos = 0
    for _ in range(token_index + 1):
        while raw[pos].isspace():
            pos += 1
        start = pos
        while pos < len(raw) and not raw[pos].isspace():
            pos += 1
    return start + 1


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF; clauses may span lines.  Duplicate literals and
    tautologies are normalized away, so the result may hold fewer clauses
    than the header states."""
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            if line.startswith("%"):
                break
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError("negative count in header", lineno)
            header = (num_vars, num_clauses)
            continue
        if header is None:
            raise DimacsError("clause before 'p cnf' header", lineno)
        for ti, tok in enumerate(raw.split()):
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"invalid literal {tok!r}", lineno, _column(raw, ti)) from None
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause", lineno, _column(raw, ti))
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(
                    f"variable {abs(lit)} out of range (header declares {header[0]})",
                    lineno, _column(raw, ti),
                )
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header", max(last_line, 1))
    if current:
        raise DimacsError("unterminated clause (missing trailing 0)", last_line)
    if len(clauses) != header[1]:
        raise DimacsError(
            f"clause count mismatch: header declares {header[1]}, found {len(clauses)}",
            last_line,
        )
    return Formula.build(header[0], clauses)
