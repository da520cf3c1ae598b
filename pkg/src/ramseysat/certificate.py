"""Certificate text files.

Line 1 is ``<kind> <c> <n>``.  A sequence follows as one line of ``n``
colors; a grid as ``n`` lines of ``n`` colors, row-major.  Colors are
1-based.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .encoders import Coloring, Kind, ProblemSpec


class CertificateError(ValueError):
    pass


def format_certificate(coloring: Coloring) -> str:
    spec = coloring.spec
    lines = [f"{spec.kind} {spec.c} {spec.n}"]
    lines += [" ".join(str(x) for x in row) for row in coloring.rows]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Coloring:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CertificateError("empty certificate")
    head = lines[0].split()
    if len(head) != 3:
        raise CertificateError(f"header must be '<kind> <c> <n>', got {lines[0]!r}")
    try:
        kind = Kind(head[0])
        c, n = int(head[1]), int(head[2])
        spec = ProblemSpec(kind, n, c)
    except ValueError as exc:
        raise CertificateError(f"bad header {lines[0]!r}: {exc}") from None
    body = lines[1:]
    expected_rows = n if spec.is_grid else 1
    if len(body) != expected_rows:
        raise CertificateError(f"expected {expected_rows} color rows, found {len(body)}")
    rows = []
    for r, line in enumerate(body, start=2):
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            raise CertificateError(f"line {r}: non-integer color") from None
        if len(row) != n:
            raise CertificateError(f"line {r}: expected {n} colors, found {len(row)}")
        bad = [x for x in row if not 1 <= x <= c]
        if bad:
            raise CertificateError(f"line {r}: color {bad[0]} not in 1..{c}")
        rows.append(row)
    if spec.is_grid:
        return Coloring.from_rows(spec, rows)
    return Coloring(spec, tuple(rows[0]))


def write_certificate(path: Union[str, Path], coloring: Coloring) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_certificate(coloring))
    return path


def read_certificate(path: Union[str, Path]) -> Coloring:
    return parse_certificate(Path(path).read_text())
