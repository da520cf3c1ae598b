"""Bound-search harness: walk n upward for a (kind, c) family and record
what each solver proves.

A verified coloring of size n proves R > n.  An UNSAT answer from the
complete solver at n proves R <= n.  Local-search failures prove nothing.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .certificate import write_certificate
from .dpll import dpll_solve
from .encoders import Coloring, Kind, ProblemSpec, decode, encode
from .parallel import ParallelConfig, parallel_dpll, portfolio_search
from .result import Status
from .verifier import verify_coloring
from .walksat import WalksatConfig

log = logging.getLogger(__name__)

# Proven upper bounds obtained analytically (no search involved).
KNOWN_UPPER_BOUNDS = {
    (Kind.L, 3): 2593,
    (Kind.VDS, 3): 68,
}

# Published exact values and lower bounds, used to annotate reports.
REFERENCE_EXACT = {
    (Kind.VDS, 1): 2,
    (Kind.VDS, 2): 5,
    (Kind.VDS, 3): 29,
    (Kind.VDS, 4): 58,
    (Kind.VDC, 2): 9,
    (Kind.L, 2): 5,
}
REFERENCE_LOWER = {
    (Kind.L, 3): 21,
    (Kind.VDS, 5): 181,
    (Kind.VDS, 6): 334,
    (Kind.VDC, 3): 522,
}


@dataclass
class InstanceRecord:
    n: int
    status: Status
    elapsed: float
    decisions: int = 0
    flips: int = 0
    certificate: Optional[str] = None
    note: str = ""


@dataclass
class BoundReport:
    kind: Kind
    c: int
    solver: str
    largest_sat_n: Optional[int] = None
    first_unsat_n: Optional[int] = None
    records: list[InstanceRecord] = field(default_factory=list)
    certificates: dict[int, str] = field(default_factory=dict)
    colorings: dict[int, Coloring] = field(default_factory=dict)
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def exact(self) -> Optional[int]:
        if (self.first_unsat_n is not None and self.largest_sat_n is not None
                and self.first_unsat_n == self.largest_sat_n + 1):
            return self.first_unsat_n
        return None

    @property
    def lower_bound(self) -> Optional[int]:
        return None if self.largest_sat_n is None else self.largest_sat_n + 1

    @property
    def upper_bound(self) -> Optional[int]:
        return self.first_unsat_n

    @property
    def conclusion(self) -> str:
        name = f"R_{self.c}({self.kind})"
        if self.exact is not None:
            return f"{name} = {self.exact}"
        parts = []
        if self.lower_bound is not None:
            parts.append(f"{name} >= {self.lower_bound}")
        if self.upper_bound is not None:
            parts.append(f"{name} <= {self.upper_bound}")
        return ", ".join(parts) if parts else f"{name}: no bound established"

    def summary(self) -> str:
        lines = [f"{self.conclusion}   [solver={self.solver}]"]
        if self.certificates:
            top = max(self.certificates)
            lines.append(f"  {len(self.certificates)} verified certificates; largest n={top}: "
                         f"{self.certificates[top]}")
        for text, ok in self.checks:
            lines.append(f"  check {'ok  ' if ok else 'FAIL'} {text}")
        return "\n".join(lines)

    def to_tsv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(["kind", "c", "n", "status", "elapsed_s", "decisions", "flips", "certificate", "note"])
        for r in self.records:
            w.writerow([self.kind, self.c, r.n, r.status, f"{r.elapsed:.3f}", r.decisions,
                        r.flips, r.certificate or "", r.note])
        return buf.getvalue()


def consistency_checks(report: BoundReport) -> list[tuple[str, bool]]:
    """Compare the computed bounds with analytic upper bounds and published values."""
    key = (report.kind, report.c)
    name = f"R_{report.c}({report.kind})"
    checks = []
    upper = KNOWN_UPPER_BOUNDS.get(key)
    if upper is not None:
        if report.exact is not None:
            checks.append((f"computed {name} = {report.exact} <= analytic bound {upper}",
                           report.exact <= upper))
        elif report.lower_bound is not None:
            checks.append((f"computed lower bound {name} >= {report.lower_bound} <= analytic bound {upper}",
                           report.lower_bound <= upper))
    ref = REFERENCE_EXACT.get(key)
    if ref is not None:
        if report.exact is not None:
            checks.append((f"exact value {report.exact} equals published {ref}", report.exact == ref))
        elif report.lower_bound is not None:
            checks.append((f"lower bound {report.lower_bound} <= published {ref}", report.lower_bound <= ref))
    ref_lo = REFERENCE_LOWER.get(key)
    if ref_lo is not None and report.lower_bound is not None:
        checks.append((f"lower bound {report.lower_bound} vs published lower bound {ref_lo}"
                       f" ({report.lower_bound / ref_lo:.0%})", True))
    return checks


def solve_instance(spec: ProblemSpec, solver: str, pcfg: ParallelConfig,
                   wcfg: Optional[WalksatConfig] = None):
    """Solve one instance; returns (SolveResult, verified Coloring or None)."""
    if solver == "dpll":
        f = encode(spec)
        if pcfg.workers > 1:
            res = parallel_dpll(f, pcfg)
        else:
            deadline = None if pcfg.timeout is None else time.monotonic() + pcfg.timeout
            res = dpll_solve(f, deadline=deadline)
        coloring = decode(spec, res.model) if res.status is Status.SAT else None
    elif solver == "walksat":
        res = portfolio_search(spec, wcfg or WalksatConfig(), pcfg)
        coloring = res.coloring
    else:
        raise ValueError(f"unknown solver {solver!r}")
    if coloring is not None:
        violation = verify_coloring(coloring)
        if violation is not None:
            raise RuntimeError(f"solver returned an invalid certificate for {spec}: {violation}")
    return res, coloring


def search_bound(
    kind,
    c: int,
    solver: str = "dpll",
    start: int = 1,
    max_n: Optional[int] = None,
    pcfg: Optional[ParallelConfig] = None,
    wcfg: Optional[WalksatConfig] = None,
    cert_dir: Optional[Path] = None,
    budget: Optional[float] = None,
) -> BoundReport:
    """Try n = start, start+1, ... until the solver stops making progress.

    With ``dpll`` the walk ends at the first UNSAT (or timeout); with
    ``walksat`` at the first UNKNOWN.  ``max_n`` and the overall ``budget``
    (seconds) also end it.  Every certificate is verified before it is
    recorded.
    """
    kind = Kind(kind)
    pcfg = pcfg or ParallelConfig(workers=1)
    report = BoundReport(kind, c, solver)
    t0 = time.monotonic()
    n = start
    while max_n is None or n <= max_n:
        if budget is not None and time.monotonic() - t0 >= budget:
            log.info("overall budget exhausted before n=%d", n)
            break
        spec = ProblemSpec(kind, n, c)
        res, coloring = solve_instance(spec, solver, pcfg, wcfg)
        rec = InstanceRecord(n, res.status, res.stats.elapsed, res.stats.decisions, res.stats.flips)
        report.records.append(rec)
        log.info("%s: %s (%.2fs)", spec, res.status, res.stats.elapsed)
        if coloring is not None:
            report.largest_sat_n = n
            report.colorings[n] = coloring
            if cert_dir is not None:
                path = write_certificate(Path(cert_dir) / f"{kind}_c{c}_n{n}.txt", coloring)
                rec.certificate = str(path)
                report.certificates[n] = str(path)
        elif res.status is Status.UNSAT:
            report.first_unsat_n = n
            break
        else:
            rec.note = res.reason or ""
            break
        n += 1
    report.checks = consistency_checks(report)
    return report
