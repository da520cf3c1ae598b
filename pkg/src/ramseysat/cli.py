"""Command-line interface.

Subcommands: ``encode`` (write DIMACS), ``solve`` (one instance),
``search`` (walk n upward and report bounds), ``verify`` (check a
certificate file).  ``solve`` exits 10 on SAT, 20 on UNSAT, 0 otherwise.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .certificate import CertificateError, format_certificate, read_certificate, write_certificate
from .dimacs import DimacsError, emit_dimacs, parse_dimacs
from .dpll import dpll_solve
from .encoders import Kind, ProblemSpec, decode, encode
from .parallel import ParallelConfig, default_workers, parallel_dpll, portfolio_search
from .result import Status
from .search import search_bound
from .verifier import verify_coloring
from .walksat import WalksatConfig, local_search

log = logging.getLogger("ramseysat")

LOCAL_SEARCH_CAVEAT = (
    "c local search is incomplete: UNKNOWN means no coloring was found within the budget,\n"
    "c it is not a proof that none exists."
)


def _add_problem_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--problem", type=Kind, choices=list(Kind), required=required,
                   help="L (grid), VDS (square distances) or VDC (cube distances)")
    p.add_argument("--n", type=int, help="grid side or sequence length")
    p.add_argument("--colors", "-c", type=int, help="number of colors")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", choices=["dpll", "walksat"], default="dpll")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: $RAMSEYSAT_WORKERS or CPU count)")
    p.add_argument("--seed", type=int, default=0, help="base seed; worker i uses seed+i")
    p.add_argument("--noise", type=float, default=0.5, help="random-walk probability")
    p.add_argument("--max-flips", type=int, default=None, help="flips per restart (default 100 x vars)")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--timeout", type=float, default=None, help="seconds per instance")
    p.add_argument("--split-depth", type=int, default=None, help="DPLL decisions expanded before splitting")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramseysat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="emit the DIMACS CNF of an instance")
    _add_problem_args(p)
    p.add_argument("-o", "--output", type=Path, help="write to file instead of stdout")

    p = sub.add_parser("solve", help="solve one instance")
    _add_problem_args(p, required=False)
    p.add_argument("--cnf", type=Path, help="solve a DIMACS file instead of a generated instance")
    _add_solver_args(p)
    p.add_argument("--certificate-out", type=Path)
    p.add_argument("--figure", type=Path, help="render the certificate as an image")

    p = sub.add_parser("search", help="search for the bound of a family")
    p.add_argument("--problem", type=Kind, choices=list(Kind), required=True)
    p.add_argument("--colors", "-c", type=int, required=True)
    _add_solver_args(p)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--budget", type=float, default=None, help="overall seconds")
    p.add_argument("--report-dir", type=Path, default=None,
                   help="write bounds.tsv, summary.txt, figures and certificates here")

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("certificate", type=Path)
    p.add_argument("--figure", type=Path)
    return parser


def _configs(args):
    workers = args.workers if args.workers is not None else default_workers()
    pcfg = ParallelConfig(workers=workers, timeout=args.timeout, base_seed=args.seed,
                          split_depth=args.split_depth)
    wcfg = WalksatConfig(noise=args.noise, max_flips=args.max_flips, restarts=args.restarts,
                         seed=args.seed)
    return pcfg, wcfg


def _spec_from(args, parser) -> ProblemSpec:
    if args.problem is None or args.n is None or args.colors is None:
        parser.error("--problem, --n and --colors are required")
    return ProblemSpec(args.problem, args.n, args.colors)


def cmd_encode(args, parser) -> int:
    spec = _spec_from(args, parser)
    text = emit_dimacs(encode(spec), spec)
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args, parser) -> int:
    pcfg, wcfg = _configs(args)
    if args.cnf is not None:
        try:
            f = parse_dimacs(args.cnf.read_text())
        except DimacsError as exc:
            print(f"{args.cnf}: {exc}", file=sys.stderr)
            return 1
        spec = None
    else:
        spec = _spec_from(args, parser)
        f = None
    print(f"c config: instance={args.cnf or spec} solver={args.solver} seed={args.seed} "
          f"workers={pcfg.workers} split_depth={pcfg.depth} noise={wcfg.noise} "
          f"max_flips={wcfg.max_flips or 'default'} restarts={wcfg.restarts} timeout={args.timeout}")

    coloring = None
    if args.solver == "dpll":
        if f is None:
            f = encode(spec)
        if pcfg.workers > 1:
            res = parallel_dpll(f, pcfg)
        else:
            deadline = None if args.timeout is None else time.monotonic() + args.timeout
            res = dpll_solve(f, deadline=deadline)
        if spec is not None and res.is_sat:
            coloring = decode(spec, res.model)
    else:
        if spec is None:
            res = local_search(f, wcfg)
        else:
            res = portfolio_search(spec, wcfg, pcfg)
            coloring = res.coloring

    s = res.stats
    print(f"c decisions={s.decisions} propagations={s.propagations} two_sat_calls={s.two_sat_calls} "
          f"flips={s.flips} restarts={s.restarts} elapsed={s.elapsed:.3f}s"
          + (f" reason={res.reason}" if res.reason else ""))
    if res.status is Status.SAT:
        print("s SATISFIABLE")
        if coloring is not None:
            violation = verify_coloring(coloring)
            if violation is not None:
                print(f"c ERROR: certificate failed verification: {violation}", file=sys.stderr)
                return 1
            sys.stdout.write(format_certificate(coloring))
            if args.certificate_out:
                write_certificate(args.certificate_out, coloring)
            if args.figure:
                from .plotting import plot_coloring

                plot_coloring(coloring, args.figure)
        else:
            print("v " + " ".join(str(l) for l in res.model.to_literals()) + " 0")
    elif res.status is Status.UNSAT:
        print("s UNSATISFIABLE")
    else:
        print("s UNKNOWN")
        if args.solver == "walksat":
            print(LOCAL_SEARCH_CAVEAT)
    return res.status.exit_code


def cmd_search(args, parser) -> int:
    pcfg, wcfg = _configs(args)
    print(f"c config: family={args.problem} c={args.colors} solver={args.solver} seed={args.seed} "
          f"workers={pcfg.workers} start={args.start} max_n={args.max_n} noise={wcfg.noise} "
          f"max_flips={wcfg.max_flips or 'default'} restarts={wcfg.restarts} "
          f"timeout={args.timeout} budget={args.budget}")
    out = args.report_dir
    cert_dir = out / "certificates" if out else None
    report = search_bound(args.problem, args.colors, args.solver, start=args.start,
                          max_n=args.max_n, pcfg=pcfg, wcfg=wcfg, cert_dir=cert_dir,
                          budget=args.budget)
    print(report.summary())
    if args.solver == "walksat" and report.records and report.records[-1].status is Status.UNKNOWN:
        print(LOCAL_SEARCH_CAVEAT)
    if out:
        from .plotting import plot_coloring, plot_search

        out.mkdir(parents=True, exist_ok=True)
        stem = f"{args.problem}_c{args.colors}"
        (out / f"{stem}_bounds.tsv").write_text(report.to_tsv())
        (out / f"{stem}_summary.txt").write_text(report.summary() + "\n")
        plot_search(report, out / f"{stem}_search.png")
        if report.largest_sat_n is not None:
            n = report.largest_sat_n
            plot_coloring(report.colorings[n], out / f"{stem}_n{n}.png")
        print(f"c report written to {out}")
    return 0 if all(ok for _, ok in report.checks) else 1


def cmd_verify(args, parser) -> int:
    try:
        coloring = read_certificate(args.certificate)
    except (OSError, CertificateError) as exc:
        print(f"{args.certificate}: {exc}", file=sys.stderr)
        return 2
    violation = verify_coloring(coloring)
    spec = coloring.spec
    if violation is None:
        print(f"OK: {spec} certificate has no monochromatic pattern (R_{spec.c}({spec.kind}) > {spec.n})")
        if args.figure:
            from .plotting import plot_coloring

            plot_coloring(coloring, args.figure)
        return 0
    print(f"INVALID: {violation}")
    return 1


COMMANDS = {"encode": cmd_encode, "solve": cmd_solve, "search": cmd_search, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
