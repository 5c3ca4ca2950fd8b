"""Command-line front end.

Exit codes: 0 on success (``solve``: converged), 2 when a solve does not
converge or a reproduction has mismatching cells, 1 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import problems, report, reproduce
from .errors import ExpressionError
from .numfmt import format_complex, format_real, parse_complex
from .order import order_of_method
from .solver import SolverConfig, Status, Z1Policy, iterate

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _k_list(text):
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty k list")
    return sorted({_positive_int(s.strip()) for s in items})


def _start_pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected Z0,Z1, got {text!r}")
    return tuple(_complex_arg(p) for p in parts)


def _add_output(p):
    p.add_argument("--format", choices=report.FORMATS, default="table")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")


def _add_problem(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--problem", help="built-in problem name (%s)"
                   % ", ".join(pr.name for pr in problems.builtin_problems()))
    g.add_argument("--function", help='expression in z, e.g. "z^3-8"')
    p.add_argument("--root", type=_complex_arg, help="known root, for error columns")


def _add_tolerances(p):
    p.add_argument("--tol-residual", type=_positive_float, default=1e-13)
    p.add_argument("--tol-step", type=_positive_float, default=1e-13)
    p.add_argument("--max-iter", type=_positive_int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gensecant", description="Generalized secant method for complex roots.")
    parser.add_argument("-v", "--verbose", action="store_true", help="show solver warnings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve f(z) = 0 and print the iteration report")
    _add_problem(p)
    p.add_argument("--z0", type=_complex_arg)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--z1", type=_complex_arg)
    g.add_argument("--z1-policy", choices=[z.value for z in Z1Policy])
    p.add_argument("--k", type=_positive_int, default=2)
    _add_tolerances(p)
    _add_output(p)

    p = sub.add_parser("reproduce", help="re-run a reference example and compare")
    p.add_argument("--table", type=int, choices=sorted(reproduce.TABLES), required=True)
    p.add_argument("--z0", type=_complex_arg, help="override the reference start")
    p.add_argument("--z1", type=_complex_arg, help="override the reference start")
    _add_output(p)

    p = sub.add_parser("order-table", help="print s_k and its bounds for k = 1..K")
    p.add_argument("--k-max", type=_positive_int, required=True)
    _add_output(p)

    p = sub.add_parser("sweep", help="solve for several k and starts, one summary row each")
    _add_problem(p)
    p.add_argument("--k", type=_k_list, required=True, help="comma-separated list, e.g. 1,2,3")
    p.add_argument("--start", type=_start_pair, action="append",
                   help="Z0,Z1 pair; repeatable (default: the problem's suggested start)")
    p.add_argument("--jobs", type=_positive_int, default=4)
    _add_tolerances(p)
    _add_output(p)
    return parser


def _emit(data: bytes, out: Optional[str]):
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _resolve_problem(args):
    if args.problem is not None:
        try:
            return problems.lookup(args.problem)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    try:
        return problems.from_expression(args.function)
    except ExpressionError as exc:
        raise UsageError(f"cannot parse --function: {exc}") from None


def _known_root(args, problem, near):
    if args.root is not None:
        return args.root
    return problem.nearest_root(near)


# --- solve -----------------------------------------------------------------

def cmd_solve(args) -> int:
    problem = _resolve_problem(args)
    z0 = args.z0
    z1 = args.z1
    if args.z1_policy is not None:
        z1 = Z1Policy(args.z1_policy)
    if z0 is None:
        if problem.suggested_start is None:
            raise UsageError("--z0 is required for this problem")
        z0 = problem.suggested_start[0]
        if z1 is None:
            z1 = problem.suggested_start[1]
    if z1 is None:
        z1 = Z1Policy.BRIN
    try:
        config = SolverConfig(k=args.k, z0=z0, z1=z1, tol_residual=args.tol_residual,
                              tol_step=args.tol_step, max_iter=args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    trace = iterate(problem, config)
    root = _known_root(args, problem, trace.iterates[-1]) if trace.iterates else None
    summary = (f"status {trace.status}: {trace.message}; {len(trace.iterates)} iterates, "
               f"{trace.f_evals} evaluations of f")
    if trace.root is not None:
        summary += f"; root {format_complex(trace.root)}"
    if not trace.iterates:
        print(summary, file=sys.stderr)
        return EXIT_NOT_CONVERGED
    records = report.build_report(trace, root, args.k)
    body = report.render(records, args.format)
    if args.format == "table":
        body = (summary + "\n").encode("ascii") + body
    else:
        print(summary, file=sys.stderr)
    _emit(body, args.out)
    return EXIT_OK if trace.status is Status.CONVERGED else EXIT_NOT_CONVERGED


# --- reproduce -------------------------------------------------------------

def cmd_reproduce(args) -> int:
    rep = reproduce.run(args.table, z0=args.z0, z1=args.z1)
    _emit(reproduce.render(rep, args.format), args.out)
    return EXIT_OK if rep.mismatches == 0 else EXIT_NOT_CONVERGED


# --- order-table -----------------------------------------------------------

def cmd_order_table(args) -> int:
    infos = [order_of_method(k) for k in range(1, args.k_max + 1)]
    columns = ("k", "s_k", "lower_bound", "upper_bound")
    if args.format == "table":
        lines = ["   k     s_k   lower bound   upper bound",
                 "----  ------  ------------  ------------"]
        for o in infos:
            lines.append(f"{o.k:4d}  {o.s_k:6.4g}  {o.lower_bound:12.10f}  {o.upper_bound:12.10f}")
        data = ("\n".join(lines) + "\n").encode("ascii")
    else:
        rows = [{"k": o.k, "s_k": o.s_k, "lower_bound": o.lower_bound,
                 "upper_bound": o.upper_bound} for o in infos]
        data = _tabular(rows, columns, args.format)
    _emit(data, args.out)
    return EXIT_OK


def _tabular(rows, columns, fmt) -> bytes:
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in rows).encode("ascii")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([
            "" if r[c] is None else (format_real(r[c]) if isinstance(r[c], float) else r[c])
            for c in columns])
    return buf.getvalue().encode("ascii")


# --- sweep -----------------------------------------------------------------

@dataclass
class SweepRow:
    k: int
    start: int
    z0: complex
    z1: complex
    status: str
    iterations: int
    f_evals: int
    root: Optional[complex]
    abs_eps: Optional[float]
    order_est: Optional[float]
    s_k: float


def _best_order(records) -> Optional[float]:
    for r in reversed(records):
        if r.order_est is not None:
            return r.order_est
    return None


def sweep_one(problem, k, index, start, args) -> SweepRow:
    z0, z1 = start
    s_k = order_of_method(k).s_k
    try:
        config = SolverConfig(k=k, z0=z0, z1=z1, tol_residual=args.tol_residual,
                              tol_step=args.tol_step, max_iter=max(args.max_iter, k + 1))
        trace = iterate(problem, config)
    except Exception as exc:  # a failed run is a row, never an aborted sweep
        return SweepRow(k, index, z0, z1, f"Error: {exc}", 0, 0, None, None, None, s_k)
    last = trace.iterates[-1] if trace.iterates else None
    alpha = _known_root(args, problem, last) if last is not None else None
    if alpha is None:
        alpha = trace.root
    abs_eps = order = None
    if alpha is not None and trace.iterates:
        records = report.build_report(trace, alpha, k)
        abs_eps = records[-1].abs_eps
        order = _best_order(records)
    return SweepRow(k, index, z0, z1, str(trace.status), len(trace.iterates) - 1,
                    trace.f_evals, trace.root, abs_eps, order, s_k)


def cmd_sweep(args) -> int:
    problem = _resolve_problem(args)
    starts = args.start
    if not starts:
        if problem.suggested_start is None:
            raise UsageError("--start is required for this problem")
        starts = [problem.suggested_start]
    jobs = [(k, i, s) for k in args.k for i, s in enumerate(starts)]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(lambda j: sweep_one(problem, j[0], j[1], j[2], args), jobs))

    columns = ("k", "start", "z0", "z1", "status", "iterations", "f_evals",
               "root", "abs_eps", "order_est", "s_k")
    if args.format == "table":
        lines = [f"{'k':>3}  {'start':>5}  {'status':>14}  {'iter':>4}  {'|eps|':>9}  "
                 f"{'order':>6}  {'s_k':>6}  root"]
        for r in rows:
            lines.append(
                f"{r.k:3d}  {r.start:5d}  {r.status:>14}  {r.iterations:4d}  "
                f"{'-' if r.abs_eps is None else f'{r.abs_eps:.3e}':>9}  "
                f"{'-' if r.order_est is None else f'{r.order_est:.3f}':>6}  {r.s_k:6.4f}  "
                f"{'-' if r.root is None else format_complex(r.root)}")
        data = ("\n".join(lines) + "\n").encode("ascii")
    else:
        dict_rows = [{
            "k": r.k, "start": r.start, "z0": format_complex(r.z0), "z1": format_complex(r.z1),
            "status": r.status, "iterations": r.iterations, "f_evals": r.f_evals,
            "root": None if r.root is None else format_complex(r.root),
            "abs_eps": r.abs_eps, "order_est": r.order_est, "s_k": r.s_k,
        } for r in rows]
        data = _tabular(dict_rows, columns, args.format)
    _emit(data, args.out)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "reproduce": cmd_reproduce,
    "order-table": cmd_order_table,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gensecant {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"gensecant {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
