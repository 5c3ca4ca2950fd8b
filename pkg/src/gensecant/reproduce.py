"""Re-run a reference example and compare it cell by cell with the stored table."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

from . import problems
from .numfmt import format_complex, format_real
from .order import asymptotic_error_constant, order_of_method
from .reference import (
    ABS_EPS_DIGITS, LOOSE_REL_TOL, ORDER_ABS_TOL, SIGMA_DIGITS, TABLES,
    ReferenceRow, ReferenceTable, agrees_to_digits,
)
from .report import Flag, IterationRecord, build_report
from .solver import SolverConfig, SolverTrace, iterate

__all__ = ["Comparison", "Reproduction", "run", "compare_row", "render"]

OK, MISMATCH, EXCLUDED = "ok", "mismatch", "excluded"


@dataclass
class Comparison:
    n: int
    record: Optional[IterationRecord]
    reference: Optional[ReferenceRow]
    abs_eps: str = ""
    sigma: str = ""
    order: str = ""

    @property
    def verdicts(self):
        return [v for v in (self.abs_eps, self.sigma, self.order) if v]


@dataclass
class Reproduction:
    table: ReferenceTable
    config: SolverConfig
    trace: SolverTrace
    records: list[IterationRecord]
    comparisons: list[Comparison] = field(default_factory=list)
    error_constant: complex = 0j

    @property
    def mismatches(self) -> int:
        return sum(c.verdicts.count(MISMATCH) for c in self.comparisons)

    @property
    def compared(self) -> int:
        return sum(len(c.verdicts) - c.verdicts.count(EXCLUDED) for c in self.comparisons)


def compare_row(record: Optional[IterationRecord], ref: ReferenceRow) -> Comparison:
    cmp = Comparison(ref.n, record, ref)
    if record is None or ref.check == "extended" or Flag.ROUNDOFF_SUSPECT in record.flags:
        cmp.abs_eps = EXCLUDED
        cmp.sigma = EXCLUDED if ref.sigma is not None else ""
        cmp.order = EXCLUDED if ref.order is not None else ""
        return cmp

    if ref.check == "loose":
        ok = abs(record.abs_eps - ref.abs_eps) <= LOOSE_REL_TOL * ref.abs_eps
        cmp.abs_eps = OK if ok else MISMATCH
        cmp.sigma = EXCLUDED if ref.sigma is not None else ""
        cmp.order = EXCLUDED if ref.order is not None else ""
        return cmp

    cmp.abs_eps = OK if agrees_to_digits(record.abs_eps, ref.abs_eps, ABS_EPS_DIGITS) else MISMATCH
    if ref.sigma is not None:
        if record.sigma_n is None:
            cmp.sigma = EXCLUDED
        else:
            ok = (agrees_to_digits(record.sigma_n.real, ref.sigma.real, SIGMA_DIGITS)
                  and agrees_to_digits(record.sigma_n.imag, ref.sigma.imag, SIGMA_DIGITS))
            cmp.sigma = OK if ok else MISMATCH
    if ref.order is not None:
        if record.order_est is None:
            cmp.order = EXCLUDED
        else:
            cmp.order = OK if abs(record.order_est - ref.order) <= ORDER_ABS_TOL else MISMATCH
    return cmp


def run(number: int, z0: complex | None = None, z1: complex | None = None) -> Reproduction:
    table = TABLES[number]
    problem = problems.lookup(table.problem)
    config = SolverConfig(
        k=table.k,
        z0=table.z0 if z0 is None else z0,
        z1=table.z1 if z1 is None else z1,
    )
    trace = iterate(problem, config)
    records = build_report(trace, table.root, table.k)
    rep = Reproduction(table, config, trace, records)
    n_rows = max(len(records), len(table.rows))
    for n in range(n_rows):
        rec = records[n] if n < len(records) else None
        if n < len(table.rows):
            rep.comparisons.append(compare_row(rec, table.rows[n]))
        else:
            rep.comparisons.append(Comparison(n, rec, None))
    alpha = table.root
    rep.error_constant = asymptotic_error_constant(
        problem.derivative(alpha, 1), problem.derivative(alpha, table.k + 1), table.k)
    return rep


_CSV_COLUMNS = ("n", "abs_eps", "ref_abs_eps", "abs_eps_check",
                "re_sigma", "im_sigma", "ref_re_sigma", "ref_im_sigma", "sigma_check",
                "order_est", "ref_order", "order_check", "flags", "ref_tag")


def _fields(c: Comparison) -> dict:
    rec, ref = c.record, c.reference

    def real(x):
        return "" if x is None else format_real(x)

    return {
        "n": str(c.n),
        "abs_eps": real(rec.abs_eps if rec else None),
        "ref_abs_eps": real(ref.abs_eps if ref else None),
        "abs_eps_check": c.abs_eps,
        "re_sigma": real(rec.sigma_n.real if rec and rec.sigma_n is not None else None),
        "im_sigma": real(rec.sigma_n.imag if rec and rec.sigma_n is not None else None),
        "ref_re_sigma": real(ref.sigma.real if ref and ref.sigma is not None else None),
        "ref_im_sigma": real(ref.sigma.imag if ref and ref.sigma is not None else None),
        "sigma_check": c.sigma,
        "order_est": real(rec.order_est if rec else None),
        "ref_order": real(ref.order if ref else None),
        "order_check": c.order,
        "flags": "|".join(sorted(str(f) for f in rec.flags)) if rec else "",
        "ref_tag": ref.check if ref else "",
    }


def _short(x):
    return "-" if x is None else f"{x:.3e}"


def _short_c(z):
    if z is None:
        return "-"
    return f"{z.real:.3e} {'-' if z.imag < 0 else '+'}i {abs(z.imag):.3e}"


def _table(rep: Reproduction) -> str:
    t = rep.table
    s = order_of_method(t.k)
    lines = [
        f"table {t.number}: problem {t.problem}, k={t.k}, "
        f"z0={format_complex(rep.config.z0, 6)}, z1={format_complex(rep.config.z1, 6)}",
        f"root {format_complex(t.root)}; status {rep.trace.status} after {len(rep.trace) - 1} steps",
        f"limit of sigma: {format_complex(rep.error_constant, 7)}; "
        f"order s_{t.k} = {s.s_k:.5f}",
    ]
    if t.note:
        lines.append(f"note: {t.note}")
    header = ("n", "|eps_n|", "ref", "chk", "sigma_n", "ref", "chk", "order", "ref", "chk", "flags")
    rows = []
    for c in rep.comparisons:
        rec, ref = c.record, c.reference
        rows.append((
            str(c.n),
            _short(rec.abs_eps if rec else None), _short(ref.abs_eps if ref else None), c.abs_eps or "",
            _short_c(rec.sigma_n if rec else None), _short_c(ref.sigma if ref else None), c.sigma or "",
            "-" if not rec or rec.order_est is None else f"{rec.order_est:.3f}",
            "-" if not ref or ref.order is None else f"{ref.order:.3f}", c.order or "",
            "|".join(sorted(str(f) for f in rec.flags)) if rec else "",
        ))
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(r, widths)).rstrip() for r in rows)
    lines.append(f"{rep.compared} cells compared, {rep.mismatches} mismatches")
    return "\n".join(lines) + "\n"


def render(rep: Reproduction, format: str = "table") -> bytes:
    if format == "table":
        return _table(rep).encode("ascii")
    rows = [_fields(c) for c in rep.comparisons]
    if format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue().encode("ascii")
    if format == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in rows).encode("ascii")
    raise ValueError(f"unknown format {format!r}")
