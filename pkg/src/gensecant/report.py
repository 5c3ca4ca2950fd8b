"""Per-iteration diagnostics tables built from a solver trace.

Column conventions: the order estimate on row ``n`` uses the errors of rows
``n-1, n, n+1`` and the sigma ratio on row ``n`` has ``eps_{n+1}`` in its
numerator. Both columns start at row ``n = k``.

Rows whose error is within ``50 * machine epsilon * max(1, |alpha|)`` of
zero carry ``RoundoffSuspect``: at that size the error is dominated by the
rounding of the iterate itself. Sigma and order cells that would need such
an error are left empty and the row is marked ``Unavailable``.

On significant digits: if ``z_n`` has ``q_n = -log10|eps_n / alpha|``
correct digits and ``D = (|L|^(1/k) |alpha|)^(s_k - 1)`` is of order one,
the next iterate has roughly ``s_k * q_n`` correct digits, so the digit
count grows geometrically with ratio ``s_k``.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ZeroError, ZeroRoot
from .numfmt import format_complex, format_real, parse_complex
from .order import order_estimate_at, sigma_ratio_at
from .solver import SolverTrace

__all__ = [
    "Flag", "IterationRecord", "CSV_COLUMNS", "FORMATS", "roundoff_threshold",
    "build_report", "significant_digits", "render", "parse_csv", "parse_jsonl",
]

MACHINE_EPSILON = sys.float_info.epsilon
ROUNDOFF_FACTOR = 50
CSV_COLUMNS = ("n", "re_z", "im_z", "re_f", "im_f", "abs_eps",
               "re_sigma", "im_sigma", "order_est", "flags")
FORMATS = ("table", "csv", "jsonl")


class Flag(str, enum.Enum):
    ROUNDOFF_SUSPECT = "RoundoffSuspect"
    UNAVAILABLE = "Unavailable"

    def __str__(self):
        return self.value


@dataclass
class IterationRecord:
    n: int
    z_n: complex
    f_zn: complex
    eps_n: Optional[complex] = None
    abs_eps: Optional[float] = None
    sigma_n: Optional[complex] = None
    order_est: Optional[float] = None
    flags: frozenset = field(default_factory=frozenset)


def roundoff_threshold(root: complex) -> float:
    return ROUNDOFF_FACTOR * MACHINE_EPSILON * max(1.0, abs(root))


def build_report(trace: SolverTrace, known_root: Optional[complex], k: int) -> list[IterationRecord]:
    zs, fs = trace.iterates, trace.residuals
    if not zs:
        raise ValueError("empty trace")
    if known_root is None:
        return [IterationRecord(n, z, fz, flags=frozenset({Flag.UNAVAILABLE}))
                for n, (z, fz) in enumerate(zip(zs, fs))]

    threshold = roundoff_threshold(known_root)
    eps = [z - known_root for z in zs]
    abs_eps = [abs(e) for e in eps]
    suspect = [a <= threshold for a in abs_eps]
    last = len(zs) - 1

    records = []
    for n in range(len(zs)):
        sigma = order = None
        if k <= n < last:
            if not any(suspect[n - k:n + 2]):
                sigma = sigma_ratio_at(eps, n, k)
            if not any(suspect[n - 1:n + 2]):
                order = order_estimate_at(abs_eps, n)
        flags = set()
        if suspect[n]:
            flags.add(Flag.ROUNDOFF_SUSPECT)
        if sigma is None or order is None:
            flags.add(Flag.UNAVAILABLE)
        records.append(IterationRecord(n, zs[n], fs[n], eps[n], abs_eps[n], sigma, order,
                                       frozenset(flags)))
    return records


def significant_digits(record: IterationRecord, root: complex) -> float:
    """Number of correct significant decimal digits, ``-log10(|eps| / |root|)``."""
    if root == 0:
        raise ZeroRoot("relative error is undefined for a zero root")
    if not record.abs_eps:
        raise ZeroError("error is zero or unknown")
    return -math.log10(record.abs_eps / abs(root))


# --- rendering -------------------------------------------------------------

def _flags_text(flags) -> str:
    return "|".join(sorted(str(f) for f in flags))


def _opt(x, fmt=format_real):
    return "" if x is None else fmt(x)


def _csv_row(r: IterationRecord) -> list[str]:
    return [
        str(r.n),
        format_real(r.z_n.real), format_real(r.z_n.imag),
        format_real(r.f_zn.real), format_real(r.f_zn.imag),
        _opt(r.abs_eps),
        _opt(None if r.sigma_n is None else r.sigma_n.real),
        _opt(None if r.sigma_n is None else r.sigma_n.imag),
        _opt(r.order_est),
        _flags_text(r.flags),
    ]


def _json_row(r: IterationRecord) -> dict:
    return {
        "n": r.n,
        "z": format_complex(r.z_n),
        "f": format_complex(r.f_zn),
        "eps": None if r.eps_n is None else format_complex(r.eps_n),
        "abs_eps": r.abs_eps,
        "sigma": None if r.sigma_n is None else format_complex(r.sigma_n),
        "order_est": r.order_est,
        "flags": sorted(str(f) for f in r.flags),
    }


def _short(x: float) -> str:
    return f"{x:.3e}"


def _short_complex(z: complex) -> str:
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{_short(z.real)} {sign}i {_short(abs(z.imag))}"


def _table(records: Sequence[IterationRecord]) -> str:
    header = ("n", "z_n", "|f(z_n)|", "|eps_n|", "sigma_n", "order", "flags")
    rows = []
    for r in records:
        rows.append((
            str(r.n),
            f"{r.z_n.real:.10g} {'-' if r.z_n.imag < 0 else '+'}i {abs(r.z_n.imag):.10g}",
            _short(abs(r.f_zn)),
            "-" if r.abs_eps is None else _short(r.abs_eps),
            "-" if r.sigma_n is None else _short_complex(r.sigma_n),
            "-" if r.order_est is None else f"{r.order_est:.3f}",
            _flags_text(r.flags),
        ))
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render(records: Sequence[IterationRecord], format: str = "table") -> bytes:
    if not records:
        raise ValueError("nothing to render")
    if format == "table":
        return _table(records).encode("ascii")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(_csv_row(r) for r in records)
        return buf.getvalue().encode("ascii")
    if format == "jsonl":
        return "".join(json.dumps(_json_row(r)) + "\n" for r in records).encode("ascii")
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def parse_csv(data: bytes | str) -> list[IterationRecord]:
    """Read records back from :func:`render` CSV output.

    ``eps_n`` is not part of the CSV schema and comes back as None.
    """
    if isinstance(data, bytes):
        data = data.decode("ascii")
    reader = csv.DictReader(io.StringIO(data))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")

    def opt(s):
        return float(s) if s != "" else None

    records = []
    for row in reader:
        sigma = None
        if row["re_sigma"] != "":
            sigma = complex(float(row["re_sigma"]), float(row["im_sigma"]))
        flags = frozenset(Flag(f) for f in row["flags"].split("|") if f)
        records.append(IterationRecord(
            n=int(row["n"]),
            z_n=complex(float(row["re_z"]), float(row["im_z"])),
            f_zn=complex(float(row["re_f"]), float(row["im_f"])),
            abs_eps=opt(row["abs_eps"]),
            sigma_n=sigma,
            order_est=opt(row["order_est"]),
            flags=flags,
        ))
    return records


def parse_jsonl(data: bytes | str) -> list[dict]:
    if isinstance(data, bytes):
        data = data.decode("ascii")
    out = []
    for line in data.splitlines():
        if line.strip():
            row = json.loads(line)
            for key in ("z", "f", "eps", "sigma"):
                if row.get(key) is not None:
                    row[key] = parse_complex(row[key])
            out.append(row)
    return out
