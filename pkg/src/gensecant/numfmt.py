"""Locale-independent complex number text formats.

``format_complex`` writes ``"re+imi"`` / ``"re-imi"`` with 17 significant
digits, which round-trips every binary64 value; ``parse_complex`` reads that
form back, plus the short forms ``"bi"`` and ``"a"`` accepted on the command
line. No spaces are allowed.
"""
from __future__ import annotations

import math
import re

__all__ = ["format_real", "format_complex", "parse_complex"]

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_FULL = re.compile(rf"(?P<re>[+-]?{_NUM})(?:(?P<sign>[+-])(?P<im>{_NUM})?i)?")
_IMAG = re.compile(rf"(?P<sign>[+-]?)(?P<im>{_NUM})?i")


def format_real(x: float, digits: int = 17) -> str:
    return format(x, f".{digits}g")


def format_complex(z: complex, digits: int = 17) -> str:
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{format_real(z.real, digits)}{sign}{format_real(abs(z.imag), digits)}i"


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``i`` alone means 1)."""
    m = _FULL.fullmatch(text)
    if m is not None:
        re_part = float(m["re"])
        if m["sign"] is None:
            return complex(re_part, 0.0)
        im_part = float(m["im"]) if m["im"] else 1.0
        return complex(re_part, -im_part if m["sign"] == "-" else im_part)
    m = _IMAG.fullmatch(text)
    if m is not None:
        im_part = float(m["im"]) if m["im"] else 1.0
        return complex(0.0, -im_part if m["sign"] == "-" else im_part)
    raise ValueError(f"not a complex literal: {text!r} (expected a, bi, a+bi or a-bi)")
