"""Test problems: a function, its known roots, and a suggested starting pair."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .expr import Expression, parse

__all__ = ["Problem", "builtin_problems", "lookup", "from_expression"]


@dataclass(frozen=True)
class Problem:
    """A root-finding problem.

    ``derivative(z, m)`` is optional closed-form access to the m-th
    derivative; the built-in problems carry it so that asymptotic error
    constants can be evaluated exactly at a root.
    """

    name: str
    f: Expression | Callable[[complex], complex]
    known_roots: tuple[complex, ...] = ()
    suggested_start: Optional[tuple[complex, complex]] = None
    derivative: Optional[Callable[[complex, int], complex]] = field(default=None, repr=False)
    description: str = ""

    def __call__(self, z: complex) -> complex:
        return self.f(z)

    def nearest_root(self, z: complex) -> Optional[complex]:
        if not self.known_roots:
            return None
        return min(self.known_roots, key=lambda r: abs(z - r))


def _cubic_derivative(z, m):
    if m == 0:
        return z**3 - 8
    return (0j, 3 * z * z, 6 * z, 6 + 0j)[m] if m <= 3 else 0j


def _trig_derivative(z, m):
    # derivatives of sin(iz) alternate between sin(iz) and i cos(iz)
    sin_iz = cmath.sin(1j * z) if m % 2 == 0 else 1j * cmath.cos(1j * z)
    cos_z = (cmath.cos(z), -cmath.sin(z), -cmath.cos(z), cmath.sin(z))[m % 4]
    return sin_iz - cos_z


def _cubic():
    sqrt3 = math.sqrt(3.0)
    return Problem(
        name="cubic",
        f=parse("z^3-8"),
        known_roots=(2 + 0j, complex(-1.0, sqrt3), complex(-1.0, -sqrt3)),
        suggested_start=(2j, -2 + 2j),
        derivative=_cubic_derivative,
        description="z^3 - 8, roots 2 exp(2 pi i r / 3)",
    )


def _trig():
    roots = tuple((1 - 1j) * (math.pi / 4 + r * math.pi) for r in (0, 1, -1, 2, -2))
    return Problem(
        name="trig",
        f=parse("sin(i*z)-cos(z)"),
        known_roots=roots,
        suggested_start=(1.5 - 1.3j, 0.6 - 0.5j),
        derivative=_trig_derivative,
        description="sin(iz) - cos z, roots (1 - i)(pi/4 + r pi)",
    )


def builtin_problems() -> list[Problem]:
    return [_cubic(), _trig()]


def lookup(name: str) -> Problem:
    for problem in builtin_problems():
        if problem.name == name:
            return problem
    names = ", ".join(p.name for p in builtin_problems())
    raise KeyError(f"unknown problem {name!r} (known: {names})")


def from_expression(src: str, name: str | None = None) -> Problem:
    return Problem(name=name or src, f=parse(src))
