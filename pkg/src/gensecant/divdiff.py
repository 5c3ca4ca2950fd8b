"""Newton divided differences over a newest-first window of points.

A table over points ``[z_n, z_{n-1}, ..., z_{n-m}]`` stores the diagonal
``coeffs[i] = f[z_n, ..., z_{n-i}]``, from which the Newton form of the
interpolating polynomial and its derivative at ``z_n`` follow directly.
Tables are immutable; :func:`push_newest` returns a fresh table rebuilt from
scratch so that it is bit-identical to :func:`build` on the same points.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DuplicateAbscissa, TableTooSmall

__all__ = [
    "DividedDifferenceTable", "build", "push_newest", "newton_eval",
    "derivative_at_newest", "divided_differences",
]


@dataclass(frozen=True)
class DividedDifferenceTable:
    points: tuple[complex, ...]
    values: tuple[complex, ...]
    coeffs: tuple[complex, ...]

    def __len__(self):
        return len(self.points)

    @property
    def degree(self) -> int:
        return len(self.points) - 1


def _check_distinct(points):
    seen = {}
    for j, p in enumerate(points):
        i = seen.get(p)
        if i is not None:
            raise DuplicateAbscissa(i, j, p)
        seen[p] = j


def divided_differences(points: Sequence[complex], values: Sequence[complex]) -> list[complex]:
    """Return ``[f[x0], f[x0,x1], ..., f[x0,...,xm]]`` for the given order.

    Standard in-place triangular recurrence; no distinctness check.
    """
    c = list(values)
    m = len(c) - 1
    for j in range(1, m + 1):
        for i in range(m, j - 1, -1):
            c[i] = (c[i] - c[i - 1]) / (points[i] - points[i - j])
    return c


def build(points: Sequence[complex], values: Sequence[complex]) -> DividedDifferenceTable:
    """Build a table from points listed newest first.

    >>> build([0, 1, 2], [0, 1, 4]).coeffs
    (0, 1.0, 1.0)
    """
    if len(points) != len(values):
        raise ValueError("points and values differ in length")
    if not points:
        raise ValueError("at least one point is required")
    _check_distinct(points)
    coeffs = divided_differences(points, values)
    return DividedDifferenceTable(tuple(points), tuple(values), tuple(coeffs))


def push_newest(table: DividedDifferenceTable, z: complex, fz: complex,
                window: int | None = None) -> DividedDifferenceTable:
    """Prepend ``(z, f(z))`` and keep at most ``window`` newest points.

    With ``window=None`` the table simply grows by one point.
    """
    points = (z,) + table.points
    values = (fz,) + table.values
    if window is not None:
        if window < 1:
            raise ValueError("window must be at least 1")
        points = points[:window]
        values = values[:window]
    return build(points, values)


def newton_eval(table: DividedDifferenceTable, z: complex) -> complex:
    """Evaluate the interpolating polynomial at ``z`` (nested Newton form)."""
    c = table.coeffs
    x = table.points
    p = c[-1]
    for i in range(len(c) - 2, -1, -1):
        p = c[i] + (z - x[i]) * p
    return p


def derivative_at_newest(table: DividedDifferenceTable) -> complex:
    """Derivative of the interpolant at the newest point ``z_n``.

    Sum of ``f[z_n..z_{n-i}] * prod_{j=1}^{i-1} (z_n - z_{n-j})`` for
    i = 1..m; the i = 1 term carries an empty product, so for two points the
    result is exactly the first divided difference.
    """
    if len(table) < 2:
        raise TableTooSmall("derivative needs at least two points")
    c = table.coeffs
    x = table.points
    x0 = x[0]
    result = c[1]
    prod = 1
    for i in range(2, len(c)):
        prod = prod * (x0 - x[i - 1])
        result = result + c[i] * prod
    return result
