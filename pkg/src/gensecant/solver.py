"""Generalized secant iteration for simple complex roots.

For ``n >= k`` the next iterate is ``z_n - f(z_n) / p'(z_n)``, where ``p``
interpolates ``f`` at the ``k+1`` newest iterates. The first ``k-1`` extra
starting points are produced by the same step with the interpolation degree
growing from 1 (a plain secant step) up to ``k``. Each step after the first
two points costs exactly one new evaluation of ``f``.

:func:`iterate` and :func:`solve` never raise for numerical breakdowns; they
report them through :attr:`SolverTrace.status`. :func:`bootstrap` and
:func:`generate_z1` are the low-level pieces and do raise.
"""
from __future__ import annotations

import cmath
import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Union

from . import divdiff
from .errors import (
    DuplicateAbscissa,
    GenSecantError,
    NonFiniteValue,
    SingularDerivative,
    SteffensenDenominatorZero,
)

__all__ = [
    "Status", "Z1Policy", "SolverConfig", "SolverTrace",
    "generate_z1", "bootstrap", "iterate", "solve",
]

log = logging.getLogger(__name__)

DEFAULT_GUARD = 1e-290


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    SINGULAR_DERIVATIVE = "SingularDerivative"
    NON_FINITE_VALUE = "NonFiniteValue"
    STAGNATED = "Stagnated"

    def __str__(self):
        return self.value


class Z1Policy(str, enum.Enum):
    """How to derive ``z1`` from ``z0`` when it is not given explicitly."""

    BRIN = "brin"
    STEFFENSEN = "steffensen"

    def __str__(self):
        return self.value


Z1Spec = Union[complex, Z1Policy]


@dataclass(frozen=True)
class SolverConfig:
    k: int
    z0: complex
    z1: Z1Spec = Z1Policy.BRIN
    tol_residual: float = 1e-13
    tol_step: float = 1e-13
    max_iter: int = 100
    guard_min_denominator: float = DEFAULT_GUARD

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if not (self.tol_residual > 0 and self.tol_step > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < self.k + 1:
            raise ValueError(f"max_iter must be at least k+1 = {self.k + 1}")
        if not self.guard_min_denominator >= 0:
            raise ValueError("guard_min_denominator must be non-negative")


@dataclass
class SolverTrace:
    iterates: list[complex] = field(default_factory=list)
    residuals: list[complex] = field(default_factory=list)
    status: Status | None = None
    # interpolation degree used to produce iterates[2:], in order
    k_used_per_step: list[int] = field(default_factory=list)
    f_evals: int = 0
    message: str = ""

    @property
    def root(self):
        return self.iterates[-1] if self.status is Status.CONVERGED else None

    def __len__(self):
        return len(self.iterates)


def _finite(v) -> bool:
    try:
        return cmath.isfinite(v)
    except TypeError:
        return False


def _evaluate(f, z, trace=None):
    fz = f(z)
    if trace is not None:
        trace.f_evals += 1
    if not _finite(fz):
        reason = getattr(fz, "reason", None)
        raise NonFiniteValue(f"f({z!r}) is not finite" + (f": {reason}" if reason else ""))
    return complex(fz)


def _step(points, values, guard):
    """One generalized secant step over a newest-first window."""
    table = divdiff.build(points, values)
    slope = divdiff.derivative_at_newest(table)
    if not _finite(slope):
        raise NonFiniteValue(f"interpolant derivative is not finite at {points[0]!r}")
    if abs(slope) < guard:
        raise SingularDerivative(f"|p'(z_n)| = {abs(slope):.3e} is below the guard {guard:.1e}")
    z_next = points[0] - values[0] / slope
    if not _finite(z_next):
        raise NonFiniteValue("next iterate is not finite")
    return z_next


def generate_z1(f: Callable[[complex], complex], z0: complex, policy: Z1Spec,
                f0: complex | None = None) -> complex:
    """Second starting point: given explicitly, ``z0 + f(z0)``, or a Steffensen step.

    ``f0`` may pass in an already computed ``f(z0)``.
    """
    if not isinstance(policy, Z1Policy):
        return complex(policy)
    z0 = complex(z0)
    if f0 is None:
        f0 = _evaluate(f, z0)
    if policy is Z1Policy.BRIN:
        return z0 + f0
    shifted = _evaluate(f, z0 + f0)
    denom = shifted - f0
    if denom == 0:
        raise SteffensenDenominatorZero(f"f(z0 + f(z0)) == f(z0) at z0={z0!r}")
    z1 = z0 - f0 * f0 / denom
    if not _finite(z1):
        raise NonFiniteValue("Steffensen step is not finite")
    return z1


def bootstrap(f: Callable[[complex], complex], z0: complex, z1: complex, k: int,
              guard: float = DEFAULT_GUARD) -> list[complex]:
    """Return ``[z_0, ..., z_k]``, growing the interpolation degree step by step."""
    if k < 1:
        raise ValueError("k must be >= 1")
    zs = [complex(z0), complex(z1)]
    if zs[0] == zs[1]:
        raise DuplicateAbscissa(0, 1, zs[0])
    fs = [_evaluate(f, zs[0]), _evaluate(f, zs[1])]
    for j in range(1, k):
        z_next = _step(zs[::-1], fs[::-1], guard)
        if z_next in zs:
            raise DuplicateAbscissa(zs.index(z_next), j + 1, z_next)
        zs.append(z_next)
        fs.append(_evaluate(f, z_next))
    return zs


def _warn_if_confined_to_real_axis(z0, z1, f0, f1):
    if z0.imag == 0 and z1.imag == 0 and f0.imag == 0 and f1.imag == 0:
        log.warning(
            "both starting points and their function values are real: "
            "the iterates will stay on the real axis and cannot reach a nonreal root")


def iterate(f: Callable[[complex], complex], config: SolverConfig) -> SolverTrace:
    """Run the iteration to completion and return the full trace."""
    trace = SolverTrace()
    k = config.k
    guard = config.guard_min_denominator

    def stop(status, message=""):
        trace.status = status
        trace.message = message
        return trace

    def residual_ok(fz):
        return abs(fz) <= config.tol_residual

    z0 = complex(config.z0)
    try:
        f0 = _evaluate(f, z0, trace)
    except NonFiniteValue as exc:
        return stop(Status.NON_FINITE_VALUE, str(exc))
    trace.iterates.append(z0)
    trace.residuals.append(f0)
    if residual_ok(f0):
        return stop(Status.CONVERGED, "initial point satisfies the residual tolerance")

    try:
        if isinstance(config.z1, Z1Policy):
            z1 = generate_z1(f, z0, config.z1, f0)
            if config.z1 is Z1Policy.STEFFENSEN:
                trace.f_evals += 1  # f(z0 + f(z0))
        else:
            z1 = complex(config.z1)
        if not _finite(z1):
            raise NonFiniteValue("z1 is not finite")
        f1 = _evaluate(f, z1, trace)
    except SteffensenDenominatorZero as exc:
        return stop(Status.SINGULAR_DERIVATIVE, str(exc))
    except NonFiniteValue as exc:
        return stop(Status.NON_FINITE_VALUE, str(exc))
    trace.iterates.append(z1)
    trace.residuals.append(f1)
    if residual_ok(f1):
        return stop(Status.CONVERGED, "z1 satisfies the residual tolerance")
    if z1 == z0:
        return stop(Status.STAGNATED, "z1 coincides with z0")
    _warn_if_confined_to_real_axis(z0, z1, f0, f1)

    zs, fs = trace.iterates, trace.residuals
    while len(zs) - 1 < config.max_iter:
        n = len(zs) - 1
        degree = min(n, k)
        window = zs[-1:-degree - 2:-1]
        try:
            z_next = _step(window, fs[-1:-degree - 2:-1], guard)
            f_next = _evaluate(f, z_next, trace)
        except SingularDerivative as exc:
            return stop(Status.SINGULAR_DERIVATIVE, str(exc))
        except NonFiniteValue as exc:
            return stop(Status.NON_FINITE_VALUE, str(exc))
        except GenSecantError as exc:  # pragma: no cover - duplicates are caught below
            return stop(Status.STAGNATED, str(exc))
        zs.append(z_next)
        fs.append(f_next)
        trace.k_used_per_step.append(degree)
        if residual_ok(f_next):
            return stop(Status.CONVERGED, "residual tolerance met")
        if abs(z_next - zs[-2]) <= config.tol_step * max(1.0, abs(z_next)):
            return stop(Status.CONVERGED, "step tolerance met")
        if z_next in zs[-min(n + 1, k) - 1:-1]:
            return stop(Status.STAGNATED, f"iterate {z_next!r} repeats a point in the window")
    return stop(Status.MAX_ITERATIONS, f"no convergence after {config.max_iter} iterations")


def solve(f: Callable[[complex], complex], config: SolverConfig):
    """Return ``(root, trace)``; ``root`` is None unless the run converged."""
    trace = iterate(f, config)
    return trace.root, trace
