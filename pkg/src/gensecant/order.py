"""Convergence-order theory and empirical order diagnostics.

The method with memory ``k`` converges with order ``s_k``, the only positive
root of ``s^(k+1) = 1 + s + ... + s^k``. ``s_1`` is the golden ratio and
``s_k`` increases to 2. Since each iteration costs one new evaluation of
``f``, ``s_k`` is also the efficiency index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import NonPositiveError, ZeroErrorFactor, ZeroFirstDerivative

__all__ = [
    "OrderInfo", "order_of_method", "characteristic", "asymptotic_error_constant",
    "estimate_order", "order_estimate_at", "sigma_ratios", "sigma_ratio_at",
]


@dataclass(frozen=True)
class OrderInfo:
    k: int
    s_k: float
    lower_bound: float
    upper_bound: float

    @property
    def efficiency_index(self) -> float:
        return self.s_k

    @property
    def residual(self) -> float:
        return abs(characteristic(self.s_k, self.k))


def characteristic(s: float, k: int) -> float:
    """``s^(k+1) - sum_{i=0}^k s^i``, evaluated by Horner's rule."""
    # s^(k+1) - s^k - ... - 1 has coefficients 1, -1, ..., -1
    acc = 1.0
    for _ in range(k + 1):
        acc = acc * s - 1.0
    return acc


def _characteristic_slope(s: float, k: int) -> float:
    acc, slope = 1.0, 0.0
    for _ in range(k + 1):
        slope = slope * s + acc
        acc = acc * s - 1.0
    return slope


def _sign_function(s: float, k: int) -> float:
    # (s - 1) * characteristic(s) = s^(k+1) (s - 2) + 1: same sign for s > 1,
    # and O(1) to evaluate
    return s ** (k + 1) * (s - 2.0) + 1.0


def order_of_method(k: int) -> OrderInfo:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    # characteristic(1) = -k < 0 and characteristic(2) = 1 > 0 bracket the root
    lo, hi = 1.0, 2.0
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if _sign_function(mid, k) < 0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    for _ in range(2):
        s -= characteristic(s, k) / _characteristic_slope(s, k)
    scale = 2.0 ** (-k - 1)
    return OrderInfo(k=k, s_k=s, lower_bound=2.0 - scale * math.e, upper_bound=2.0 - scale)


def asymptotic_error_constant(f_prime_at_root: complex, f_k1_at_root: complex, k: int) -> complex:
    """Limit of ``eps_{n+1} / (eps_n eps_{n-1} ... eps_{n-k})``.

    Equal to ``(-1)^(k+1) f^(k+1)(alpha) / ((k+1)! f'(alpha))``.
    """
    if f_prime_at_root == 0:
        raise ZeroFirstDerivative("f'(alpha) = 0: the root is not simple")
    sign = -1 if (k + 1) % 2 else 1
    return sign * f_k1_at_root / (math.factorial(k + 1) * f_prime_at_root)


def order_estimate_at(abs_errors: Sequence[float], n: int) -> Optional[float]:
    """``log|e_{n+1}/e_n| / log|e_n/e_{n-1}|``, or None where undefined."""
    if n < 1 or n + 1 >= len(abs_errors):
        return None
    prev, cur, nxt = abs_errors[n - 1], abs_errors[n], abs_errors[n + 1]
    if prev <= 0 or cur <= 0 or nxt <= 0 or prev == cur:
        return None
    return math.log(nxt / cur) / math.log(cur / prev)


def estimate_order(abs_errors: Sequence[float]) -> list[Optional[float]]:
    """Empirical order at every row; rows without a defined estimate hold None.

    The first and last rows are always None (a neighbour is missing).
    """
    if len(abs_errors) < 3:
        raise ValueError("need at least three errors")
    for i, e in enumerate(abs_errors):
        if not e > 0:
            raise NonPositiveError(f"error at index {i} is {e!r}; all must be positive")
    return [order_estimate_at(abs_errors, n) for n in range(len(abs_errors))]


def sigma_ratio_at(errors: Sequence[complex], n: int, k: int) -> complex:
    """``e_{n+1} / (e_n e_{n-1} ... e_{n-k})`` for row ``n`` (requires k <= n)."""
    denom = 1 + 0j
    for i in range(n, n - k - 1, -1):
        if errors[i] == 0:
            raise ZeroErrorFactor(f"error at index {i} is zero")
        denom *= errors[i]
    return errors[n + 1] / denom


def sigma_ratios(errors: Sequence[complex], k: int) -> list[Optional[complex]]:
    """Row-aligned sigma ratios; rows n < k and the last row hold None."""
    if len(errors) < k + 2:
        raise ValueError(f"need at least k+2 = {k + 2} errors")
    out: list[Optional[complex]] = [None] * len(errors)
    for n in range(k, len(errors) - 1):
        out[n] = sigma_ratio_at(errors, n, k)
    return out
