import math

import mpmath
import pytest

from gensecant.errors import NonPositiveError, ZeroErrorFactor, ZeroFirstDerivative
from gensecant.order import (
    asymptotic_error_constant, characteristic, estimate_order, order_of_method, sigma_ratios,
)
from gensecant.problems import lookup
from oracles import high_precision_trajectory, mp_cubic, mp_trig

PHI = (1 + math.sqrt(5)) / 2


def mp_order(k):
    with mpmath.workdps(40):
        coeffs = [1] + [-1] * (k + 1)
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        return max(float(mpmath.re(r)) for r in roots if abs(mpmath.im(r)) < 1e-30 and mpmath.re(r) > 0)


def test_golden_ratio():
    assert abs(order_of_method(1).s_k - PHI) <= 1e-12


@pytest.mark.parametrize("k, expected", [(2, "1.839"), (7, "1.996")])
def test_listed_orders(k, expected):
    assert f"{order_of_method(k).s_k:.4g}" == expected


@pytest.mark.parametrize("k", range(1, 21))
def test_matches_high_precision_root(k):
    assert abs(order_of_method(k).s_k - mp_order(k)) <= 2 * math.ulp(2.0)


@pytest.mark.parametrize("k", range(1, 14))
def test_root_residual(k):
    assert order_of_method(k).residual <= 1e-12


def float_neighbours(x, width=2):
    return [x + i * math.ulp(x) for i in range(-width, width + 1)]


@pytest.mark.parametrize("k", range(1, 21))
def test_residual_is_best_among_nearby_floats(k):
    info = order_of_method(k)
    best = min(abs(characteristic(x, k)) for x in float_neighbours(mp_order(k)))
    assert info.residual <= best


@pytest.mark.parametrize("k", [14, 15, 18, 19, 20])
def test_residual_bound_unreachable_for_large_k(k):
    # the characteristic polynomial has terms of size ~2^(k+1) near its root,
    # so no binary64 number gets the residual below 1e-12 here
    assert min(abs(characteristic(x, k)) for x in float_neighbours(mp_order(k))) > 1e-12


def test_bounds_and_monotonicity():
    infos = [order_of_method(k) for k in range(1, 21)]
    for info in infos:
        assert 1 < info.s_k < 2
        assert info.efficiency_index == info.s_k
    for info in infos[1:]:
        assert info.lower_bound < info.s_k < info.upper_bound
    for a, b in zip(infos, infos[1:]):
        assert a.s_k < b.s_k
    assert infos[-1].s_k > 1.999


def test_invalid_k():
    with pytest.raises(ValueError):
        order_of_method(0)


def test_error_constant_cubic():
    cubic = lookup("cubic")
    alpha = complex(-1, math.sqrt(3))
    L = asymptotic_error_constant(cubic.derivative(alpha, 1), cubic.derivative(alpha, 3), 2)
    assert abs(L - complex(1, -math.sqrt(3)) / 24) <= 1e-16


def test_error_constant_trig():
    trig = lookup("trig")
    alpha = (1 - 1j) * math.pi / 4
    L = asymptotic_error_constant(trig.derivative(alpha, 1), trig.derivative(alpha, 3), 2)
    assert abs(L - (-1j / 6)) <= 1e-15


def test_error_constant_vanishes_with_derivative():
    assert asymptotic_error_constant(3, 0, 2) == 0


def test_error_constant_requires_simple_root():
    with pytest.raises(ZeroFirstDerivative):
        asymptotic_error_constant(0, 1, 2)


TABLE1_ABS_EPS = [1.035, 1.035, 4.808e-1, 6.979e-2, 4.355e-3, 1.591e-5, 5.223e-10]


def test_order_estimates_from_reference_magnitudes():
    est = estimate_order(TABLE1_ABS_EPS)
    for n, expected in zip(range(2, 6), [2.516, 1.437, 2.023, 1.839]):
        assert est[n] == pytest.approx(expected, abs=0.005)
    assert est[0] is None and est[-1] is None
    # equal neighbouring errors make the estimate undefined
    assert est[1] is None


def test_geometric_sequence_has_order_one():
    est = estimate_order([3 * 0.5**n for n in range(10)])
    assert all(e == pytest.approx(1, abs=1e-12) for e in est[1:-1])


def test_golden_ratio_sequence():
    errs = [math.exp(-PHI**n) for n in range(12)]
    est = estimate_order(errs)
    for n in range(5, 11):
        assert abs(est[n] - PHI) <= 1e-6


def test_estimate_order_rejects_nonpositive():
    with pytest.raises(NonPositiveError):
        estimate_order([1, 0, 1])
    with pytest.raises(ValueError):
        estimate_order([1, 0.5])


def test_constant_sigma():
    assert sigma_ratios([1] * 6, 1)[1:-1] == [1] * 4


def test_sigma_alignment():
    errs = [2, 3, 5, 7]
    out = sigma_ratios(errs, 1)
    assert out == [None, 5 / (3 * 2), 7 / (5 * 3), None]


def test_sigma_zero_factor():
    with pytest.raises(ZeroErrorFactor):
        sigma_ratios([1, 0, 1, 1], 1)


def high_precision_sigmas(mp_f, z0, z1, alpha, steps):
    with mpmath.workdps(60):
        a = alpha()
        zs = high_precision_trajectory(mp_f, z0, z1, 2, steps)
        return [None if s is None else complex(s) for s in sigma_ratios([z - a for z in zs], 2)]


def cubic_root():
    return mpmath.mpc(-1, mpmath.sqrt(3))


def trig_root():
    return (1 - 1j) * mpmath.pi / 4


def close_to_digits(value, ref, digits):
    from gensecant.reference import agrees_to_digits
    return (agrees_to_digits(value.real, ref.real, digits)
            and agrees_to_digits(value.imag, ref.imag, digits))


def test_sigma_row6_of_cubic_in_extended_precision():
    sig = high_precision_sigmas(mp_cubic, 2j, -2 + 2j, cubic_root, 8)
    assert close_to_digits(sig[6], complex(3.793e-2, -7.268e-2), 2)


def test_sigma_row5_of_trig_in_extended_precision():
    sig = high_precision_sigmas(mp_trig, mpmath.mpc("1.2", "-1.3"), mpmath.mpc("0.6", "-0.5"),
                                trig_root, 7)
    assert close_to_digits(sig[5], complex(9.223e-3, -1.614e-1), 2)


def test_sigma_approaches_error_constant_in_extended_precision():
    sig = high_precision_sigmas(mp_cubic, 2j, -2 + 2j, cubic_root, 9)
    L = complex(1, -math.sqrt(3)) / 24
    assert abs(sig[7] - L) <= 0.02 * abs(L)
