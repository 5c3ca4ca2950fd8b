import cmath
import logging
import math
import random

import pytest

from gensecant.errors import DuplicateAbscissa, SteffensenDenominatorZero
from gensecant.expr import parse
from gensecant.problems import lookup
from gensecant.solver import (
    SolverConfig, Status, Z1Policy, bootstrap, generate_z1, iterate, solve,
)
from oracles import newton_step, reference_secant

ALPHA1 = complex(-1, math.sqrt(3))


def test_cubic_converges_to_nonreal_root():
    root, trace = solve(lookup("cubic"), SolverConfig(k=2, z0=2j, z1=-2 + 2j))
    assert trace.status is Status.CONVERGED
    assert abs(root - ALPHA1) <= 1e-13


def test_bootstrap_point_of_the_cubic_run():
    zs = bootstrap(lookup("cubic"), 2j, -2 + 2j, 2)
    assert len(zs) == 3
    assert zs[2] == pytest.approx(complex(-10, 28) / 13, abs=1e-15)


def test_bootstrap_grows_the_degree():
    trace = iterate(lookup("cubic"), SolverConfig(k=4, z0=2j, z1=-2 + 2j))
    assert trace.k_used_per_step[:4] == [1, 2, 3, 4]
    assert set(trace.k_used_per_step[3:]) == {4}


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_linear_function_converges_immediately(k):
    trace = iterate(parse("z"), SolverConfig(k=k, z0=0.5, z1=Z1Policy.BRIN))
    assert trace.status is Status.CONVERGED
    assert abs(trace.root) <= 1e-13
    assert len(trace.iterates) - 1 <= 3


def test_deeper_window_needs_fewer_steps_on_trig():
    trig = lookup("trig")
    t2 = iterate(trig, SolverConfig(k=2, z0=1.5 - 1.3j, z1=0.6 - 0.5j))
    t3 = iterate(trig, SolverConfig(k=3, z0=1.5 - 1.3j, z1=0.6 - 0.5j))
    assert t2.status is t3.status is Status.CONVERGED
    assert abs(t2.root - t3.root) <= 1e-13
    assert abs(t2.root - (1 - 1j) * math.pi / 4) <= 1e-13
    # both stop after six steps in binary64; the deeper window lands closer
    assert len(t3) <= len(t2)
    assert abs(t3.residuals[-1]) < abs(t2.residuals[-1])
    assert abs(t3.residuals[-2]) < abs(t2.residuals[-2])


def test_one_new_evaluation_per_step():
    trace = iterate(lookup("trig"), SolverConfig(k=3, z0=1.5 - 1.3j, z1=0.6 - 0.5j))
    assert trace.f_evals == len(trace.iterates)


def test_steffensen_start_costs_one_extra_evaluation():
    trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=1 + 1j, z1=Z1Policy.STEFFENSEN))
    assert trace.f_evals == len(trace.iterates) + 1


def test_z1_policies():
    f = parse("z^2 - 2")
    assert generate_z1(f, 1.0, Z1Policy.BRIN) == 1 + (1 - 2)
    # Steffensen: 1 - (-1)^2 / (f(0) - f(1)) = 1 - 1/(-2 + 1) = 2
    assert generate_z1(f, 1.0, Z1Policy.STEFFENSEN) == 2
    assert generate_z1(f, 1.0, 3j) == 3j


def test_steffensen_zero_denominator():
    # f(1) = -2 and f(1 + f(1)) = f(-1) = -2
    with pytest.raises(SteffensenDenominatorZero):
        generate_z1(parse("z^2 - 3"), 1.0, Z1Policy.STEFFENSEN)


def test_steffensen_zero_denominator_is_a_status():
    trace = iterate(parse("z^2 - 3"), SolverConfig(k=2, z0=1.0, z1=Z1Policy.STEFFENSEN))
    assert trace.status is Status.SINGULAR_DERIVATIVE


def test_k1_matches_reference_secant_bit_for_bit():
    rng = random.Random(2024)
    for _ in range(50):
        a, b, c = (complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(3))
        f = lambda z, a=a, b=b, c=c: (a * z + b) * z + c
        z0 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        z1 = z0 + complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        trace = iterate(f, SolverConfig(k=1, z0=z0, z1=z1, max_iter=40))
        expected = reference_secant(f, z0, z1, len(trace.iterates) - 2)
        assert trace.iterates == expected


def test_polynomial_of_degree_k_reduces_to_newton():
    cubic = lookup("cubic")
    fprime = lambda z: 3 * z * z
    trace = iterate(cubic, SolverConfig(k=3, z0=2j, z1=-2 + 2j))
    zs = trace.iterates
    for n in range(3, len(zs) - 1):
        expected = newton_step(cubic, fprime, zs[n])
        assert abs(zs[n + 1] - expected) <= 1e-12 * abs(expected)


def test_quadratic_error_ratio_for_cubic():
    cubic = lookup("cubic")
    trace = iterate(cubic, SolverConfig(k=3, z0=2j, z1=-2 + 2j))
    eps = [z - ALPHA1 for z in trace.iterates]
    limit = cubic.derivative(ALPHA1, 2) / (2 * cubic.derivative(ALPHA1, 1))
    ratios = [eps[n + 1] / eps[n] ** 2 for n in range(3, len(eps) - 1)
              if abs(eps[n + 1]) > 1e-14]
    assert abs(ratios[-1] - limit) <= 0.1 * abs(limit)


def test_real_starts_stay_real(caplog):
    with caplog.at_level(logging.WARNING, logger="gensecant.solver"):
        trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=0.5, z1=-1.0, max_iter=30))
    assert all(z.imag == 0 for z in trace.iterates)
    assert "real axis" in caplog.text


def test_real_starts_find_only_the_real_root():
    trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=1.0, z1=1.5))
    assert trace.status is Status.CONVERGED
    assert trace.root == pytest.approx(2)


def test_errors_decrease_once_close():
    trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=2j, z1=-2 + 2j))
    errs = [abs(z - ALPHA1) for z in trace.iterates]
    for a, b in zip(errs[1:], errs[2:]):
        if a > 1e-14:
            assert b < a


def test_max_iterations():
    trace = iterate(parse("z^2 + 1"), SolverConfig(k=2, z0=0.5, z1=0.7, max_iter=20))
    assert trace.status is Status.MAX_ITERATIONS
    assert len(trace.iterates) == 21
    assert trace.root is None


def test_nonfinite_value_status():
    trace = iterate(parse("1/z - 1"), SolverConfig(k=1, z0=0, z1=1j))
    assert trace.status is Status.NON_FINITE_VALUE


def test_singular_derivative_status():
    # f(z0) == f(z1) gives a zero secant slope
    trace = iterate(parse("z^2 - 4"), SolverConfig(k=1, z0=1, z1=-1))
    assert trace.status is Status.SINGULAR_DERIVATIVE


def test_equal_starts_stagnate():
    trace = iterate(parse("z^2 - 4"), SolverConfig(k=2, z0=1j, z1=1j))
    assert trace.status is Status.STAGNATED


def test_bootstrap_rejects_equal_starts():
    with pytest.raises(DuplicateAbscissa):
        bootstrap(parse("z^2 - 4"), 1j, 1j, 2)


def test_step_tolerance_stops():
    trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=2j, z1=-2 + 2j,
                                                  tol_residual=1e-300, tol_step=1e-6))
    assert trace.status is Status.CONVERGED
    assert "step" in trace.message
    zs = trace.iterates
    assert abs(zs[-1] - zs[-2]) <= 1e-6 * max(1, abs(zs[-1]))


def test_residual_at_start():
    trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=2, z1=3))
    assert trace.status is Status.CONVERGED
    assert trace.iterates == [2]


@pytest.mark.parametrize("bad", [
    dict(k=0), dict(k=2, tol_residual=0), dict(k=2, tol_step=-1), dict(k=5, max_iter=3),
])
def test_config_validation(bad):
    args = dict(z0=1j) | bad
    with pytest.raises(ValueError):
        SolverConfig(**args)


def test_independent_solves_run_concurrently():
    from concurrent.futures import ThreadPoolExecutor
    trig = lookup("trig")
    configs = [SolverConfig(k=k, z0=1.5 - 1.3j, z1=0.6 - 0.5j) for k in (1, 2, 3, 4) * 4]
    with ThreadPoolExecutor(8) as pool:
        parallel = list(pool.map(lambda c: iterate(trig, c).iterates, configs))
    assert parallel == [iterate(trig, c).iterates for c in configs]


def test_matches_high_precision_trajectory():
    mpmath = pytest.importorskip("mpmath")
    from oracles import high_precision_trajectory, mp_cubic
    trace = iterate(lookup("cubic"), SolverConfig(k=2, z0=2j, z1=-2 + 2j))
    with mpmath.workdps(60):
        ref = high_precision_trajectory(mp_cubic, 2j, -2 + 2j, 2, 6)
        for z, r in zip(trace.iterates[:7], ref):
            assert abs(z - complex(r)) <= 1e-13
