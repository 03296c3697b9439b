"""Golden-section minimizer."""
import math

import numpy as np
import pytest

from chaninfo._kernels import golden_iterations
from chaninfo.errors import EvaluationError, InvalidParameterError
from chaninfo.scalar_opt import minimize_scalar


def test_random_quadratics_hit_center():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        c = rng.uniform(0.01, 0.99)
        k = rng.uniform(-5.0, 5.0)
        res = minimize_scalar(lambda x: (x - c) ** 2 + k, 0.0, 1.0, tol=1e-8)
        assert abs(res.argmin - c) <= 1e-6
        assert abs(res.value - k) <= 1e-12


def test_boundary_minima_returned_exactly():
    inc = minimize_scalar(lambda x: 2.0 + x, 0.0, 1.0)
    assert inc.argmin == 0.0 and inc.value == 2.0
    dec = minimize_scalar(lambda x: 2.0 - x, 0.0, 1.0)
    assert dec.argmin == 1.0 and dec.value == 1.0


def test_constant_prefers_left_endpoint():
    res = minimize_scalar(lambda x: 3.0, 0.0, 1.0)
    assert res.argmin == 0.0 and res.value == 3.0


def test_nonsmooth_unimodal():
    res = minimize_scalar(lambda x: abs(x - 0.37), -1.0, 2.0, tol=1e-10)
    assert abs(res.argmin - 0.37) <= 1e-8


def test_evaluation_count_matches_schedule():
    # fa, fb, fc, fd, fm plus one evaluation per shrink iteration; the
    # unit bracket needs golden_iterations(tol) shrinks.
    res = minimize_scalar(lambda x: (x - 0.5) ** 2, 0.0, 1.0, tol=1e-10)
    assert res.evaluations == golden_iterations(1e-10) + 5
    assert res.evaluations <= 60


def test_golden_iterations_bracket_arithmetic():
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    k = golden_iterations(1e-10)
    assert k == 48
    assert invphi**k <= 1e-10 < invphi ** (k - 1)


def test_invalid_interval_and_tol():
    with pytest.raises(InvalidParameterError):
        minimize_scalar(lambda x: x, 1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        minimize_scalar(lambda x: x, 0.0, 1.0, tol=0.0)


def test_nonfinite_objective_carries_abscissa():
    def f(x):
        return math.nan if x > 0.9 else x

    with pytest.raises(EvaluationError) as exc:
        minimize_scalar(f, 0.0, 1.0)
    assert exc.value.abscissa > 0.9
