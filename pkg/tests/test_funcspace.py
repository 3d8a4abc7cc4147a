import math
import random

import numpy as np
import pytest

from pertbvp.funcspace import (DomainMismatchError, SpectralFun,
                               SpectralError, UnresolvedError)


@pytest.fixture
def sine():
    return SpectralFun.from_function(lambda x: math.sin(math.pi * x), (0, 1))


def test_from_function_sine_degree_and_value(sine):
    assert sine.degree <= 32
    assert sine(0.5) == pytest.approx(1.0, abs=1e-13)


def test_from_function_cubic_is_exact():
    f = SpectralFun.from_function(lambda x: x * (1 - x**2), (0, 1))
    assert f.degree == 3
    for x in (0.0, 0.25, 0.9):
        assert f(x) == pytest.approx(x * (1 - x**2), abs=1e-14)


def test_from_function_step_unresolved():
    with pytest.raises(UnresolvedError):
        SpectralFun.from_function(lambda x: 0.0 if x < 0.5 else 1.0, (0, 1))


def test_tail_condition_at_construction(sine):
    # coefficients dropped by truncation were all below tolerance: refit on
    # a finer grid and compare the tail beyond the stored degree
    from pertbvp.funcspace import _coeffs_from_samples
    t = np.cos(np.pi * np.arange(65) / 64)
    c = np.abs(_coeffs_from_samples(np.sin(np.pi * 0.5 * (t + 1.0))))
    assert np.max(c[sine.degree + 1:]) <= 1e-12 * c.max()


def test_eval_reproduces_samples(sine):
    n = sine.degree
    t = np.cos(np.pi * np.arange(n + 1) / n)
    x = 0.5 * (t + 1.0)
    vals = np.sin(np.pi * x)
    scale = np.max(np.abs(vals))
    assert np.max(np.abs(sine(x) - vals)) <= 1e-12 * scale


def test_eval_examples(sine):
    assert sine(0.0) == pytest.approx(0.0, abs=1e-13)
    assert sine(1.0 / 6.0) == pytest.approx(0.5, abs=1e-12)
    sq = SpectralFun.from_function(lambda x: x * x, (0, 1))
    assert sq(0.3) == pytest.approx(0.09, abs=1e-14)


def test_eval_out_of_domain(sine):
    with pytest.raises(SpectralError):
        sine(1.5)


def test_derivative_sine(sine):
    d = sine.derivative()
    assert d(0.0) == pytest.approx(math.pi, abs=1e-11)


def test_derivative_cubic_endpoint():
    f = SpectralFun.from_function(lambda x: x * (1 - x**2), (0, 1))
    assert f.derivative()(1.0) == pytest.approx(-2.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_second_derivative_eigenrelation(n):
    w = n * math.pi
    f = SpectralFun.from_function(lambda x: math.sin(w * x), (0, 1))
    d2 = f.derivative().derivative()
    xs = np.linspace(0, 1, 97)
    assert np.max(np.abs(d2(xs) + w * w * f(xs))) <= 1e-9 * w * w


def test_multiply_sine_squared_integral(sine):
    prod = sine * sine
    assert prod.definite_integral() == pytest.approx(0.5, abs=1e-12)


def test_multiply_identity(sine):
    one = SpectralFun.constant(1.0, (0, 1))
    prod = sine * one
    assert len(prod.coeffs) == len(sine.coeffs)
    assert np.max(np.abs(prod.coeffs - sine.coeffs)) <= 1e-14


def test_multiply_linear():
    lin = SpectralFun.from_function(lambda x: x, (0, 1))
    sq = lin * lin
    xs = np.linspace(0, 1, 33)
    assert np.max(np.abs(sq(xs) - xs**2)) <= 1e-14


def test_multiply_commutative(sine):
    g = SpectralFun.from_function(lambda x: math.exp(x), (0, 1))
    left = sine * g
    right = g * sine
    scale = np.max(np.abs(left.coeffs))
    n = min(len(left.coeffs), len(right.coeffs))
    assert np.max(np.abs(left.coeffs[:n] - right.coeffs[:n])) <= 1e-14 * scale


def test_multiply_domain_mismatch(sine):
    other = SpectralFun.constant(1.0, (0, 2))
    with pytest.raises(DomainMismatchError):
        sine * other


def test_cumulative_integral_cosine():
    f = SpectralFun.from_function(lambda x: math.cos(math.pi * x), (0, 1))
    F = f.cumulative_integral()
    assert F(0.0) == pytest.approx(0.0, abs=1e-14)
    assert F(0.5) == pytest.approx(1.0 / math.pi, abs=1e-12)


def test_cumulative_integral_constant():
    F = SpectralFun.constant(1.0, (0.25, 2.0)).cumulative_integral()
    for x in (0.25, 0.7, 2.0):
        assert F(x) == pytest.approx(x - 0.25, abs=1e-14)


def test_cumulative_integral_sine_squared():
    f = SpectralFun.from_function(lambda x: 2 * math.sin(math.pi * x) ** 2, (0, 1))
    assert f.cumulative_integral()(1.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_definite_integral_sine_squared(n):
    f = SpectralFun.from_function(
        lambda x: 2 * math.sin(n * math.pi * x) ** 2, (0, 1))
    assert f.definite_integral() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_definite_integral_x_times_cosine_gap(n):
    # int_0^1 x (1 - cos(2 n pi x)) dx = 1/2 by termwise antiderivatives
    f = SpectralFun.from_function(
        lambda x: x * (1 - math.cos(2 * n * math.pi * x)), (0, 1))
    assert f.definite_integral() == pytest.approx(0.5, abs=1e-12)


def test_definite_integral_polynomial():
    # int_0^1 x^2 (1 - x^2)^2 dx = 1/3 - 2/5 + 1/7 = 8/105 termwise
    f = SpectralFun.from_function(lambda x: x**2 * (1 - x**2) ** 2, (0, 1))
    assert f.definite_integral() == pytest.approx(8.0 / 105.0, abs=1e-13)


# ----------------------------------------------------------------------
# invariants
# ----------------------------------------------------------------------

def test_derivative_inverts_cumulative_integral():
    rng = random.Random(5)
    f = SpectralFun.from_function(
        lambda x: math.exp(x) * math.sin(3 * x) + x**2, (0, 1.5))
    g = f.cumulative_integral().derivative()
    bound = 1e-10 * (1.0 + f.sup_norm())
    for _ in range(50):
        x = rng.uniform(0, 1.5)
        assert abs(g(x) - f(x)) <= bound


def test_definite_equals_cumulative_at_right_end():
    f = SpectralFun.from_function(lambda x: math.cos(2 * x) + x, (0, 2))
    total = f.definite_integral()
    assert total == pytest.approx(f.cumulative_integral()(2.0),
                                  rel=1e-13, abs=1e-13)


def test_serialization_roundtrip(sine):
    data = sine.to_dict()
    assert data["domain"] == [0.0, 1.0]
    back = SpectralFun.from_dict(data)
    assert np.array_equal(back.coeffs, sine.coeffs)
