import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overlaycap.numerics import (
    BracketError,
    DomainError,
    bisect_root,
    gamma_function,
    q_function,
    q_inverse,
)

# mpmath quadrature of the Gaussian tail / Euler integral, 40 digits
Q_OF_ONE = 0.15865525393145705141
Q_INV_QUARTER = 0.67448975019608174320
Q_INV_0158655 = 1.0000010494310450072
GAMMA_ONE_THIRD = 2.6789385347077476337


def test_q_at_zero():
    assert q_function(0.0) == 0.5


@pytest.mark.parametrize("x", [0.3, 1.7])
def test_q_reflection_examples(x):
    assert q_function(x) == pytest.approx(1.0 - q_function(-x), abs=1e-15)


def test_q_against_quadrature():
    assert abs(q_function(1.0) - Q_OF_ONE) <= 1e-14


def test_q_accepts_arrays():
    out = q_function(np.array([0.0, 1.0]))
    assert out.shape == (2,)
    assert out[0] == 0.5


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_q_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        q_function(bad)


def test_q_strictly_decreasing():
    xs = np.linspace(-6, 6, 1001)
    assert np.all(np.diff(q_function(xs)) < 0)


def test_q_reflection_grid():
    xs = np.linspace(-8, 8, 1000)
    assert np.max(np.abs(q_function(xs) + q_function(-xs) - 1.0)) <= 1e-14


def test_q_inverse_examples():
    assert q_inverse(0.5) == 0.0
    assert q_inverse(0.158655) == pytest.approx(Q_INV_0158655, abs=1e-12)
    assert q_inverse(0.25) == pytest.approx(Q_INV_QUARTER, abs=1e-13)


@pytest.mark.parametrize("x", [-2.0, 0.01, 3.0])
def test_q_inverse_round_trip_examples(x):
    assert abs(q_inverse(q_function(x)) - x) <= 1e-10


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_q_inverse_domain(p):
    with pytest.raises(DomainError):
        q_inverse(p)


@given(st.floats(min_value=-4, max_value=4))
def test_q_inverse_round_trip(x):
    assert abs(q_inverse(q_function(x)) - x) <= 1e-10


@given(st.floats(min_value=1e-300, max_value=1 - 1e-16, exclude_max=True))
@settings(max_examples=300)
def test_q_of_q_inverse_relative(p):
    assert abs(q_function(q_inverse(p)) - p) <= 1e-12 * p


def test_bisect_examples():
    assert bisect_root(lambda x: x - 3, 0, 10, tol=1e-12) == pytest.approx(3, abs=1e-11)
    assert bisect_root(lambda x: x * x - 2, 0, 2, tol=1e-13) == pytest.approx(math.sqrt(2), abs=1e-12)
    root = bisect_root(lambda x: q_function(x) - 0.25, 0, 5, tol=1e-13)
    assert root == pytest.approx(Q_INV_QUARTER, abs=1e-12)


def test_bisect_no_sign_change():
    with pytest.raises(BracketError):
        bisect_root(lambda x: x * x + 1, -1, 1)


def test_bisect_deterministic():
    f = lambda x: math.cos(x) - x  # noqa: E731
    assert bisect_root(f, 0, 1) == bisect_root(f, 0, 1)


def test_gamma_examples():
    assert gamma_function(1.0) == 1.0
    assert gamma_function(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_function(1 - 2 / 3) == pytest.approx(GAMMA_ONE_THIRD, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf])
def test_gamma_domain(x):
    with pytest.raises(DomainError):
        gamma_function(x)


@given(st.floats(min_value=1e-6, max_value=5.0))
def test_gamma_recurrence(x):
    assert abs(gamma_function(x + 1) - x * gamma_function(x)) <= 1e-12 * gamma_function(x + 1)
