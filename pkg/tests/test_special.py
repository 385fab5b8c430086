import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowlight.errors import DomainError
from slowlight.selfcheck import bessel_grid
from slowlight.special import (
    bessel_j_complex_order,
    bessel_recurrence_residual,
    log_half,
    reduced_series,
)


def mp_j(nu, x):
    # principal branch with arg(x) = pi on the negative axis
    xx = mpmath.mpc(x, 0) if x >= 0 else mpmath.mpc(-x, 0) * mpmath.expjpi(1)
    return complex(mpmath.besselj(mpmath.mpc(nu.real, nu.imag), xx))


@pytest.mark.parametrize("nu", [0.3 + 0.7j, -1.2 + 0.4j, 2.5 - 1.1j, -0.5j])
@pytest.mark.parametrize("x", [0.1, 1.5, 4.0, 9.0, -2.5, -7.0])
def test_matches_mpmath(nu, x):
    with mpmath.workdps(30):
        ref = mp_j(nu, x)
    got = bessel_j_complex_order(nu, x)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_negative_integer_order_through_rgamma():
    # J_{-n} = (-1)^n J_n
    x = 2.7
    assert bessel_j_complex_order(-2, x) == pytest.approx(bessel_j_complex_order(2, x), abs=1e-14)
    assert bessel_j_complex_order(-3, x) == pytest.approx(-bessel_j_complex_order(3, x), abs=1e-14)


def test_half_integer_closed_forms():
    x = np.linspace(0.2, 10, 50)
    c = np.sqrt(2 / (np.pi * x))
    assert np.max(np.abs(bessel_j_complex_order(0.5, x) - c * np.sin(x))) < 1e-12
    assert np.max(np.abs(bessel_j_complex_order(-0.5, x) - c * np.cos(x))) < 1e-12
    j32 = c * (np.sin(x) / x - np.cos(x))
    assert np.max(np.abs(bessel_j_complex_order(1.5, x) - j32)) < 1e-12


def test_recurrence_on_grid():
    res = max(float(bessel_recurrence_residual(g, x)) for g, x in bessel_grid())
    assert res <= 1e-10


def test_truncated_series_is_detected():
    res = max(float(bessel_recurrence_residual(g, x, terms=8)) for g, x in bessel_grid())
    assert res > 1e-6


@settings(max_examples=40, deadline=None)
@given(st.floats(-2, 2), st.floats(-1.5, 1.5), st.floats(-8, 8).filter(lambda v: abs(v) > 0.05))
def test_recurrence_property(re, im, x):
    assert bessel_recurrence_residual(complex(re, im), x) < 1e-10


def test_reduced_series_is_entire_at_zero():
    assert reduced_series(0.5 + 0.5j, 0.0) == pytest.approx(1 / complex(mpmath.gamma(1.5 + 0.5j)))


def test_log_half_branch():
    assert log_half(-2.0) == pytest.approx(1j * np.pi)
    assert log_half(2.0) == pytest.approx(0.0)


def test_domain_guard():
    with pytest.raises(DomainError):
        reduced_series(0.5, 60.0)
