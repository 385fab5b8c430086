"""Bessel functions of complex order by power series.

The series is written in the reduced form

    J_nu(x) = (x/2)**nu * S_nu(x),
    S_nu(x) = sum_m (-x**2/4)**m / (m! Gamma(nu + m + 1)),

where ``S_nu`` is entire in both arguments.  Reciprocal Gamma removes the
poles at negative integer ``nu + m + 1``.  The power ``(x/2)**nu`` uses the
principal branch with ``arg(x) = pi`` on the negative real axis.
"""

from __future__ import annotations

import numpy as np
from scipy.special import rgamma

from .errors import DomainError

MAX_ABS_X = 50.0
DEFAULT_TERMS = 120


def _coefficients(nu, terms):
    m = np.arange(terms, dtype=float)
    return rgamma(m + 1.0) * rgamma(nu + m + 1.0)


def reduced_series(nu, x, terms: int = DEFAULT_TERMS):
    """Entire part ``S_nu(x)`` of the Bessel series (scalar ``nu``)."""
    x = np.asarray(x, dtype=complex)
    if np.any(np.abs(x) > MAX_ABS_X):
        raise DomainError(f"|x| exceeds series range {MAX_ABS_X}")
    coef = _coefficients(complex(nu), terms)
    u = -(x * x) / 4
    acc = np.zeros_like(u)
    for c in coef[::-1]:
        acc = acc * u + c
    if not np.all(np.isfinite(acc)):
        raise DomainError("Bessel series overflowed")
    return acc[()]


def log_half(x):
    """Principal ``log(x/2)`` with ``arg = pi`` on the negative real axis."""
    x = np.asarray(x, dtype=complex)
    ang = np.where((x.imag == 0) & (x.real < 0), np.pi, np.angle(x))
    return (np.log(np.abs(x) / 2) + 1j * ang)[()]


def bessel_j_complex_order(nu, x, terms: int = DEFAULT_TERMS):
    """J_nu(x) for complex order and argument, ``|x| <= 50``."""
    x = np.asarray(x, dtype=complex)
    s = reduced_series(nu, x, terms)
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.exp(complex(nu) * log_half(x))
    # (x/2)**nu at x = 0: 1 for nu = 0, 0 for Re nu > 0
    pw = np.where(x == 0, 1.0 if nu == 0 else (0.0 if np.real(nu) > 0 else np.nan), pw)
    return (pw * s)[()]


def bessel_recurrence_residual(nu, x, terms: int = DEFAULT_TERMS):
    """Relative residual of J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu."""
    jm = bessel_j_complex_order(nu - 1, x, terms)
    jp = bessel_j_complex_order(nu + 1, x, terms)
    j0 = bessel_j_complex_order(nu, x, terms)
    rhs = 2 * nu / np.asarray(x, complex) * j0
    scale = np.maximum.reduce([np.abs(jm), np.abs(jp), np.abs(rhs)])
    return (np.abs(jm + jp - rhs) / scale)[()]
