"""Auxiliary scattering functions w(tau, lambda) and z(tau, lambda).

``w`` solves the Riccati equation

    dw/dtau = -i lam w + i Omega / 2 - i conj(Omega) w**2 / 2

and ``z`` is its companion, ``dz/dtau = i conj(Omega) w / 2``.  Several
evaluation routes are provided: closed forms for the constant background and
the exponential switch (complex-order Bessel functions), adaptive ODE
integration, a fixed-point iteration of the equivalent integral equation, and
the lowest-order adiabatic approximation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.signal import lfilter
from scipy.special import rgamma

from .background import BackgroundProfile, Constant, ExponentialSwitch, StepOff
from .errors import (
    BlowUpError,
    ConfigError,
    DomainError,
    IterationDivergedError,
    ValidationError,
)
from .special import log_half, reduced_series

log = logging.getLogger(__name__)

ODE_TOL = 1e-10
BLOWUP_LIMIT = 1e8


# ---------------------------------------------------------------- constants

def sqrt_branch(lam, omega0):
    """sqrt(lam**2 + |omega0|**2) on the branch that tends to ``lam`` as omega0 -> 0."""
    lam = complex(lam)
    a2 = abs(complex(omega0)) ** 2
    if lam == 0:
        if a2 == 0:
            raise DomainError("lambda = 0 with zero background is degenerate")
        return complex(math.sqrt(a2))
    return lam * np.sqrt(1 + a2 / lam**2 + 0j)


def k_of_lambda(lam, omega0):
    """k(lam) = (lam + sqrt(lam**2 + |omega0|**2)) / 2."""
    return (complex(lam) + sqrt_branch(lam, omega0)) / 2


def constant_background(lam, omega0, k_phase=0.0, zeta=0.0):
    """Fixed point ``w0`` and linear rate ``z_rate`` for a constant field.

    Returns ``(w0, z_rate)`` with ``z(tau) = z_rate * tau``.
    """
    lam = complex(lam)
    s = sqrt_branch(lam, omega0)
    if omega0 == 0:
        return 0j, 0j
    w0 = omega0 * np.exp(1j * k_phase * zeta) / (lam + s)
    z_rate = 1j * abs(omega0) ** 2 / (2 * (lam + s))
    return complex(w0), complex(z_rate)


# ---------------------------------------------------------------- solution type

@dataclass
class Region:
    """One time interval with its own representation of (w, z)."""

    lo: float
    hi: float
    tag: str
    w: Callable
    z: Callable


@dataclass
class ScatteringSolution:
    """Evaluators for w and z over a sequence of contiguous regions.

    Regions are checked in order; a point belongs to the first region whose
    closed interval contains it, so a jump time takes its left-hand value.
    """

    lam: complex
    method: str
    omega_minus: complex
    regions: list
    profile: BackgroundProfile | None = None
    info: dict = field(default_factory=dict)

    @property
    def k(self) -> complex:
        return k_of_lambda(self.lam, self.omega_minus)

    @property
    def w0(self) -> complex:
        return complex(self.omega_minus / (2 * self.k)) if self.omega_minus != 0 else 0j

    @property
    def z0(self) -> complex:
        return 1j * np.conj(self.omega_minus) * self.w0 / 2

    @property
    def domain(self) -> tuple:
        return self.regions[0].lo, self.regions[-1].hi

    @property
    def boundaries(self) -> tuple:
        return tuple(r.hi for r in self.regions[:-1])

    def _dispatch(self, tau, which):
        t = np.asarray(tau, dtype=float)
        flat = np.atleast_1d(t).ravel()
        out = np.full(flat.shape, np.nan + 0j)
        todo = np.ones(flat.shape, bool)
        for reg in self.regions:
            m = todo & (flat >= reg.lo) & (flat <= reg.hi)
            if np.any(m):
                out[m] = getattr(reg, which)(flat[m])
                todo &= ~m
        if np.any(todo):
            raise DomainError(
                f"tau={flat[todo][0]} outside scattering domain {self.domain}"
            )
        return out.reshape(t.shape)[()]

    def w(self, tau):
        return self._dispatch(tau, "w")

    def z(self, tau):
        return self._dispatch(tau, "z")

    def evaluate(self, tau):
        return self.w(tau), self.z(tau)

    def region_tag(self, tau) -> str:
        for reg in self.regions:
            if reg.lo <= tau <= reg.hi:
                return reg.tag
        raise DomainError(f"tau={tau} outside scattering domain")

    def z_infinity(self) -> complex:
        """Limit of z as tau -> +inf when the field vanishes there."""
        if "z_inf" in self.info:
            return self.info["z_inf"]
        raise DomainError("z(+inf) not available for this solution")


def _const_w(value):
    return lambda t: np.full(np.shape(t), complex(value))


def _linear_z(rate, offset=0j, t0=0.0):
    return lambda t: offset + rate * (np.asarray(t) - t0)


def constant_solution(lam, omega0, profile=None) -> ScatteringSolution:
    w0, z0 = constant_background(lam, omega0)
    reg = Region(-math.inf, math.inf, "D0", _const_w(w0), _linear_z(z0))
    return ScatteringSolution(
        complex(lam), "closed-form", complex(omega0), [reg],
        profile=profile or Constant(omega0),
    )


# ---------------------------------------------------------------- exponential

@dataclass(frozen=True)
class BesselParams:
    """Order, initial argument and matching constant of the exponential region."""

    gamma: complex
    alpha: float
    omega0: float
    C: complex

    @property
    def x0(self) -> float:
        return -self.omega0 / (2 * self.alpha)

    def x(self, tau):
        return self.x0 * np.exp(-self.alpha * np.asarray(tau, float))

    @property
    def lam(self) -> complex:
        return 1j * self.alpha * (1 - 2 * self.gamma)


def bessel_params(lam, omega0, alpha, terms=None) -> BesselParams:
    if not alpha > 0:
        raise ValidationError("alpha must be positive")
    if not omega0 > 0:
        raise ValidationError("exponential switch needs omega0 > 0")
    lam = complex(lam)
    gamma = (alpha + 1j * lam) / (2 * alpha)
    w0, _ = constant_background(lam, omega0)
    x0 = -omega0 / (2 * alpha)
    kw = {} if terms is None else {"terms": terms}
    l0 = log_half(x0)
    # C = (J_{g-1} - i w0 J_g) / (J_{1-g} + i w0 J_{-g}) at x0, written with the
    # reduced series and multiplied through by (x0/2)**g
    num = np.exp(2 * gamma * l0 - l0) * reduced_series(gamma - 1, x0, **kw) - 1j * w0 * np.exp(
        2 * gamma * l0
    ) * reduced_series(gamma, x0, **kw)
    den = np.exp(l0) * reduced_series(1 - gamma, x0, **kw) + 1j * w0 * reduced_series(-gamma, x0, **kw)
    return BesselParams(complex(gamma), float(alpha), float(omega0), complex(num / den))


class _ExponentialRegion:
    """Closed-form w, z on the exponential segment, z(0) = 0.

    ``z = log G(tau) - log G(0)`` with
    ``G = C S_{-g}(x) + (x/2)**(2g) S_g(x)``; the phase of G is unwrapped on
    a reference grid so z is continuous in tau.
    """

    def __init__(self, lam, omega0, alpha, t_end=math.inf, terms=None):
        self.bp = bessel_params(lam, omega0, alpha, terms)
        self.kw = {} if terms is None else {"terms": terms}
        self.lam = complex(lam)
        self.alpha = float(alpha)
        self.l0 = complex(log_half(self.bp.x0))
        self.G0 = self._G(np.array([0.0]))[0]
        # beyond t_sat the series is at its x -> 0 limit to double precision
        t_sat = math.log(abs(self.bp.x0) / 1e-9) / alpha if abs(self.bp.x0) > 1e-9 else 0.0
        self.t_ref_end = max(min(t_end, 4 * t_sat + 1.0), 1e-9)
        self.t_ref = np.linspace(0.0, self.t_ref_end, 4001)
        g = self._G(self.t_ref)
        self.phase_ref = np.unwrap(np.angle(g / self.G0))

    def _logx2(self, t):
        return self.l0 - self.alpha * np.asarray(t, float)

    def _G(self, t):
        gam, C = self.bp.gamma, self.bp.C
        x = self.bp.x(t)
        L = self._logx2(t)
        return C * reduced_series(-gam, x, **self.kw) + np.exp(2 * gam * L) * reduced_series(gam, x, **self.kw)

    def w(self, t):
        t = np.asarray(t, float)
        gam, C = self.bp.gamma, self.bp.C
        x = self.bp.x(t)
        L = self._logx2(t)
        num = C * np.exp(L) * reduced_series(1 - gam, x, **self.kw) - np.exp(
            (2 * gam - 1) * L
        ) * reduced_series(gam - 1, x, **self.kw)
        return 1j * num / self._G(t)

    def _branch(self, t, logratio):
        ref = np.interp(np.minimum(t, self.t_ref_end), self.t_ref, self.phase_ref)
        turns = np.round((ref - logratio.imag) / (2 * np.pi))
        return logratio + 2j * np.pi * turns

    def z(self, t):
        t = np.asarray(t, float)
        lr = np.log(self._G(t) / self.G0)
        return self._branch(t, lr)

    def z_limit(self):
        """z as tau -> inf, from the x -> 0 limit of G."""
        g_inf = self.bp.C * rgamma(1 - self.bp.gamma)
        if g_inf == 0:
            raise DomainError("exponential region has no finite z(+inf)")
        lr = np.log(g_inf / self.G0)
        return complex(self._branch(np.array([self.t_ref_end]), np.array([lr]))[0])


def exponential_background(lam, omega0, alpha, tau):
    """Closed-form (w, z) on the exponential segment, tau >= 0, z(0) = 0."""
    t = np.asarray(tau, float)
    if np.any(t < 0):
        raise ValidationError("exponential_background needs tau >= 0")
    reg = _ExponentialRegion(lam, omega0, alpha, t_end=float(np.max(t)) if t.size else 1.0)
    return reg.w(t)[()], reg.z(t)[()]


def _tangent_region(lam, omega0, T, z_start):
    """Field restored to omega0 at tau = T with w(T) = 0 and z(T) = z_start."""
    lam = complex(lam)
    s = sqrt_branch(lam, omega0)
    C3 = (s - lam) / (s + lam)
    log_norm = np.log1p(C3)

    def w(t):
        x = np.asarray(t, float) - T
        em = np.exp(-1j * s * x)  # 1/E, decays for Im s < 0
        return omega0 * (1 - em) / (lam * (1 - em) + s * (1 + em))

    def z(t):
        x = np.asarray(t, float) - T
        b = -1j * (lam - s) * x / 2
        return b + np.log1p(C3 * np.exp(-1j * s * x)) - log_norm + z_start

    return w, z, complex(C3)


def tangent_solution(lam, omega0, T=0.0, z_start=0j, t_end=math.inf) -> ScatteringSolution:
    """Restored-field region alone: constant Omega0 for tau >= T, w(T) = 0.

    For Im(lambda) > 0 this form has a pole at finite tau - T; evaluate only
    on windows before it.
    """
    lam = complex(lam)
    w, z, C3 = _tangent_region(lam, omega0, T, z_start)
    reg = Region(T, t_end, "D3", w, z)
    return ScatteringSolution(lam, "closed-form", complex(omega0), [reg],
                              profile=Constant(omega0), info={"C3": C3})


def tangent_constant(lam, omega0) -> complex:
    """Matching constant of the restored-field region."""
    lam = complex(lam)
    s = sqrt_branch(lam, omega0)
    return (omega0**2 + 2 * lam * (lam - s)) / omega0**2


def piecewise_scenario(lam, omega0, alpha, T1, T, terms=None) -> ScatteringSolution:
    """Closed-form solution for :class:`ExponentialSwitch` (all four regions).

    Regions: D0 (tau < 0) constant, D1 [0, T1] Bessel, D2 (T1, T] w = 0 with
    z frozen at its tau -> inf limit, D3 (tau > T) restored field.  With
    ``T1 = T = inf`` only D0 and D1 are present.
    """
    lam = complex(lam)
    prof = ExponentialSwitch(omega0, alpha, T1, T)  # validates ordering
    w0, z0 = constant_background(lam, omega0)
    expo = _ExponentialRegion(lam, omega0, alpha, t_end=T1, terms=terms)
    regions = [
        Region(-math.inf, 0.0, "D0", _const_w(w0), _linear_z(z0)),
        Region(0.0, T1, "D1", expo.w, expo.z),
    ]
    info = {"bessel": expo.bp}
    if np.real(expo.bp.gamma) > 0:
        info["z_inf"] = expo.z_limit()
    if math.isfinite(T1):
        if not lam.imag < 0:
            raise ConfigError(
                "cutoff/restart regions need Im(lambda) < 0; for Im(lambda) > 0 the "
                "restored-field solution has a pole", field="lambda0"
            )
        z2 = expo.z_limit()
        info["z2"] = z2
        regions.append(Region(T1, T, "D2", _const_w(0), _linear_z(0, z2)))
        if math.isfinite(T):
            w3, z3, C3 = _tangent_region(lam, omega0, T, z2)
            info["C3"] = C3
            regions.append(Region(T, math.inf, "D3", w3, z3))
            info.pop("z_inf", None)
        else:
            info["z_inf"] = z2
    return ScatteringSolution(lam, "closed-form", complex(omega0), regions, profile=prof, info=info)


def step_off_solution(lam, omega0) -> ScatteringSolution:
    """Field switched off instantly at tau = 0: w decays freely afterwards."""
    lam = complex(lam)
    w0, z0 = constant_background(lam, omega0)
    regions = [
        Region(-math.inf, 0.0, "D0", _const_w(w0), _linear_z(z0)),
        Region(0.0, math.inf, "D1", lambda t: w0 * np.exp(-1j * lam * np.asarray(t)), _const_w(0)),
    ]
    info = {"z_inf": 0j}
    return ScatteringSolution(lam, "closed-form", complex(omega0), regions, profile=StepOff(omega0), info=info)


def closed_form(profile: BackgroundProfile, lam) -> ScatteringSolution:
    """Closed-form solution for the profiles that have one."""
    if isinstance(profile, Constant):
        return constant_solution(lam, profile.omega0, profile)
    if isinstance(profile, ExponentialSwitch):
        return piecewise_scenario(lam, profile.omega0, profile.alpha, profile.T1, profile.T)
    if isinstance(profile, StepOff):
        return step_off_solution(lam, profile.omega0)
    raise ConfigError(f"no closed form for profile kind '{profile.kind}'")


# ---------------------------------------------------------------- ODE

def _segment_edges(profile, t0, t1):
    bps = [b for b in profile.breakpoints if t0 < b < t1]
    return [t0] + sorted(set(bps)) + [t1]


def solve_riccati_ode(profile: BackgroundProfile, lam, tau_grid, initial=None,
                      rtol=ODE_TOL, atol=ODE_TOL) -> ScatteringSolution:
    """Adaptive Runge-Kutta integration of the Riccati and z equations.

    The unknowns are the deviations ``u = w - w0`` and ``v = z - z0 tau`` from
    the left-asymptote fixed point, which keeps an exact constant background
    exactly stationary.  Integration restarts at every profile breakpoint.
    ``initial`` is ``(w, z)`` at ``tau_grid[0]``; by default the fixed point
    ``(w0, z0 * tau_grid[0])``.
    """
    lam = complex(lam)
    tg = np.asarray(tau_grid, float)
    if tg.ndim != 1 or tg.size < 2 or np.any(np.diff(tg) <= 0):
        raise ValidationError("tau_grid must be strictly increasing with >= 2 points")
    om_m = profile.omega_minus
    if om_m != 0:
        k = k_of_lambda(lam, om_m)
        w0 = om_m / (2 * k)
    else:
        w0 = 0j
    z0 = 1j * np.conj(om_m) * w0 / 2
    t_start, t_end = float(tg[0]), float(tg[-1])
    if initial is None:
        u, v = 0j, 0j
    else:
        u = complex(initial[0]) - w0
        v = complex(initial[1]) - z0 * t_start

    def make_rhs(a, b):
        eps = 1e-12 * max(1.0, abs(a), abs(b))

        def rhs(t, y):
            tc = min(max(t, a + eps), b - eps)
            om = complex(profile.evaluate(tc))
            omc = om.conjugate()
            uu = y[0]
            du = (
                0.5j * (om - om_m)
                - 0.5j * (omc - np.conj(om_m)) * w0 * w0
                - 1j * lam * uu
                - 1j * omc * w0 * uu
                - 0.5j * omc * uu * uu
            )
            dv = 0.5j * (omc - np.conj(om_m)) * w0 + 0.5j * omc * uu
            return np.array([du, dv])

        return rhs

    def blow(t, y):
        return BLOWUP_LIMIT - abs(y[0] + w0)

    blow.terminal = True

    regions = []
    left_const = profile.left_edge() >= t_start
    if left_const and initial is None:
        regions.append(Region(-math.inf, t_start, "D0", _const_w(w0), _linear_z(z0)))
    edges = _segment_edges(profile, t_start, t_end)
    y = np.array([u, v], complex)
    nfev = 0
    for a, b in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(make_rhs(a, b), (a, b), y, method="DOP853", rtol=rtol, atol=atol,
                        dense_output=True, events=blow)
        nfev += sol.nfev
        if sol.status == 1 or (sol.status == 0 and abs(sol.y[0, -1] + w0) > BLOWUP_LIMIT):
            raise BlowUpError(f"w exceeds {BLOWUP_LIMIT:g} near tau={sol.t[-1]:.6g}", tau=float(sol.t[-1]))
        if sol.status < 0:
            raise BlowUpError(f"integration failed near tau={sol.t[-1]:.6g}: {sol.message}",
                              tau=float(sol.t[-1]))
        dense = sol.sol

        def wf(t, d=dense):
            return w0 + d(np.asarray(t, float))[0]

        def zf(t, d=dense):
            t = np.asarray(t, float)
            return z0 * t + d(t)[1]

        regions.append(Region(a, b, "ode", wf, zf))
        y = sol.y[:, -1]
    info = {"nfev": nfev}
    if profile.omega_plus == 0:
        info["z_end"] = complex(z0 * t_end + y[1])
    return ScatteringSolution(lam, "ode", complex(om_m), regions, profile=profile, info=info)


# ---------------------------------------------------------------- integral equation

def _product_trapezoid_weights(mu, h):
    """Weights (a, b) with  int_0^h e^{-mu (h-u)} f(u) du ~ a f(0) + b f(h)
    for f linear on the step."""
    e = np.exp(-mu * h)
    muh = mu * h
    if abs(muh) < 1e-4:
        # series to avoid cancellation
        e1 = h * (1 - muh / 2 + muh**2 / 6 - muh**3 / 24)
        b = h * (0.5 - muh / 6 + muh**2 / 24 - muh**3 / 120)
    else:
        e1 = (1 - e) / mu
        b = e1 - (1 - e * (1 + muh)) / (mu * mu * h)
    return e1 - b, b, e


def causal_convolution(f, tau, k, initial):
    """``i * int_{-inf}^{tau} exp(-i k (tau - s)) f(s) ds`` on a grid.

    The part of the integral before ``tau[0]`` is supplied as ``initial``.
    ``f`` is taken piecewise linear between grid points and the exponential
    is integrated exactly.
    """
    tau = np.asarray(tau, float)
    f = np.asarray(f, complex)
    h = np.diff(tau)
    mu = 1j * k
    if np.allclose(h, h[0], rtol=1e-12, atol=0):
        a, b, e = _product_trapezoid_weights(mu, h[0])
        forcing = 1j * (a * f[:-1] + b * f[1:])
        out = np.empty_like(f)
        out[0] = initial
        out[1:], _ = lfilter([1.0], [1.0, -e], forcing, zi=[e * initial])
        return out
    out = np.empty_like(f)
    out[0] = initial
    for j, hj in enumerate(h):
        a, b, e = _product_trapezoid_weights(mu, hj)
        out[j + 1] = e * out[j] + 1j * (a * f[j] + b * f[j + 1])
    return out


def solve_integral_iteration(profile: BackgroundProfile, lam, tau_grid, max_iter=200,
                             tol=1e-10) -> ScatteringSolution:
    """Fixed-point iteration of the nonlinear integral equation for w~.

    Starts from ``w~_0 = Omega / 2``; each sweep forms ``w = i K[w~]`` with the
    causal kernel ``exp(-i k (tau - s))`` and updates
    ``w~ = Omega/2 + |Omega0|^2 w / (4k) - conj(Omega) w^2 / 2``.  The kernel
    decays only for ``Im k < 0``.  The field is assumed to sit at its left
    asymptote before ``tau_grid[0]``.
    """
    lam = complex(lam)
    tg = np.asarray(tau_grid, float)
    if tg.ndim != 1 or tg.size < 3 or np.any(np.diff(tg) <= 0):
        raise ValidationError("tau_grid must be strictly increasing with >= 3 points")
    om_m = profile.omega_minus
    k = k_of_lambda(lam, om_m)
    if not k.imag < 0:
        raise ValidationError("integral iteration needs Im k(lambda) < 0 (Im lambda < 0)")
    w0 = om_m / (2 * k) if om_m != 0 else 0j
    z0 = 1j * np.conj(om_m) * w0 / 2
    om = np.asarray(profile.evaluate(tg), complex)
    omc = om.conj()
    a2 = abs(om_m) ** 2
    wt = om / 2
    history = []
    iterates = [wt.copy()]
    for it in range(1, max_iter + 1):
        w = causal_convolution(wt, tg, k, w0)
        new = om / 2 + a2 * w / (4 * k) - omc * w * w / 2
        diff = float(np.max(np.abs(new - wt)))
        history.append(diff)
        wt = new
        if not np.isfinite(diff) or diff > 1e12:
            raise IterationDivergedError(f"iteration diverged at sweep {it}", history)
        if diff < tol:
            break
    else:
        raise IterationDivergedError(
            f"no convergence to {tol:g} in {max_iter} sweeps (last change {history[-1]:.3e})",
            history,
        )
    w = causal_convolution(wt, tg, k, w0)
    integrand = 0.5j * omc * w - z0
    cum = np.concatenate([[0j], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(tg))])
    z = z0 * tg + cum
    regions = []
    if profile.left_edge() >= tg[0]:
        regions.append(Region(-math.inf, float(tg[0]), "D0", _const_w(w0), _linear_z(z0)))
    ws_re, ws_im = CubicSpline(tg, w.real), CubicSpline(tg, w.imag)
    zs_re, zs_im = CubicSpline(tg, z.real), CubicSpline(tg, z.imag)
    regions.append(Region(
        float(tg[0]), float(tg[-1]), "iterative",
        lambda t: ws_re(t) + 1j * ws_im(t),
        lambda t: zs_re(t) + 1j * zs_im(t),
    ))
    info = {"history": history, "iterations": len(history), "first_iterate": iterates[0],
            "w_tilde": wt, "tau": tg, "w_samples": w, "z_samples": z}
    return ScatteringSolution(lam, "iterative", complex(om_m), regions, profile=profile, info=info)


# ---------------------------------------------------------------- adiabatic

def adiabatic_approx(profile: BackgroundProfile, lam, tau):
    """Lowest-order adiabatic (w, z): w = Omega / (2k) and
    z = z0 tau + int^tau (i |Omega|^2 / (4k) - z0)."""
    lam = complex(lam)
    om_m = profile.omega_minus
    k = k_of_lambda(lam, om_m)
    z0 = 1j * abs(om_m) ** 2 / (4 * k)
    t = np.asarray(tau, float)
    w = np.asarray(profile.evaluate(t), complex) / (2 * k)
    t_left = profile.left_edge()
    if profile.is_constant:
        return w[()], (z0 * t)[()]
    if not math.isfinite(t_left):
        t_left = float(np.min(t)) if t.size else 0.0
    pts = [b for b in profile.breakpoints]

    def integ(b):
        if b <= t_left:
            return 0.0
        inner = [p for p in pts if t_left < p < b]
        val, _ = quad(lambda s: abs(complex(profile.evaluate(s))) ** 2, t_left, b,
                      points=inner or None, limit=200, epsabs=1e-12, epsrel=1e-12)
        return val

    flat = np.atleast_1d(t).ravel()
    ints = np.array([integ(b) for b in flat]).reshape(t.shape)
    z = np.where(t <= t_left, z0 * t, z0 * t_left + 1j * ints / (4 * k))
    return w[()], z[()]


def adiabatic_solution(profile: BackgroundProfile, lam, tau_grid) -> ScatteringSolution:
    """:func:`adiabatic_approx` tabulated on ``tau_grid`` and splined, so it
    can feed the dressing like any other scattering solution."""
    lam = complex(lam)
    tg = np.asarray(tau_grid, float)
    if tg.ndim != 1 or tg.size < 4 or np.any(np.diff(tg) <= 0):
        raise ValidationError("tau_grid must be strictly increasing with >= 4 points")
    w, z = adiabatic_approx(profile, lam, tg)
    sw, sz = CubicSpline(tg, w), CubicSpline(tg, z)
    k = k_of_lambda(lam, profile.omega_minus)
    z0 = 1j * abs(profile.omega_minus) ** 2 / (4 * k)
    regions = []
    if profile.left_edge() >= tg[0]:
        regions.append(Region(-math.inf, tg[0], "D0", _const_w(profile.omega_minus / (2 * k)),
                              _linear_z(z0)))
    regions.append(Region(tg[0], tg[-1], "adiabatic", sw, sz))
    return ScatteringSolution(lam, "adiabatic", complex(profile.omega_minus), regions,
                              profile=profile)


# ---------------------------------------------------------------- residuals

def _stencil_mask(tau, breakpoints, half_width):
    ok = np.ones(tau.shape, bool)
    ok[:half_width] = False
    ok[-half_width:] = False
    for b in breakpoints:
        lo = np.searchsorted(tau, b, side="left")
        ok[max(lo - half_width - 1, 0): lo + half_width + 1] = False
    return ok


def _fd4(f, h):
    d = np.full(f.shape, np.nan + 0j)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    return d


def riccati_residual(sol: ScatteringSolution, tau, profile=None):
    """Relative finite-difference residuals of the Riccati and z equations.

    Uses a fourth-order central stencil on a uniform grid; stencils touching
    a breakpoint are skipped.  Returns ``(res_w, res_z)`` as sup-norms; the
    w residual is divided by the sup of the summed magnitudes of the
    right-hand-side terms, the z residual by the sup of its right-hand side.
    """
    profile = profile or sol.profile
    t = np.asarray(tau, float)
    h = t[1] - t[0]
    if not np.allclose(np.diff(t), h, rtol=1e-9):
        raise ValidationError("riccati_residual needs a uniform grid")
    w = sol.w(t)
    z = sol.z(t)
    zr = z.real + 1j * np.unwrap(z.imag)
    om = np.asarray(profile.evaluate(t), complex)
    rw = -1j * sol.lam * w + 0.5j * om - 0.5j * om.conj() * w * w
    rz = 0.5j * om.conj() * w
    bps = list(profile.breakpoints) + list(sol.boundaries)
    bps = [b for b in bps if math.isfinite(b)]
    ok = _stencil_mask(t, bps, 2)
    dw = _fd4(w, h)
    dz = _fd4(zr, h)
    # scale by the size of the individual terms: at a fixed point rw cancels to zero
    terms_w = np.abs(sol.lam * w) + 0.5 * np.abs(om) + 0.5 * np.abs(om) * np.abs(w) ** 2
    sw = max(np.max(terms_w[ok]), 1e-300) if ok.any() else 1.0
    sz = max(np.max(np.abs(rz[ok])), 1e-300) if ok.any() else 1.0
    res_w = float(np.max(np.abs(dw[ok] - rw[ok])) / sw) if ok.any() else 0.0
    res_z = float(np.max(np.abs(dz[ok] - rz[ok])) / sz) if ok.any() else 0.0
    return res_w, res_z
