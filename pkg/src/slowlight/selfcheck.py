"""Fast release gate: closed-form cross-checks, normalization, Bessel series."""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .background import Constant, ExponentialSwitch
from .darboux import dressed_general, fast_soliton, generic_values, slow_soliton, zero_background_memory
from .model import PhysicalParams, SpectralConfig
from .observables import memory_bit_width, step_distance
from .scattering import (
    constant_solution,
    piecewise_scenario,
    riccati_residual,
    solve_riccati_ode,
    tangent_solution,
)
from .special import DEFAULT_TERMS, bessel_j_complex_order, bessel_recurrence_residual

BESSEL_TOL = 1e-10
HALF_INTEGER_TOL = 1e-12
RICCATI_TOL = 1e-6
ODE_MATCH_TOL = 1e-8
NORM_TOL = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: {self.value:.3e} (limit {self.limit:.1e})"


@dataclass
class SelfCheckReport:
    results: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "seconds": self.seconds,
            "checks": [{"name": r.name, "passed": r.passed, "value": r.value, "limit": r.limit}
                       for r in self.results],
        }


def bessel_grid(n=10):
    """100 (order, argument) pairs; arguments include the negative axis."""
    gam = np.linspace(-2.3, 2.7, n) + 1j * np.linspace(-1.5, 1.5, n)[::-1]
    xs = np.concatenate([np.linspace(-10, -0.5, n // 2), np.linspace(0.5, 10, n - n // 2)])
    return [(g, x) for g in gam for x in xs]


def check_bessel_recurrence(terms=DEFAULT_TERMS) -> float:
    return max(float(bessel_recurrence_residual(g, x, terms)) for g, x in bessel_grid())


def check_half_integer(terms=DEFAULT_TERMS) -> float:
    x = np.linspace(0.3, 10, 60)
    c = np.sqrt(2 / (np.pi * x))
    e1 = np.abs(bessel_j_complex_order(0.5, x, terms) - c * np.sin(x))
    e2 = np.abs(bessel_j_complex_order(-0.5, x, terms) - c * np.cos(x))
    return float(max(e1.max(), e2.max()))


def check_riccati_closed_forms(omega0=3.0, alpha=4.0, n=1000) -> float:
    worst = 0.0
    for lam in (4.1j, -4.1j):
        sol = constant_solution(lam, omega0)
        worst = max(worst, *riccati_residual(sol, np.linspace(-2, 2, n), Constant(omega0)))
        sol = piecewise_scenario(lam, omega0, alpha, math.inf, math.inf)
        worst = max(worst, *riccati_residual(sol, np.linspace(0.01, 3, n)))
        # before the pole of the Im(lambda) > 0 branch
        sol = tangent_solution(lam, omega0, 4.0)
        worst = max(worst, *riccati_residual(sol, np.linspace(4.0, 4.4, n), Constant(omega0)))
    return worst


def relative_sup(ref, other) -> float:
    return float(np.max(np.abs(ref - other)) / max(np.max(np.abs(ref)), 1.0))


def check_ode_vs_closed(omega0=3.0, alpha=4.0) -> float:
    worst = 0.0
    tau = np.linspace(-1, 3, 401)
    for lam in (4.1j, -4.1j):
        prof = ExponentialSwitch(omega0, alpha, math.inf, math.inf)
        cf = piecewise_scenario(lam, omega0, alpha, math.inf, math.inf)
        od = solve_riccati_ode(prof, lam, tau)
        # relative to sup|w|: for Im(lambda) > 0, w grows like exp(eps0 tau)
        worst = max(worst, relative_sup(cf.w(tau), od.w(tau)), relative_sup(cf.z(tau), od.z(tau)))
    return worst


def check_normalization() -> float:
    p = PhysicalParams()
    tau = np.linspace(-4, 4, 41)[:, None]
    zeta = np.linspace(-8, 8, 41)[None, :]
    sols = [
        slow_soliton(p, SpectralConfig(4.1j)),
        fast_soliton(p, SpectralConfig(4.1j, c2=0, c3=1)),
        dressed_general(p, SpectralConfig(-4.1j, c2=1, c3=1)),
        zero_background_memory(PhysicalParams(omega0=0.0, delta=1.0), SpectralConfig(-4.1j, c2=1, c3=1)),
    ]
    worst = 0.0
    for s in sols:
        psi = s.evaluate(tau, zeta).psi
        worst = max(worst, float(np.max(np.abs(np.sum(np.abs(psi) ** 2, axis=-1) - 1))))
    return worst


def check_dressing_forms() -> float:
    p = PhysicalParams()
    sp = SpectralConfig(4.1j, 0.3, 1, 0)
    g = dressed_general(p, sp)
    s = slow_soliton(p, sp)
    tau = np.linspace(-3, 3, 13)
    zeta = np.linspace(-3, 3, 13)
    a = g.evaluate(tau, zeta)
    b = s.evaluate(tau, zeta)
    worst = float(max(np.max(np.abs(a.omega_a - b.omega_a)), np.max(np.abs(a.omega_b - b.omega_b)),
                      np.max(np.abs(a.psi - b.psi))))
    fm = g.info["fundamental"]
    for i, (t, z) in enumerate(zip(tau, zeta)):
        oa, ob, psi = generic_values(fm, sp, p, float(t), float(z))
        worst = max(worst, abs(a.omega_a[i] - oa), abs(a.omega_b[i] - ob), float(np.max(np.abs(a.psi[i] - psi))))
    return worst


def check_reference_values() -> float:
    p = PhysicalParams()
    sp = SpectralConfig(-4.1j)
    return max(abs(memory_bit_width(p, sp) - 4.7996) / 4.7996,
               abs(step_distance(p, sp) - 0.157978) / 0.157978)


def run_selfcheck(bessel_terms: int = DEFAULT_TERMS, stream=None) -> SelfCheckReport:
    """Run every check, print one PASS/FAIL line each; ``bessel_terms`` is the
    test hook used to demonstrate that a truncated series is caught."""
    stream = stream or sys.stdout
    t0 = time.perf_counter()
    plan = [
        ("bessel recurrence (100 points)", lambda: check_bessel_recurrence(bessel_terms), BESSEL_TOL),
        ("bessel half-integer closed forms", lambda: check_half_integer(bessel_terms), HALF_INTEGER_TOL),
        ("riccati residual of closed forms", check_riccati_closed_forms, RICCATI_TOL),
        ("ODE vs closed form", check_ode_vs_closed, ODE_MATCH_TOL),
        ("state normalization", check_normalization, NORM_TOL),
        ("generic vs explicit dressing", check_dressing_forms, 1e-10),
        ("width and step distance reference values", check_reference_values, 1e-4),
    ]
    rep = SelfCheckReport()
    for name, fn, limit in plan:
        try:
            v = float(fn())
            ok = bool(np.isfinite(v) and v <= limit)
        except Exception as exc:  # a crashing check is a failing check
            print(f"FAIL {name}: {type(exc).__name__}: {exc}", file=stream)
            rep.results.append(CheckResult(name, False, float("nan"), limit))
            continue
        r = CheckResult(name, ok, v, limit)
        print(r.line(), file=stream)
        rep.results.append(r)
    rep.seconds = time.perf_counter() - t0
    return rep
