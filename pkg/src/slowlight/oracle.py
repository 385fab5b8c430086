"""Independent finite-difference checks of the Maxwell-Bloch system.

Nothing here uses the scattering functions; candidates are treated as black
boxes that return fields and density matrices on a grid.  The equations are

    d Omega_a / d zeta = i nu0 rho_31,      d Omega_b / d zeta = i nu0 rho_32,
    d rho / d tau = i [Delta D / 2 - H_I, rho],

with ``H_I[2, 0] = -Omega_a / 2`` and ``H_I[2, 1] = -Omega_b / 2`` (Hermitian),
equivalently ``d H_I / d zeta = (i nu0 / 4) [D, rho]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InstabilityError, PoleError, ResolutionError, ValidationError
from .model import D

log = logging.getLogger(__name__)


def interaction_hamiltonian(omega_a, omega_b):
    oa = np.asarray(omega_a, complex)
    ob = np.asarray(omega_b, complex)
    oa, ob = np.broadcast_arrays(oa, ob)
    h = np.zeros(oa.shape + (3, 3), complex)
    h[..., 2, 0] = -oa / 2
    h[..., 2, 1] = -ob / 2
    h[..., 0, 2] = -np.conj(oa) / 2
    h[..., 1, 2] = -np.conj(ob) / 2
    return h


def _comm(a, b):
    return a @ b - b @ a


def _dagger(a):
    return np.swapaxes(a, -1, -2).conj()


# ---------------------------------------------------------------- grid/report

@dataclass(frozen=True)
class OracleGrid:
    tau_min: float
    tau_max: float
    h_tau: float
    zeta_min: float
    zeta_max: float
    h_zeta: float
    level: int = 0

    def __post_init__(self):
        if not (self.h_tau > 0 and self.h_zeta > 0):
            raise ValidationError("grid steps must be positive")
        if not (self.tau_max > self.tau_min and self.zeta_max > self.zeta_min):
            raise ValidationError("grid ranges must be non-empty")

    @property
    def tau(self):
        n = int(round((self.tau_max - self.tau_min) / self.h_tau))
        return self.tau_min + self.h_tau * np.arange(n + 1)

    @property
    def zeta(self):
        n = int(round((self.zeta_max - self.zeta_min) / self.h_zeta))
        return self.zeta_min + self.h_zeta * np.arange(n + 1)

    def refined(self) -> "OracleGrid":
        return OracleGrid(self.tau_min, self.tau_max, self.h_tau / 2,
                          self.zeta_min, self.zeta_max, self.h_zeta / 2, self.level + 1)


@dataclass
class ResidualReport:
    """Residual norms per equation and per refinement level."""

    steps: list = field(default_factory=list)
    sup: dict = field(default_factory=dict)  # name -> list over levels
    l2: dict = field(default_factory=dict)

    def add_level(self, h, sups: dict, l2s: dict):
        self.steps.append(h)
        for k, v in sups.items():
            self.sup.setdefault(k, []).append(float(v))
        for k, v in l2s.items():
            self.l2.setdefault(k, []).append(float(v))

    def total(self, level=-1) -> float:
        return max(v[level] for v in self.sup.values())

    def orders(self) -> dict:
        """Observed orders log2(r_h / r_{h/2}); empty with fewer than 3 levels."""
        if len(self.steps) < 3:
            return {}
        out = {}
        for k, v in self.sup.items():
            out[k] = [math.log(v[i] / v[i + 1]) / math.log(self.steps[i] / self.steps[i + 1])
                      if v[i] > 0 and v[i + 1] > 0 else float("nan")
                      for i in range(len(v) - 1)]
        tot = [max(v[i] for v in self.sup.values()) for i in range(len(self.steps))]
        out["total"] = [math.log(tot[i] / tot[i + 1]) / math.log(self.steps[i] / self.steps[i + 1])
                        if tot[i] > 0 and tot[i + 1] > 0 else float("nan")
                        for i in range(len(tot) - 1)]
        return out

    def as_dict(self) -> dict:
        return {"steps": self.steps, "sup": self.sup, "l2": self.l2, "orders": self.orders()}


# ---------------------------------------------------------------- candidate wrappers

class Candidate:
    """Anything with ``fields(tau, zeta)`` and ``density_matrix(tau, zeta)``."""

    def __init__(self, fields, density, nu0, delta, scale_tau=None, scale_zeta=None):
        self._fields = fields
        self._density = density
        self.nu0 = nu0
        self.delta = delta
        self.scale_tau = scale_tau
        self.scale_zeta = scale_zeta

    @classmethod
    def from_dressed(cls, sol):
        lam = sol.spectral.lambda0
        d = sol.params.delta
        return cls(sol.fields, sol.density_matrix, sol.params.nu0, d,
                   scale_tau=1 / max(abs(lam), 1e-12),
                   scale_zeta=2 * abs(lam - d) ** 2 / (sol.params.nu0 * abs(lam.imag)))

    def fields(self, tau, zeta):
        return self._fields(tau, zeta)

    def density_matrix(self, tau, zeta):
        return self._density(tau, zeta)


class PerturbedCandidate(Candidate):
    """Channel-a field multiplied by a constant factor (negative control)."""

    def __init__(self, base: Candidate, factor=1.01):
        super().__init__(base.fields, base.density_matrix, base.nu0, base.delta,
                         base.scale_tau, base.scale_zeta)
        self.factor = factor

    def fields(self, tau, zeta):
        oa, ob = self._fields(tau, zeta)
        return oa * self.factor, ob


def seed_candidate(profile, nu0, delta):
    """Undressed background: Omega_a = 0, Omega_b = Omega(tau), rho = |1><1|."""

    def fields(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        return np.zeros(tau.shape, complex), np.asarray(profile.evaluate(tau), complex)

    def density(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        r = np.zeros(tau.shape + (3, 3), complex)
        r[..., 0, 0] = 1
        return r

    return Candidate(fields, density, nu0, delta)


# ---------------------------------------------------------------- residuals

def _check_resolution(cand, grid):
    for scale, h, name in ((cand.scale_tau, grid.h_tau, "tau"), (cand.scale_zeta, grid.h_zeta, "zeta")):
        if scale is not None and scale / h < 8:
            raise ResolutionError(
                f"{name} step {h:g} gives {scale / h:.1f} < 8 points across the soliton width {scale:.3g}"
            )


def _mb_residual_level(cand: Candidate, grid: OracleGrid):
    t = grid.tau
    z = grid.zeta
    T, Z = np.meshgrid(t, z, indexing="ij")
    oa, ob = cand.fields(T, Z)
    rho = cand.density_matrix(T, Z)
    ht, hz = grid.h_tau, grid.h_zeta
    # Maxwell: central difference in zeta at interior zeta nodes
    dz_a = (oa[:, 2:] - oa[:, :-2]) / (2 * hz)
    dz_b = (ob[:, 2:] - ob[:, :-2]) / (2 * hz)
    ra = dz_a - 1j * cand.nu0 * rho[:, 1:-1, 2, 0]
    rb = dz_b - 1j * cand.nu0 * rho[:, 1:-1, 2, 1]
    # Liouville: central difference in tau
    drho = (rho[2:] - rho[:-2]) / (2 * ht)
    a = cand.delta * D / 2 - interaction_hamiltonian(oa[1:-1], ob[1:-1])
    rl = drho - 1j * _comm(a, rho[1:-1])
    ra, rb, rl = ra[1:-1], rb[1:-1], rl[:, 1:-1]
    sups = {"maxwell_a": np.max(np.abs(ra)), "maxwell_b": np.max(np.abs(rb))}
    l2s = {"maxwell_a": np.sqrt(np.mean(np.abs(ra) ** 2)), "maxwell_b": np.sqrt(np.mean(np.abs(rb) ** 2))}
    for i in range(3):
        for j in range(i, 3):
            key = f"liouville_{i + 1}{j + 1}"
            sups[key] = np.max(np.abs(rl[..., i, j]))
            l2s[key] = np.sqrt(np.mean(np.abs(rl[..., i, j]) ** 2))
    return sups, l2s


def nonlinear_residual(candidate, grid: OracleGrid, levels: int = 3, check_resolution=True) -> ResidualReport:
    """Maxwell-Bloch residuals of ``candidate`` on ``levels`` successively halved grids."""
    if not isinstance(candidate, Candidate):
        candidate = Candidate.from_dressed(candidate)
    if check_resolution:
        _check_resolution(candidate, grid)
    rep = ResidualReport()
    g = grid
    for _ in range(levels):
        sups, l2s = _mb_residual_level(candidate, g)
        rep.add_level(g.h_tau, sups, l2s)
        g = g.refined()
    return rep


def _lax_pair(lam, oa, ob, rho, nu0, delta):
    u = 0.5j * lam * D - 1j * interaction_hamiltonian(oa, ob)
    v = 0.5j * nu0 * rho / (lam - delta)
    return u, v


def zero_curvature_residual(candidate, grid: OracleGrid, probes, levels: int = 3,
                            transpose_rho: bool = False) -> ResidualReport:
    """Sup-norm of U_zeta - V_tau + [U, V] per probe lambda and refinement.

    ``transpose_rho`` builds V from the transposed density matrix (negative
    control).
    """
    probes = [complex(p) for p in probes]
    if len(set(probes)) < 2:
        raise ValidationError("need at least two distinct probe values")
    if not isinstance(candidate, Candidate):
        candidate = Candidate.from_dressed(candidate)
    for p in probes:
        if p == candidate.delta:
            raise PoleError("probe lambda equals the detuning")
    rep = ResidualReport()
    g = grid
    for _ in range(levels):
        T, Z = np.meshgrid(g.tau, g.zeta, indexing="ij")
        oa, ob = candidate.fields(T, Z)
        rho = candidate.density_matrix(T, Z)
        if transpose_rho:
            rho = np.swapaxes(rho, -1, -2)
        sups, l2s = {}, {}
        for p in probes:
            u, v = _lax_pair(p, oa, ob, rho, candidate.nu0, candidate.delta)
            uz = (u[1:-1, 2:] - u[1:-1, :-2]) / (2 * g.h_zeta)
            vt = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * g.h_tau)
            uc, vc = u[1:-1, 1:-1], v[1:-1, 1:-1]
            r = uz - vt + _comm(uc, vc)
            key = f"lambda={p:.4g}"
            sups[key] = np.max(np.abs(r))
            l2s[key] = np.sqrt(np.mean(np.abs(r) ** 2))
        rep.add_level(g.h_tau, sups, l2s)
        g = g.refined()
    return rep


def linear_solution_residual(fm, grid: OracleGrid, lam=None, levels: int = 1,
                             relative: bool = True) -> ResidualReport:
    """Residuals of d Phi/d tau = U Phi and d Phi/d zeta = V Phi for the seed.

    Normalized pointwise by |U Phi| (respectively |V Phi|) when ``relative``.
    """
    lam = fm.lam if lam is None else complex(lam)
    p = fm.params
    if lam == p.delta:
        raise PoleError("lambda equals the detuning")
    rep = ResidualReport()
    g = grid
    for _ in range(levels):
        T, Z = np.meshgrid(g.tau, g.zeta, indexing="ij")
        phi = fm.matrix(T, Z)
        if p.k_phase != 0:
            ob = p.omega0 * np.exp(1j * p.k_phase * Z)
            rho = _seed_rho(p, Z)
        else:
            ob = np.asarray(fm.profile.evaluate(T), complex)
            rho = np.zeros(T.shape + (3, 3), complex)
            rho[..., 0, 0] = 1
        u, v = _lax_pair(lam, np.zeros_like(ob), ob, rho, p.nu0, p.delta)
        up = u @ phi
        vp = v @ phi
        dt = (phi[2:, 1:-1] - phi[:-2, 1:-1]) / (2 * g.h_tau)
        dz = (phi[1:-1, 2:] - phi[1:-1, :-2]) / (2 * g.h_zeta)
        rt = np.linalg.norm(dt - up[1:-1, 1:-1], axis=(-2, -1))
        rz = np.linalg.norm(dz - vp[1:-1, 1:-1], axis=(-2, -1))
        if relative:
            rt = rt / np.maximum(np.linalg.norm(up[1:-1, 1:-1], axis=(-2, -1)), 1e-300)
            rz = rz / np.maximum(np.linalg.norm(vp[1:-1, 1:-1], axis=(-2, -1)), 1e-300)
        rep.add_level(g.h_tau, {"tau": np.max(rt), "zeta": np.max(rz)},
                      {"tau": np.sqrt(np.mean(rt**2)), "zeta": np.sqrt(np.mean(rz**2))})
        g = g.refined()
    return rep


def _seed_rho(p, zeta):
    k, x, nu, d, om = p.k_phase, p.x_excited, p.nu0, p.delta, p.omega0
    ph = np.exp(1j * k * np.asarray(zeta))
    s = k / nu
    r = np.zeros(np.shape(zeta) + (3, 3), complex)
    r[..., 0, 0] = 1 - s * x
    r[..., 1, 1] = s * (x / 2 + d)
    r[..., 2, 2] = s * (x / 2 - d)
    r[..., 1, 2] = s * om / ph
    r[..., 2, 1] = s * om * ph
    return r


# ---------------------------------------------------------------- propagation

def _propagators(oa, ob, delta, tau):
    """exp(i A h) per interval with midpoint fields, A = Delta D/2 - H_I."""
    ma = 0.5 * (oa[1:] + oa[:-1])
    mb = 0.5 * (ob[1:] + ob[:-1])
    a = delta * D / 2 - interaction_hamiltonian(ma, mb)
    h = np.diff(tau)
    evals, evecs = np.linalg.eigh(a)
    ph = np.exp(1j * evals * h[:, None])
    return (evecs * ph[:, None, :]) @ _dagger(evecs)


def _prefix_products(u):
    """P_j = u_{j-1} ... u_0 for j = 0..n (P_0 = I), via a doubling scan."""
    n = u.shape[0]
    p = u.copy()
    step = 1
    while step < n:
        p[step:] = p[step:] @ p[:-step]
        step *= 2
    out = np.empty((n + 1, 3, 3), complex)
    out[0] = np.eye(3)
    out[1:] = p
    return out


def evolve_atoms(oa, ob, rho0, delta, tau):
    """rho(tau_j) for given fields along tau; exact unitary steps, order 2."""
    u = _propagators(np.asarray(oa, complex), np.asarray(ob, complex), delta, tau)
    p = _prefix_products(u)
    return p @ rho0 @ _dagger(p)


@dataclass
class OracleRun:
    tau: np.ndarray
    zeta: np.ndarray
    omega_a: np.ndarray  # (n_zeta, n_tau)
    omega_b: np.ndarray
    rho_last: np.ndarray
    trace_drift: float
    hermiticity_drift: float


def integrate_maxwell_bloch(fields_at_entry, rho_initial, grid: OracleGrid, nu0, delta,
                            growth_limit=1e3) -> OracleRun:
    """March the Maxwell equations in zeta (Heun) with atoms evolved in tau.

    ``fields_at_entry`` is ``(Omega_a(tau), Omega_b(tau))`` sampled on
    ``grid.tau`` at ``zeta = grid.zeta_min``; ``rho_initial(zeta)`` gives the
    atomic density matrix at ``tau = grid.tau_min``.
    """
    tau, zeta = grid.tau, grid.zeta
    oa = np.array(fields_at_entry[0], complex)
    ob = np.array(fields_at_entry[1], complex)
    if oa.shape != tau.shape or ob.shape != tau.shape:
        raise ValidationError("entry fields must be sampled on grid.tau")
    hz = grid.h_zeta
    out_a = np.empty((zeta.size, tau.size), complex)
    out_b = np.empty_like(out_a)
    out_a[0], out_b[0] = oa, ob
    scale0 = max(np.max(np.abs(oa)), np.max(np.abs(ob)), 1e-300)
    tr_drift = herm_drift = 0.0

    def rhs(fa, fb, z):
        r0 = np.asarray(rho_initial(z), complex)
        rho = evolve_atoms(fa, fb, r0, delta, tau)
        return 1j * nu0 * rho[:, 2, 0], 1j * nu0 * rho[:, 2, 1], rho

    rho = None
    for n in range(zeta.size - 1):
        z = zeta[n]
        ka, kb, rho = rhs(oa, ob, z)
        pa, pb = oa + hz * ka, ob + hz * kb
        ka2, kb2, _ = rhs(pa, pb, z + hz)
        oa = oa + 0.5 * hz * (ka + ka2)
        ob = ob + 0.5 * hz * (kb + kb2)
        herm = np.max(np.abs(rho - _dagger(rho)))
        tr = np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1))
        herm_drift, tr_drift = max(herm_drift, herm), max(tr_drift, tr)
        size = max(np.max(np.abs(oa)), np.max(np.abs(ob)))
        if not np.isfinite(size) or size > growth_limit * scale0:
            raise InstabilityError(
                f"field growth {size / scale0:.3g} at zeta={z + hz:.4g}", suggested_step=hz / 2
            )
        out_a[n + 1], out_b[n + 1] = oa, ob
    rho_last = evolve_atoms(oa, ob, np.asarray(rho_initial(zeta[-1]), complex), delta, tau)
    rho_last = 0.5 * (rho_last + _dagger(rho_last))
    if herm_drift or tr_drift:
        log.debug("oracle drift: trace %.2e, hermiticity %.2e", tr_drift, herm_drift)
    return OracleRun(tau, zeta, out_a, out_b, rho_last, tr_drift, herm_drift)


def propagation_error(sol, grid: OracleGrid):
    """Max |oracle - analytic| of both fields at zeta_max, entry data from ``sol``."""
    tau = grid.tau
    z0 = grid.zeta_min
    oa, ob = sol.fields(tau, np.full(tau.shape, z0))

    def rho_init(z):
        return sol.density_matrix(grid.tau_min, z)

    run = integrate_maxwell_bloch((oa, ob), rho_init, grid, sol.params.nu0, sol.params.delta)
    ea, eb = sol.fields(tau, np.full(tau.shape, grid.zeta_max))
    err = max(np.max(np.abs(run.omega_a[-1] - ea)), np.max(np.abs(run.omega_b[-1] - eb)))
    return float(err), run
