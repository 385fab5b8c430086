"""Single-soliton Darboux-Baecklund dressing of a background solution.

The seed is ``Omega_a = 0``, ``Omega_b = Omega(tau)`` with atoms in the dark
state ``|1>``.  Its fundamental matrix is

    Phi0 = blockdiag(exp(theta), T),   theta = i/2 (lam tau + nu0 zeta / (lam - Delta)),
    T = [[e^{Z11}, -wb e^{Z22}], [w e^{Z11}, e^{Z22}]],

with ``Z11 = i lam tau / 2 + z``, ``Z22 = -i lam tau / 2 + zb`` and the barred
functions ``wb(tau) = conj(w(tau, conj(lam)))``, ``zb`` likewise.

Dressing with the vector ``q = Phi0 (c1, c2, c3)`` gives

    Xi(Delta) = (conj(lam) - Delta) (I - P) + (lam - Delta) P,   P = q q^H / |q|^2,

so only the projector P is needed.  Fields follow from Xi(0) and the atomic
state from the first column of Xi(Delta).  All exponentials are handled in
log-space with a common scale factor, which cancels in P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .background import BackgroundProfile, Constant
from .errors import (
    ConfigError,
    DegenerateConfigurationError,
    FamilyMismatchError,
    NormalizationError,
    PoleError,
    ValidationError,
)
from .model import D, PhysicalParams, SpectralConfig, AtomicState
from .scattering import (
    ScatteringSolution,
    constant_background,
    constant_solution,
    sqrt_branch,
)

PIVOT_TOL = 1e-12


def _log(c):
    c = complex(c)
    return -np.inf + 0j if c == 0 else np.log(c)


# ---------------------------------------------------------------- fundamental matrix

class FundamentalMatrix:
    """Fundamental matrix of the seed linear pair at spectral parameter ``lam``.

    ``scattering`` supplies w, z at ``lam``; ``partner`` supplies them at
    ``conj(lam)`` and defaults to the closed form for a constant background.
    For ``k_phase != 0`` (constant background only) the shifted-time
    exponent with the spatial-phase corrections is used.
    """

    def __init__(self, params: PhysicalParams, lam, scattering: ScatteringSolution | None = None,
                 partner: ScatteringSolution | None = None, profile: BackgroundProfile | None = None):
        self.params = params
        self.lam = complex(lam)
        if self.lam == params.delta:
            raise PoleError("spectral parameter equals the detuning")
        self.k = params.k_phase
        if scattering is None:
            scattering = constant_solution(self.lam, params.omega0)
        self.scattering = scattering
        self.profile = profile or scattering.profile
        if self.k != 0 and not isinstance(self.profile, Constant):
            raise ConfigError("k_phase != 0 is supported only for a constant background")
        if partner is None:
            if not self.profile.is_constant:
                partner = None
            else:
                partner = constant_solution(self.lam.conjugate(), self.profile.omega_minus.real)
        self.partner = partner

    @property
    def has_partner(self) -> bool:
        return self.partner is not None or self.k != 0

    def _inv_pole(self):
        return 1.0 / (self.lam - self.params.delta)

    def log_parts(self, tau, zeta):
        """Return ``(theta, Z11, Z22, w, wb)`` broadcast over tau, zeta.

        ``wb`` is ``None`` when no partner solution is available.
        """
        lam, nu, p = self.lam, self.params.nu0, self.params
        tau = np.asarray(tau, float)
        zeta = np.asarray(zeta, float)
        tau, zeta = np.broadcast_arrays(tau, zeta)
        ip = self._inv_pole()
        if self.k == 0:
            theta = 0.5j * (lam * tau + nu * zeta * ip)
            w = self.scattering.w(tau)
            z = self.scattering.z(tau)
            z11 = 0.5j * lam * tau + z
            if self.partner is not None:
                wb = np.conj(self.partner.w(tau))
                zb = np.conj(self.partner.z(tau))
                z22 = -0.5j * lam * tau + zb
            else:
                wb, z22 = None, None
            return theta, z11, z22, np.asarray(w), wb
        k, x, om = self.k, p.x_excited, p.omega0
        s = sqrt_branch(lam, om)
        theta = 0.5j * (lam * tau + (nu - k * x) * zeta * ip)
        shifted = tau + k * zeta * ip
        corr = 0.25j * k * x * zeta * ip
        z11 = 0.5j * s * shifted + corr - 0.5j * k * zeta
        z22 = -0.5j * s * shifted + corr + 0.5j * k * zeta
        w = om * np.exp(1j * k * zeta) / (lam + s)
        wb = om * np.exp(-1j * k * zeta) / (lam + s)
        return theta, z11, z22, w, wb

    def matrix(self, tau, zeta):
        """Phi0 as an array of shape (..., 3, 3)."""
        theta, z11, z22, w, wb = self.log_parts(tau, zeta)
        if wb is None:
            raise ConfigError("conjugate-parameter scattering solution required")
        shape = np.shape(theta)
        out = np.zeros(shape + (3, 3), complex)
        e11, e22 = np.exp(z11), np.exp(z22)
        out[..., 0, 0] = np.exp(theta)
        out[..., 1, 1] = e11
        out[..., 2, 1] = w * e11
        out[..., 1, 2] = -wb * e22
        out[..., 2, 2] = e22
        return out

    def conj_matrix(self, tau, zeta):
        """Companion matrix at conj(lam), equal to inv(Phi0)^H."""
        return np.swapaxes(np.linalg.inv(self.matrix(tau, zeta)), -1, -2).conj()

    def pairing(self, tau, zeta):
        """Gram matrix (Phibar^(i), Phi^(j)) which should be the identity."""
        phi = self.matrix(tau, zeta)
        bar = self.conj_matrix(tau, zeta)
        return np.swapaxes(bar, -1, -2).conj() @ phi


def fundamental_matrix(params, profile=None, scattering=None, lam=None, partner=None):
    """Build :class:`FundamentalMatrix` (``lam`` defaults to the scattering's)."""
    if lam is None:
        if scattering is None:
            raise ValidationError("need lam or a scattering solution")
        lam = scattering.lam
    return FundamentalMatrix(params, lam, scattering, partner, profile)


# ---------------------------------------------------------------- dressing matrix

@dataclass
class DressingMatrix:
    """Psi1 and Xi(Delta) at one point, from explicit orthogonal columns."""

    psi1: np.ndarray
    xi: np.ndarray
    lam: complex
    delta: float

    @property
    def eigenvalues(self):
        return np.linalg.eigvals(self.xi)

    def column_overlaps(self):
        q = self.psi1[:, 2]
        return np.array([np.vdot(q, self.psi1[:, 0]), np.vdot(q, self.psi1[:, 1])])


def _adjugate3(m):
    a = m
    cof = np.empty_like(a)
    cof[0, 0] = a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    cof[0, 1] = -(a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
    cof[0, 2] = a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]
    cof[1, 0] = -(a[0, 1] * a[2, 2] - a[0, 2] * a[2, 1])
    cof[1, 1] = a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
    cof[1, 2] = -(a[0, 0] * a[2, 1] - a[0, 1] * a[2, 0])
    cof[2, 0] = a[0, 1] * a[1, 2] - a[0, 2] * a[1, 1]
    cof[2, 1] = -(a[0, 0] * a[1, 2] - a[0, 2] * a[1, 0])
    cof[2, 2] = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    return cof.T


def dressing_matrix(phi, phibar, spectral: SpectralConfig, delta, tau=None, zeta=None) -> DressingMatrix:
    """Xi(Delta) = Psi1 diag(lam*-Delta, lam*-Delta, lam-Delta) Psi1^{-1}.

    ``phi`` and ``phibar`` are the 3x3 fundamental matrices at lam and
    conj(lam).  The first two columns of Psi1 are the combinations of
    ``phibar`` columns orthogonal to ``Psi1^(3) = phi (c1, c2, c3)``.
    """
    c1, c2, c3 = spectral.c1, spectral.c2, spectral.c3
    lam = spectral.lambda0
    phi = np.asarray(phi, complex)
    phibar = np.asarray(phibar, complex)
    col3 = phi @ np.array([c1, c2, c3])
    col1 = (np.conj(c2) + np.conj(c3)) * phibar[:, 0] - np.conj(c1) * (phibar[:, 1] + phibar[:, 2])
    col2 = np.conj(c3) * phibar[:, 1] - np.conj(c2) * phibar[:, 2]
    psi1 = np.stack([col1, col2, col3], axis=1)
    det = np.linalg.det(psi1)
    scale = np.prod(np.linalg.norm(psi1, axis=0))
    if scale == 0 or abs(det) <= PIVOT_TOL * scale:
        raise DegenerateConfigurationError(
            f"Psi1 singular at tau={tau}, zeta={zeta} (|det|/scale={abs(det) / scale if scale else 0:.2e})",
            tau=tau, zeta=zeta,
        )
    spec = np.diag([np.conj(lam) - delta, np.conj(lam) - delta, lam - delta])
    xi = psi1 @ spec @ _adjugate3(psi1) / det
    return DressingMatrix(psi1, xi, lam, delta)


# ---------------------------------------------------------------- dressed solutions

class DressedValues(NamedTuple):
    omega_a: np.ndarray
    omega_b: np.ndarray
    psi: np.ndarray | None
    rho: np.ndarray | None = None


@dataclass
class DressedSolution:
    """Evaluator (tau, zeta) -> dressed fields and atomic state."""

    family: str
    params: PhysicalParams
    spectral: SpectralConfig
    profile: BackgroundProfile
    evaluator: Callable
    scattering: ScatteringSolution | None = None
    info: dict = field(default_factory=dict)

    def evaluate(self, tau, zeta) -> DressedValues:
        return self.evaluator(tau, zeta)

    def __call__(self, tau, zeta):
        return self.evaluate(tau, zeta)

    def fields(self, tau, zeta):
        v = self.evaluate(tau, zeta)
        return v.omega_a, v.omega_b

    def density_matrix(self, tau, zeta):
        v = self.evaluate(tau, zeta)
        if v.rho is not None:
            return v.rho
        psi = v.psi
        return psi[..., :, None] * psi[..., None, :].conj()

    def populations(self, tau, zeta):
        v = self.evaluate(tau, zeta)
        if v.psi is not None:
            p = np.abs(v.psi) ** 2
        else:
            p = np.real(np.diagonal(v.rho, axis1=-2, axis2=-1))
        return p[..., 0], p[..., 1], p[..., 2]

    def state(self, tau: float, zeta: float) -> AtomicState:
        v = self.evaluate(tau, zeta)
        if v.psi is None:
            raise ValidationError("mixed dressed state has no state vector")
        return AtomicState(np.asarray(v.psi).reshape(3))

    def background(self, tau):
        return np.asarray(self.profile.evaluate(tau), complex)


def _projector_values(fm: FundamentalMatrix, spectral: SpectralConfig, delta, tau, zeta,
                      omega, rho0=None):
    """Fields and state from the rank-one projector built on q = Phi0 c."""
    lam = spectral.lambda0
    theta, z11, z22, w, wb = fm.log_parts(tau, zeta)
    shape = np.shape(theta)
    w = np.broadcast_to(w, shape)
    l1 = 1j * spectral.c1_phase + np.zeros(shape)
    phi2 = _log(spectral.c2) + z11 - theta
    if spectral.c3 != 0:
        if wb is None:
            raise ConfigError("c3 != 0 on a time-dependent background needs a conjugate-parameter solution")
        wb = np.broadcast_to(wb, shape)
        phi3 = _log(spectral.c3) + z22 - theta
    else:
        wb = np.zeros(shape, complex)
        phi3 = np.full(shape, -np.inf + 0j)
    with np.errstate(invalid="ignore", over="ignore"):
        m = np.maximum.reduce([
            np.zeros(shape),
            np.real(phi2) + np.log1p(np.abs(w)),
            np.real(phi3) + np.log1p(np.abs(wb)),
        ])
        e2 = np.where(np.isneginf(phi2.real), 0, np.exp(phi2 - m))
        e3 = np.where(np.isneginf(phi3.real), 0, np.exp(phi3 - m))
    q1 = np.exp(l1 - m)
    q2 = e2 - wb * e3
    q3 = w * e2 + e3
    norm = np.abs(q1) ** 2 + np.abs(q2) ** 2 + np.abs(q3) ** 2
    if np.any(~(norm > 0)) or not np.all(np.isfinite(norm)):
        raise NormalizationError("normalization of the dressing vector vanished or overflowed")
    dl = lam - np.conj(lam)
    omega = np.broadcast_to(np.asarray(omega, complex), shape)
    oa = -2 * dl * q3 * np.conj(q1) / norm
    ob = omega - 2 * dl * q3 * np.conj(q2) / norm
    q = np.stack([q1, q2, q3], axis=-1)
    if rho0 is None:
        col = dl * q * (np.conj(q1) / norm)[..., None]
        col[..., 0] += np.conj(lam) - delta
        psi = col / abs(lam - delta)
        return DressedValues(oa, ob, psi)
    proj = q[..., :, None] * q[..., None, :].conj() / norm[..., None, None]
    eye = np.eye(3)
    xi = (np.conj(lam) - delta) * (eye - proj) + (lam - delta) * proj
    xi_inv = (eye - proj) / (np.conj(lam) - delta) + proj / (lam - delta)
    rho = xi @ rho0 @ xi_inv
    return DressedValues(oa, ob, None, rho)


def normalization_exact(fm: FundamentalMatrix, spectral: SpectralConfig, tau, zeta):
    """|q / e^theta|^2 evaluated directly (may overflow for large phases)."""
    theta, z11, z22, w, wb = fm.log_parts(tau, zeta)
    e2 = spectral.c2 * np.exp(z11 - theta)
    e3 = spectral.c3 * np.exp(z22 - theta) if spectral.c3 != 0 else 0 * e2
    wb = 0 if wb is None else wb
    return 1 + np.abs(e2 - wb * e3) ** 2 + np.abs(w * e2 + e3) ** 2


def normalization_printed(fm: FundamentalMatrix, spectral: SpectralConfig, tau, zeta):
    """Normalization exactly as printed in the source formula.

    It lacks the factor 2 on the cross term and uses |w(lam)| for both
    diagonal terms; compare with :func:`normalization_exact`.
    """
    theta, z11, z22, w, wb = fm.log_parts(tau, zeta)
    e2 = spectral.c2 * np.exp(z11 - theta)
    e3 = spectral.c3 * np.exp(z22 - theta) if spectral.c3 != 0 else 0 * e2
    w_conj_lam = 0 if wb is None else np.conj(wb)
    return (
        1
        + np.real((w - w_conj_lam) * e2 * np.conj(e3))
        + (1 + np.abs(w) ** 2) * (np.abs(e2) ** 2 + np.abs(e3) ** 2)
    )


def _require_constant(profile, family):
    if not profile.is_constant:
        raise FamilyMismatchError(f"{family} requires a constant background, got '{profile.kind}'")


def dressed_general(params: PhysicalParams, spectral: SpectralConfig,
                    scattering: ScatteringSolution | None = None,
                    partner: ScatteringSolution | None = None,
                    profile: BackgroundProfile | None = None) -> DressedSolution:
    """General one-fold dressing: slow (c2) and fast (c3) components together."""
    if scattering is None:
        profile = profile or Constant(params.omega0, params.k_phase)
        scattering = constant_solution(spectral.lambda0, profile.omega_minus.real, profile)
    profile = profile or scattering.profile
    if abs(complex(scattering.lam) - spectral.lambda0) > 1e-14 * max(1.0, abs(spectral.lambda0)):
        raise ConfigError("scattering solution was built for a different lambda")
    if profile.is_constant:
        spectral.require_solitonic(params.omega0)
        if abs(profile.omega_minus - params.omega0) > 1e-12:
            raise ConfigError("constant profile amplitude differs from params.omega0")
    fm = FundamentalMatrix(params, spectral.lambda0, scattering, partner, profile)
    if spectral.c3 != 0 and not fm.has_partner:
        raise ConfigError("c3 != 0 on a time-dependent background needs a conjugate-parameter solution")
    mixed = params.k_phase != 0

    def ev(tau, zeta):
        tau_b, zeta_b = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        if mixed:
            om = params.omega0 * np.exp(1j * params.k_phase * zeta_b)
            rho0 = _seed_rho_k(params, zeta_b)
            return _projector_values(fm, spectral, params.delta, tau_b, zeta_b, om, rho0)
        om = profile.evaluate(tau_b)
        return _projector_values(fm, spectral, params.delta, tau_b, zeta_b, om)

    return DressedSolution("general", params, spectral, profile, ev, scattering,
                           info={"fundamental": fm})


def _seed_rho_k(params, zeta):
    k, x, nu, d, om = params.k_phase, params.x_excited, params.nu0, params.delta, params.omega0
    shape = np.shape(zeta)
    ph = np.exp(1j * k * np.asarray(zeta))
    s = k / nu
    rho = np.zeros(shape + (3, 3), complex)
    rho[..., 0, 0] = 1 - s * x
    rho[..., 1, 1] = s * (x / 2 + d)
    rho[..., 2, 2] = s * (x / 2 - d)
    rho[..., 1, 2] = s * om / ph
    rho[..., 2, 1] = s * om * ph
    return rho


def _one_soliton_values(params, spectral, w, z, omega, zeta):
    """Explicit sech/tanh form of the slow (c3 = 0) dressed solution."""
    lam, delta, nu = spectral.lambda0, params.delta, params.nu0
    ip = 1 / (lam - delta)
    aw2 = np.abs(w) ** 2
    phi = (np.log(abs(spectral.c2)) + 0.5 * nu * zeta * ip.imag + np.real(z) + 0.5 * np.log1p(aw2))
    theta = (np.angle(spectral.c2) - spectral.c1_phase - 0.5 * nu * zeta * ip.real + np.imag(z))
    sech = 1 / np.cosh(np.clip(phi, -700, 700))
    tanh = np.tanh(phi)
    dl = lam - np.conj(lam)
    oa = -dl * w * np.exp(1j * theta) * sech / np.sqrt(1 + aw2)
    # e^phi sech(phi) = 1 + tanh(phi)
    ob = omega - dl * w * (1 + tanh) / (1 + aw2)
    mod = abs(lam - delta)
    psi2 = dl * np.exp(1j * theta) * sech / (2 * mod * np.sqrt(1 + aw2))
    psi1 = (lam.real - delta - 1j * lam.imag * tanh) / mod
    psi = np.stack(np.broadcast_arrays(psi1, psi2, w * psi2), axis=-1)
    return DressedValues(oa, ob, psi), phi


def slow_soliton(params: PhysicalParams, spectral: SpectralConfig,
                 profile: BackgroundProfile | None = None) -> DressedSolution:
    """Slow-light soliton on a constant background (the c3 = 0 component)."""
    profile = profile or Constant(params.omega0, params.k_phase)
    _require_constant(profile, "slow_soliton")
    if params.k_phase != 0:
        raise ConfigError("slow_soliton explicit form assumes k_phase = 0; use dressed_general")
    spectral.require_solitonic(params.omega0)
    if spectral.c3 != 0:
        spectral = spectral.replace(c3=0)
    w0, z0 = constant_background(spectral.lambda0, params.omega0)

    def ev(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        vals, _ = _one_soliton_values(params, spectral, np.full(tau.shape, w0), z0 * tau,
                                      params.omega0, zeta)
        return vals

    return DressedSolution("slow", params, spectral, profile, ev, info={"w0": w0, "z0": z0})


def fast_soliton(params: PhysicalParams, spectral: SpectralConfig,
                 profile: BackgroundProfile | None = None) -> DressedSolution:
    """Fast soliton on a constant background (the c2 = 0 component)."""
    profile = profile or Constant(params.omega0, params.k_phase)
    _require_constant(profile, "fast_soliton")
    if params.k_phase != 0:
        raise ConfigError("fast_soliton explicit form assumes k_phase = 0; use dressed_general")
    spectral.require_solitonic(params.omega0)
    if spectral.c3 == 0:
        raise ValidationError("fast soliton needs c3 != 0")
    lam, delta, nu = spectral.lambda0, params.delta, params.nu0
    wl, zl = constant_background(np.conj(lam), params.omega0)
    wb, zb_rate = np.conj(wl), np.conj(zl)
    ip = 1 / (lam - delta)
    mod = abs(lam - delta)
    dl = lam - np.conj(lam)
    awb2 = abs(wb) ** 2

    def ev(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        phi3 = _log(spectral.c3) - 1j * lam * tau + zb_rate * tau - 0.5j * nu * zeta * ip
        phi = np.real(phi3) + 0.5 * np.log1p(awb2)
        theta = np.imag(phi3) - spectral.c1_phase
        sech = 1 / np.cosh(np.clip(phi, -700, 700))
        tanh = np.tanh(phi)
        oa = -dl * np.exp(1j * theta) * sech / np.sqrt(1 + awb2)
        ob = params.omega0 + dl * np.conj(wb) * (1 + tanh) / (1 + awb2)
        psi1 = (lam.real - delta - 1j * lam.imag * tanh) / mod
        psi3 = -oa / (2 * mod)
        psi = np.stack(np.broadcast_arrays(psi1, -wb * psi3, psi3), axis=-1)
        return DressedValues(oa, ob, psi)

    return DressedSolution("fast", params, spectral, profile, ev, info={"wbar": wb})


def zero_background_memory(params: PhysicalParams, spectral: SpectralConfig,
                           profile: BackgroundProfile | None = None) -> DressedSolution:
    """Dressing of the empty medium: a stored polariton read by a fast pulse."""
    if params.omega0 != 0 or (profile is not None and (profile.omega_minus != 0 or not profile.is_constant)):
        raise FamilyMismatchError("zero_background_memory requires omega0 = 0")
    profile = profile or Constant(0.0)
    lam, delta, nu = spectral.lambda0, params.delta, params.nu0
    if lam == delta:
        raise PoleError("spectral parameter equals the detuning")
    ip = 1 / (lam - delta)
    mod = abs(lam - delta)
    dl = lam - np.conj(lam)

    def ev(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        common = -0.5j * nu * zeta * ip
        phi2 = _log(spectral.c2) + common
        phi3 = _log(spectral.c3) - 1j * lam * tau + common
        m = np.maximum(0, np.maximum(np.real(phi2), np.real(phi3)))
        e1 = np.exp(1j * spectral.c1_phase - m)
        with np.errstate(invalid="ignore"):
            e2 = np.where(np.isneginf(np.real(phi2)), 0, np.exp(phi2 - m))
            e3 = np.where(np.isneginf(np.real(phi3)), 0, np.exp(phi3 - m))
        n = np.abs(e1) ** 2 + np.abs(e2) ** 2 + np.abs(e3) ** 2
        oa = -2 * dl * e3 * np.conj(e1) / n
        ob = -2 * dl * e3 * np.conj(e2) / n
        f = dl * np.conj(e1) / (n * mod)
        psi1 = (np.conj(lam) - delta) / mod + f * e1
        psi = np.stack([psi1, f * e2, f * e3], axis=-1)
        return DressedValues(oa, ob, psi)

    return DressedSolution("zero-background", params, spectral, profile, ev)


def one_soliton_timedep(params: PhysicalParams, spectral: SpectralConfig,
                        scattering: ScatteringSolution,
                        profile: BackgroundProfile | None = None) -> DressedSolution:
    """Slow soliton on a time-dependent background (explicit sech form).

    Signs follow the generic dressing, so a constant profile reproduces
    :func:`slow_soliton` pointwise.
    """
    profile = profile or scattering.profile
    if profile is None:
        raise ConfigError("profile required")
    if scattering.profile is not None and scattering.profile != profile:
        raise ConfigError("scattering solution was built for a different profile")
    if abs(complex(scattering.lam) - spectral.lambda0) > 1e-14 * max(1.0, abs(spectral.lambda0)):
        raise ConfigError("scattering solution was built for a different lambda")
    if params.k_phase != 0:
        raise ConfigError("time-dependent background assumes k_phase = 0")
    spectral = spectral.replace(c3=0) if spectral.c3 != 0 else spectral

    def ev(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        w = np.asarray(scattering.w(tau))
        z = np.asarray(scattering.z(tau))
        om = profile.evaluate(tau)
        vals, _ = _one_soliton_values(params, spectral, w, z, om, zeta)
        return vals

    def phase(tau, zeta):
        tau, zeta = np.broadcast_arrays(np.asarray(tau, float), np.asarray(zeta, float))
        w = np.asarray(scattering.w(tau))
        z = np.asarray(scattering.z(tau))
        ip = 1 / (spectral.lambda0 - params.delta)
        return (np.log(abs(spectral.c2)) + 0.5 * params.nu0 * zeta * ip.imag + np.real(z)
                + 0.5 * np.log1p(np.abs(w) ** 2))

    return DressedSolution("time-dependent", params, spectral, profile, ev, scattering,
                           info={"phase": phase})


FAMILIES = {
    "general": dressed_general,
    "slow": slow_soliton,
    "fast": fast_soliton,
    "zero-background": zero_background_memory,
    "time-dependent": one_soliton_timedep,
}


def generic_xi(fm: FundamentalMatrix, spectral: SpectralConfig, delta, tau, zeta):
    """Xi(delta) at one point through the explicit Psi1 construction."""
    phi = fm.matrix(tau, zeta)
    phibar = fm.conj_matrix(tau, zeta)
    return dressing_matrix(phi, phibar, spectral, delta, tau, zeta)


def generic_values(fm: FundamentalMatrix, spectral: SpectralConfig, params: PhysicalParams, tau, zeta):
    """Fields and state at a point from :func:`dressing_matrix` (no shortcuts)."""
    x0 = generic_xi(fm, spectral, 0.0, tau, zeta).xi
    xd = generic_xi(fm, spectral, params.delta, tau, zeta).xi
    om = (params.omega0 * np.exp(1j * params.k_phase * zeta) if params.k_phase
          else complex(fm.profile.evaluate(tau)))
    oa = -2 * x0[2, 0]
    ob = om - 2 * x0[2, 1]
    psi = xd[:, 0] / abs(spectral.lambda0 - params.delta)
    return oa, ob, psi


__all__ = [
    "D",
    "DressedSolution",
    "DressedValues",
    "DressingMatrix",
    "FundamentalMatrix",
    "dressed_general",
    "dressing_matrix",
    "fast_soliton",
    "fundamental_matrix",
    "generic_values",
    "normalization_exact",
    "normalization_printed",
    "one_soliton_timedep",
    "slow_soliton",
    "zero_background_memory",
]
