"""Group velocity, memory-bit width, stopping distance and ridge tracking."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import quad

from .background import BackgroundProfile
from .errors import (
    AmbiguousRidgeError,
    DomainError,
    NoRidgeError,
    NotStoppingScenarioError,
    ValidationError,
)
from .model import PhysicalParams, SpectralConfig
from .scattering import ScatteringSolution, constant_background, k_of_lambda

LN_2_SQRT3 = math.log(2 + math.sqrt(3))


# ---------------------------------------------------------------- velocity

def dtau_phase(lam, w):
    """tau-derivative of the slow-soliton phase, Im(lam) |w|^2 / (1 + |w|^2)."""
    a = np.abs(w) ** 2
    return complex(lam).imag * a / (1 + a)


def dzeta_phase(params: PhysicalParams, lam):
    """zeta-derivative of the slow-soliton phase, (nu0/2) Im(1/(lam - Delta))."""
    return 0.5 * params.nu0 * (1 / (complex(lam) - params.delta)).imag


def velocity_from_phase(dtau, dzeta):
    """Lab-frame speed of a line of constant phase, in units of c."""
    return dtau / (dtau - dzeta)


def group_velocity(params: PhysicalParams, spectral: SpectralConfig, w_value):
    """v/c = |w|^2 / (nu0 (1 + |w|^2) / (2 |Delta - lam|^2) + |w|^2)."""
    a = np.abs(w_value) ** 2
    m2 = abs(params.delta - spectral.lambda0) ** 2
    return a / (params.nu0 * (1 + a) / (2 * m2) + a)


def fast_velocity(params: PhysicalParams, spectral: SpectralConfig):
    """Lab speed of the fast-soliton ridge on a constant background."""
    lam = spectral.lambda0
    wl, zl = constant_background(np.conj(lam), params.omega0)
    rate = (-1j * lam + np.conj(zl)).real
    dz = (-0.5j * params.nu0 / (lam - params.delta)).real
    return velocity_from_phase(rate, dz)


def small_field_velocities(params: PhysicalParams) -> dict:
    """The two competing weak-field estimates of the slow group velocity."""
    o2 = params.omega0**2
    return {"half": o2 / (2 * params.nu0), "full": o2 / params.nu0}


# ---------------------------------------------------------------- width

def memory_bit_width(params: PhysicalParams, spectral: SpectralConfig) -> float:
    """Full width of the stored population pattern at a quarter of its maximum
    (the half maximum of its sech amplitude)."""
    lam = spectral.lambda0
    if lam.imag == 0:
        raise ValidationError("Im(lambda) must be non-zero")
    return 4 * LN_2_SQRT3 * abs(params.delta - lam) ** 2 / (params.nu0 * abs(lam.imag))


def measure_width(zeta, profile_values, level=0.25) -> float:
    """Full width at ``level`` times the maximum of a single-peaked sample."""
    z = np.asarray(zeta, float)
    y = np.asarray(profile_values, float)
    i = int(np.argmax(y))
    thr = level * y[i]
    left = np.nonzero(y[:i] < thr)[0]
    right = np.nonzero(y[i:] < thr)[0]
    if left.size == 0 or right.size == 0:
        raise DomainError("pattern not contained in the sampled window")
    l0 = left[-1]
    r0 = i + right[0]
    zl = z[l0] + (thr - y[l0]) * (z[l0 + 1] - z[l0]) / (y[l0 + 1] - y[l0])
    zr = z[r0 - 1] + (thr - y[r0 - 1]) * (z[r0] - z[r0 - 1]) / (y[r0] - y[r0 - 1])
    return float(zr - zl)


# ---------------------------------------------------------------- stopping

@dataclass
class StoppingReport:
    predicted: float
    predicted_step: float
    functional: float
    measured: float | None = None
    zeta_star: float | None = None
    width: float | None = None
    I1: float | None = None
    I2: float | None = None
    first_order: float | None = None
    discrepancy: float | None = None
    notes: dict = field(default_factory=dict)

    def as_text(self) -> str:
        lines = []
        for k, v in asdict(self).items():
            if k == "notes":
                for nk, nv in v.items():
                    lines.append(f"note.{nk} = {nv}")
            else:
                lines.append(f"{k} = {v}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return asdict(self)


def distance_prefactor(params, spectral):
    lam = spectral.lambda0
    return 2 * abs(params.delta - lam) ** 2 / (params.nu0 * lam.imag)


def step_distance(params: PhysicalParams, spectral: SpectralConfig, omega0=None) -> float:
    """Distance covered after an instant switch-off (``L0``)."""
    lam = spectral.lambda0
    om = params.omega0 if omega0 is None else omega0
    w0, _ = constant_background(lam, om)
    return abs(params.delta - lam) ** 2 / (params.nu0 * abs(lam.imag)) * math.log1p(abs(w0) ** 2)


def relative_distance_quadrature(params, spectral, scattering: ScatteringSolution, t_end=None):
    """L[Omega] = P int Re(i conj(Omega) w / 2 - z0 Theta(-tau)) d tau."""
    prof = scattering.profile
    z0 = scattering.z0
    lo, hi = scattering.domain
    left = prof.left_edge()
    a = left if math.isfinite(left) else lo
    if not math.isfinite(a):
        raise DomainError("cannot locate the start of the switch-off")
    b = t_end if t_end is not None else hi
    if not math.isfinite(b):
        raise DomainError("finite upper limit needed for quadrature")

    def f(t):
        om = complex(prof.evaluate(t))
        val = 0.5j * om.conjugate() * complex(scattering.w(t)) - (z0 if t < 0 else 0)
        return val.real

    pts = [p for p in prof.breakpoints if a < p < b]
    val, _ = quad(f, a, b, points=pts or None, limit=500, epsabs=1e-11, epsrel=1e-11)
    return distance_prefactor(params, spectral) * val


def stopping_distance(params: PhysicalParams, spectral: SpectralConfig,
                      scattering: ScatteringSolution, measured: float | None = None,
                      zeta_star: float | None = None, width: float | None = None) -> StoppingReport:
    """Predicted stopping distance for a field that vanishes at late times."""
    prof = scattering.profile
    if prof is None or prof.omega_plus != 0:
        raise NotStoppingScenarioError("field does not vanish at late times")
    lam = spectral.lambda0
    if not lam.imag < 0:
        raise ValidationError("stopping analysis assumes Im(lambda) < 0")
    L0 = step_distance(params, spectral, abs(prof.omega_minus))
    try:
        z_inf = scattering.z_infinity()
        functional = distance_prefactor(params, spectral) * z_inf.real
    except DomainError:
        functional = relative_distance_quadrature(params, spectral, scattering)
    predicted = L0 + functional
    rep = StoppingReport(predicted=predicted, predicted_step=L0, functional=functional,
                         measured=measured, zeta_star=zeta_star, width=width)
    try:
        i1, i2 = zs_functionals(prof)
        rep.I1, rep.I2 = i1, i2
        rep.first_order = first_order_distance(params, spectral, prof, i1)
        rep.notes["first_order_printed_prefactor"] = 2 * rep.first_order
    except DomainError as exc:
        rep.notes["functionals"] = str(exc)
    if measured is not None:
        rep.discrepancy = measured - predicted
    return rep


def zs_functionals(profile: BackgroundProfile, tau_min=None):
    """Regularized functionals I1 = -int(|Omega|^2 - |Omega0|^2 Theta(-tau)),
    I2 = int Im(conj(Omega) dOmega/dtau)."""
    if profile.omega_plus != 0:
        raise DomainError("functionals diverge unless the field vanishes at late times")
    o2 = abs(profile.omega_minus) ** 2
    left = profile.left_edge()
    start = left if math.isfinite(left) else (-math.inf if tau_min is None else tau_min)

    def f1(t):
        return abs(complex(profile.evaluate(t))) ** 2 - (o2 if t < 0 else 0.0)

    def f2(t):
        om = complex(profile.evaluate(t))
        return (om.conjugate() * complex(profile.derivative(t))).imag

    def integrate(f):
        pts = sorted(set([0.0] + [p for p in profile.breakpoints if math.isfinite(p)]))
        edges = [start] + [p for p in pts if p > start] + [math.inf]
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if a == b:
                continue
            val, err = quad(f, a, b, limit=400, epsabs=1e-12, epsrel=1e-12)
            if not np.isfinite(val):
                raise DomainError("functional integral diverges")
            total += val
        return total

    return -integrate(f1), integrate(f2)


def first_order_distance(params, spectral, profile, i1=None):
    """Leading term of the 1/k series: |Delta-lam|^2 / (2 nu0 Im lam) Im(I1 / k)."""
    lam = spectral.lambda0
    if i1 is None:
        i1, _ = zs_functionals(profile)
    k = k_of_lambda(lam, profile.omega_minus)
    return abs(params.delta - lam) ** 2 / (2 * params.nu0 * lam.imag) * (i1 / k).imag


# ---------------------------------------------------------------- ridge tracking

@dataclass
class SolitonTrajectory:
    tau: np.ndarray
    zeta: np.ndarray
    amplitude: np.ndarray
    velocity: float
    velocity_err: float

    def __post_init__(self):
        if np.any(np.diff(self.tau) <= 0):
            raise ValidationError("trajectory samples must be ordered in tau")
        if not np.isfinite(self.velocity):
            raise ValidationError("velocity must be finite")


def _refine(y, i):
    """Vertex offset of the parabola through y[i-1], y[i], y[i+1]."""
    den = y[i - 1] - 2 * y[i] + y[i + 1]
    if den == 0:
        return 0.0
    return 0.5 * (y[i - 1] - y[i + 1]) / den


def _local_maxima(y, rel=0.5):
    interior = (y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])
    idx = np.nonzero(interior)[0] + 1
    top = y.max()
    return idx[y[idx] >= rel * top]


def fit_lab_velocity(tau, zeta, central=0.6):
    """Least-squares dz/dt of the points (t, z) = (tau + zeta, zeta)."""
    tau = np.asarray(tau, float)
    zeta = np.asarray(zeta, float)
    n = tau.size
    cut = int(round(n * (1 - central) / 2))
    sl = slice(cut, n - cut) if n - 2 * cut >= 3 else slice(None)
    t = tau[sl] + zeta[sl]
    z = zeta[sl]
    if t.size < 3:
        raise NoRidgeError("too few ridge samples to fit a velocity")
    A = np.vstack([t, np.ones_like(t)]).T
    coef, res, *_ = np.linalg.lstsq(A, z, rcond=None)
    dof = max(t.size - 2, 1)
    resid = z - A @ coef
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return float(coef[0]), float(math.sqrt(max(cov[0, 0], 0.0)))


def track_peak(fmap, channel="abs2_omega_a", tau_window=None, central=0.6,
               ambiguity=0.9, min_separation=None) -> SolitonTrajectory:
    """Per-tau argmax over zeta, refined by a 3-point parabola, plus the
    lab-frame velocity fitted on the central part of the trajectory."""
    data = fmap.channel(channel)
    tau, zeta = fmap.tau, fmap.zeta
    if tau_window is not None:
        m = (tau >= tau_window[0]) & (tau <= tau_window[1])
        data, tau = data[m], tau[m]
    span = float(np.max(data) - np.min(data))
    if span <= 1e-6 * max(float(np.max(np.abs(data))), 1e-300) or span == 0:
        raise NoRidgeError("field map has no dynamic range")
    hz = zeta[1] - zeta[0]
    sep = min_separation if min_separation is not None else 10 * hz
    ts, zs, amps = [], [], []
    for t, row in zip(tau, data):
        if row.max() - row.min() <= 1e-6 * span:
            continue
        i = int(np.argmax(row))
        if i == 0 or i == row.size - 1:
            continue
        cands = [j for j in _local_maxima(row, ambiguity) if abs(zeta[j] - zeta[i]) > sep]
        if cands:
            raise AmbiguousRidgeError(
                f"comparable ridges at tau={t:.4g}",
                candidates=[float(zeta[i])] + [float(zeta[j]) for j in cands],
            )
        d = _refine(row, i)
        ts.append(t)
        zs.append(zeta[i] + d * hz)
        amps.append(row[i] - 0.25 * (row[i - 1] - row[i + 1]) * d)
    if len(ts) < 3:
        raise NoRidgeError("no ridge found inside the window")
    v, dv = fit_lab_velocity(ts, zs, central)
    return SolitonTrajectory(np.array(ts), np.array(zs), np.array(amps), v, dv)


def peak_position(zeta, values) -> float:
    """Refined argmax of a sampled single peak."""
    y = np.asarray(values, float)
    i = int(np.argmax(y))
    if i == 0 or i == y.size - 1:
        raise DomainError("peak on the edge of the sampled window")
    return float(zeta[i] + _refine(y, i) * (zeta[1] - zeta[0]))
