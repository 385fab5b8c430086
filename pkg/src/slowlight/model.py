"""Physical parameters, coordinates and atomic-state types for the Lambda scheme.

Conventions used throughout the package:

* ``tau`` is the retarded time in units of the pulse length ``t_p``;
  ``zeta`` is the scaled propagation coordinate.
* The laboratory frame is ``t = tau + zeta``, ``z = zeta`` with the scaled
  light speed equal to one, so light rays are lines of constant ``tau``.
* Level ordering is ``|1>, |2>, |3>``; ``D = diag(1, 1, -1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NormalizationError, ValidationError

D = np.diag([1.0, 1.0, -1.0]).astype(complex)
SPEED_OF_LIGHT = 299_792_458.0  # m/s
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m

NORM_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Coupling, detuning and background amplitude (dimensionless).

    ``x_excited`` parameterizes the mixed initial state used when
    ``k_phase != 0``; it is ignored otherwise.
    """

    nu0: float = 4.5
    delta: float = 0.0
    omega0: float = 3.0
    k_phase: float = 0.0
    x_excited: float | None = None

    def __post_init__(self):
        if not self.nu0 > 0:
            raise ValidationError(f"nu0 must be positive, got {self.nu0}")
        if not self.omega0 >= 0:
            raise ValidationError(f"omega0 must be non-negative, got {self.omega0}")
        if self.k_phase != 0:
            if self.x_excited is None:
                raise ValidationError("x_excited is required when k_phase != 0")
            if not self.x_excited > 2 * self.delta:
                raise ValidationError(
                    f"x_excited must exceed 2*delta={2 * self.delta}, got {self.x_excited}"
                )

    def seed_density_matrix(self, zeta=0.0) -> np.ndarray:
        """Initial atomic density matrix of the constant background.

        ``|1><1|`` for ``k_phase == 0``; otherwise the stationary mixture that
        carries the linear spatial phase of the control field.
        """
        if self.k_phase == 0:
            rho = np.zeros((3, 3), complex)
            rho[0, 0] = 1.0
            return rho
        k, x, nu = self.k_phase, self.x_excited, self.nu0
        ph = np.exp(1j * k * zeta)
        s = k / nu
        return np.array(
            [
                [1 - s * x, 0, 0],
                [0, s * (x / 2 + self.delta), s * self.omega0 / ph],
                [0, s * self.omega0 * ph, s * (x / 2 - self.delta)],
            ],
            dtype=complex,
        )


@dataclass(frozen=True)
class SpectralConfig:
    """Soliton configuration: spectral parameter and dressing coefficients.

    ``c1 = exp(i*c1_phase)`` has unit modulus; ``c2`` and ``c3`` select the
    slow and fast components respectively.
    """

    lambda0: complex = 4.1j
    c1_phase: float = 0.0
    c2: complex = 1.0
    c3: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lambda0", complex(self.lambda0))
        object.__setattr__(self, "c2", complex(self.c2))
        object.__setattr__(self, "c3", complex(self.c3))
        if self.lambda0.imag == 0:
            raise ValidationError("lambda0 must have a non-zero imaginary part")
        if self.c2 == 0 and self.c3 == 0:
            raise ValidationError("c2 and c3 cannot both vanish")

    @property
    def epsilon0(self) -> float:
        return abs(self.lambda0.imag)

    @property
    def c1(self) -> complex:
        return complex(np.exp(1j * self.c1_phase))

    def require_solitonic(self, omega0: float) -> None:
        if not self.epsilon0 > omega0:
            raise ValidationError(
                f"solitonic regime needs |Im lambda0| > omega0 "
                f"({self.epsilon0} <= {omega0})"
            )

    def replace(self, **changes) -> "SpectralConfig":
        vals = dict(
            lambda0=self.lambda0, c1_phase=self.c1_phase, c2=self.c2, c3=self.c3
        )
        vals.update(changes)
        return SpectralConfig(**vals)


@dataclass(frozen=True)
class AtomicState:
    """Pure state of one atom, amplitudes on ``|1>, |2>, |3>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(3)
        norm = float(np.vdot(a, a).real)
        if abs(norm - 1) > NORM_TOL:
            raise NormalizationError(f"state norm {norm!r} differs from 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def basis(cls, level: int) -> "AtomicState":
        a = np.zeros(3, complex)
        a[level - 1] = 1
        return cls(a)

    def density_matrix(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.entries, dtype=complex).reshape(3, 3)
        if np.max(np.abs(r - r.conj().T)) > NORM_TOL:
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(r)
        if abs(tr - 1) > NORM_TOL:
            raise NormalizationError(f"density matrix trace {tr!r} differs from 1")
        r.setflags(write=False)
        object.__setattr__(self, "entries", r)

    def purity_defect(self) -> float:
        r = self.entries
        return float(np.linalg.norm(r @ r - r))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return self.purity_defect() <= tol


@dataclass(frozen=True)
class Coordinates:
    tau: float
    zeta: float


def to_lab_frame(c: Coordinates):
    """Return ``(t, z)`` for retarded coordinates ``(tau, zeta)``."""
    return c.tau + c.zeta, c.zeta


def from_lab_frame(t, z) -> Coordinates:
    return Coordinates(tau=t - z, zeta=z)


def populations(state) -> tuple:
    """Level populations ``(P1, P2, P3)`` of a normalized pure state.

    Accepts an :class:`AtomicState` or an array whose last axis holds the
    three amplitudes; for arrays the result is a tuple of arrays.
    """
    if isinstance(state, AtomicState):
        p = np.abs(state.amplitudes) ** 2
        return float(p[0]), float(p[1]), float(p[2])
    a = np.asarray(state, dtype=complex)
    p = np.abs(a) ** 2
    norm = p.sum(axis=-1)
    if np.max(np.abs(norm - 1)) > NORM_TOL:
        raise NormalizationError(
            f"state norm deviates from 1 by {np.max(np.abs(norm - 1)):.3e}"
        )
    return p[..., 0], p[..., 1], p[..., 2]


@dataclass(frozen=True)
class UnitSystem:
    """Scalings between dimensionless and laboratory quantities.

    ``t_p`` is the time unit of ``tau``; the unit of ``zeta`` is the light
    travel time over one slowed pulse length, ``group_velocity_ref * t_p``.
    Optional lab constants only feed :meth:`nu0_from_lab`.
    """

    t_p: float = 1e-6
    group_velocity_ref: float = 1e-7
    mu_a: float | None = None
    mu_b: float | None = None
    atom_density: float | None = None
    carrier_frequency: float | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def zeta_unit_seconds(self) -> float:
        return self.group_velocity_ref * self.t_p

    def tau_to_seconds(self, tau):
        return np.asarray(tau) * self.t_p

    def seconds_to_tau(self, seconds):
        return np.asarray(seconds) / self.t_p

    def zeta_to_meters(self, zeta):
        return np.asarray(zeta) * SPEED_OF_LIGHT * self.zeta_unit_seconds

    def meters_to_zeta(self, meters):
        return np.asarray(meters) / (SPEED_OF_LIGHT * self.zeta_unit_seconds)

    def rabi_to_hz(self, omega):
        return np.asarray(omega) / self.t_p

    def hz_to_rabi(self, hz):
        return np.asarray(hz) * self.t_p

    def nu0_from_lab(self) -> float:
        """Dimensionless coupling from ``n_A |mu|^2 omega / eps0`` (SI)."""
        if None in (self.mu_a, self.atom_density, self.carrier_frequency):
            raise ValidationError("mu_a, atom_density and carrier_frequency are required")
        nu_si = self.atom_density * self.mu_a**2 * self.carrier_frequency / VACUUM_PERMITTIVITY
        return nu_si * self.t_p * self.zeta_unit_seconds


def pulse_length_meters(units: UnitSystem) -> float:
    """Spatial length of the slowed pulse, ``v_g * t_p``."""
    return units.group_velocity_ref * SPEED_OF_LIGHT * units.t_p


def is_close_unit(x: float, tol: float = NORM_TOL) -> bool:
    return math.isclose(x, 1.0, abs_tol=tol)
