"""Controlling-field profiles Omega(tau) and their asymptotics.

Jumps follow the Heaviside convention Theta(0) = 1/2, so a profile evaluated
exactly at a switch time returns the midpoint of the two one-sided limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError, ValidationError


def heaviside(x):
    return np.heaviside(x, 0.5)


class BackgroundProfile:
    """Common interface of all controlling-field variants."""

    kind = "abstract"

    def __call__(self, tau):
        return self.evaluate(tau)

    def evaluate(self, tau):  # pragma: no cover - interface
        raise NotImplementedError

    def derivative(self, tau):
        """d Omega / d tau away from jumps."""
        raise NotImplementedError

    def asymptotics(self) -> tuple:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple:
        """Finite switch times where the profile may jump or kink."""
        return ()

    @property
    def omega_minus(self) -> complex:
        return self.asymptotics()[0]

    @property
    def omega_plus(self) -> complex:
        return self.asymptotics()[1]

    @property
    def is_constant(self) -> bool:
        return False

    def left_edge(self) -> float:
        """Time before which the profile equals its left asymptote exactly."""
        return -math.inf


@dataclass(frozen=True)
class Constant(BackgroundProfile):
    """Time-independent field; ``k_phase`` is spatial-phase metadata only."""

    omega0: float = 3.0
    k_phase: float = 0.0
    kind = "constant"

    def __post_init__(self):
        if not self.omega0 >= 0:
            raise ValidationError("omega0 must be non-negative")

    def evaluate(self, tau):
        return np.full(np.shape(tau), complex(self.omega0))[()]

    def derivative(self, tau):
        return np.zeros(np.shape(tau), complex)[()]

    def asymptotics(self):
        return complex(self.omega0), complex(self.omega0)

    @property
    def is_constant(self):
        return True

    def left_edge(self):
        return math.inf


@dataclass(frozen=True)
class ExponentialSwitch(BackgroundProfile):
    """Constant field that decays as exp(-alpha tau) on (0, T1), is cut to
    zero on (T1, T) and restored for tau > T.

    ``T1 = T = inf`` gives a pure exponential decay with no cutoff, and
    ``T = inf`` alone gives a cutoff without restart.
    """

    omega0: float = 3.0
    alpha: float = 4.0
    T1: float = 1.0
    T: float = 4.0
    kind = "exponential"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if not self.omega0 >= 0:
            raise ValidationError("omega0 must be non-negative")
        pure_decay = math.isinf(self.T1) and math.isinf(self.T)
        if not pure_decay and not (0 < self.T1 < self.T):
            raise ValidationError(f"need 0 < T1 < T, got T1={self.T1}, T={self.T}")

    def evaluate(self, tau):
        t = np.asarray(tau, dtype=float)
        decay = np.exp(-self.alpha * np.maximum(t, 0.0))
        if math.isinf(self.T1):
            mid = heaviside(t) * decay
        else:
            mid = heaviside(t) * heaviside(self.T1 - t) * decay
        restart = 0.0 if math.isinf(self.T) else heaviside(t - self.T)
        out = self.omega0 * (heaviside(-t) + mid + restart)
        return np.asarray(out, complex)[()]

    def derivative(self, tau):
        t = np.asarray(tau, dtype=float)
        inside = (t > 0) & (t < self.T1)
        d = np.where(inside, -self.alpha * self.omega0 * np.exp(-self.alpha * np.maximum(t, 0)), 0.0)
        return np.asarray(d, complex)[()]

    def asymptotics(self):
        right = 0.0 if math.isinf(self.T) else self.omega0
        return complex(self.omega0), complex(right)

    @property
    def breakpoints(self):
        return tuple(b for b in (0.0, self.T1, self.T) if math.isfinite(b))

    def left_edge(self):
        return 0.0


@dataclass(frozen=True)
class StepOff(BackgroundProfile):
    """Field ``omega0`` switched off instantly at tau = 0."""

    omega0: float = 3.0
    kind = "step"

    def __post_init__(self):
        if not self.omega0 >= 0:
            raise ValidationError("omega0 must be non-negative")

    def evaluate(self, tau):
        t = np.asarray(tau, dtype=float)
        return np.asarray(self.omega0 * heaviside(-t), complex)[()]

    def derivative(self, tau):
        return np.zeros(np.shape(tau), complex)[()]

    def asymptotics(self):
        return complex(self.omega0), 0j

    @property
    def breakpoints(self):
        return (0.0,)

    def left_edge(self):
        return 0.0


@dataclass(frozen=True)
class TanhSwitch(BackgroundProfile):
    """Smooth switch-off ``amplitude * (1 - tanh(rate * (tau - center)))``."""

    amplitude: float = 1.5
    rate: float = 2.0
    center: float = 0.0
    kind = "tanh"

    def __post_init__(self):
        if not self.rate > 0:
            raise ValidationError("rate must be positive")
        if not self.amplitude >= 0:
            raise ValidationError("amplitude must be non-negative")

    def evaluate(self, tau):
        t = np.asarray(tau, dtype=float)
        return np.asarray(self.amplitude * (1 - np.tanh(self.rate * (t - self.center))), complex)[()]

    def derivative(self, tau):
        t = np.asarray(tau, dtype=float)
        c = np.cosh(np.clip(self.rate * (t - self.center), -350, 350))
        return np.asarray(-self.amplitude * self.rate / c**2, complex)[()]

    def asymptotics(self):
        return complex(2 * self.amplitude), 0j


@dataclass(frozen=True)
class Tabulated(BackgroundProfile):
    """Samples joined by monotone piecewise-cubic (PCHIP) interpolation.

    Outside the sample range the profile takes the declared asymptotic values;
    a side whose asymptote is ``None`` raises :class:`DomainError`.
    """

    tau: np.ndarray
    omega: np.ndarray
    asymptote_left: complex | None = None
    asymptote_right: complex | None = None
    _re: PchipInterpolator = field(init=False, repr=False, compare=False)
    _im: PchipInterpolator = field(init=False, repr=False, compare=False)
    kind = "tabulated"

    def __post_init__(self):
        t = np.asarray(self.tau, dtype=float)
        om = np.asarray(self.omega, dtype=complex)
        if t.ndim != 1 or t.shape != om.shape or t.size < 2:
            raise ValidationError("tabulated profile needs matching 1-D arrays with >= 2 samples")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("tabulated tau samples must be strictly increasing")
        for side, val, end in (
            ("left", self.asymptote_left, om[0]),
            ("right", self.asymptote_right, om[-1]),
        ):
            if val is not None and abs(complex(val) - end) > 1e-9:
                raise ValidationError(
                    f"{side} asymptote {val} inconsistent with end sample {end}"
                )
        t.setflags(write=False)
        om.setflags(write=False)
        object.__setattr__(self, "tau", t)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "_re", PchipInterpolator(t, om.real, extrapolate=False))
        object.__setattr__(self, "_im", PchipInterpolator(t, om.imag, extrapolate=False))

    def _fill(self, t, inside_vals, what):
        lo, hi = self.tau[0], self.tau[-1]
        out = np.asarray(inside_vals, complex)
        left, right = t < lo, t > hi
        if np.any(left):
            if self.asymptote_left is None:
                raise DomainError(f"tau={t[left].min()} before tabulated range with no left asymptote")
            out[left] = complex(self.asymptote_left) if what == "value" else 0
        if np.any(right):
            if self.asymptote_right is None:
                raise DomainError(f"tau={t[right].max()} after tabulated range with no right asymptote")
            out[right] = complex(self.asymptote_right) if what == "value" else 0
        return out

    def evaluate(self, tau):
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        vals = np.nan_to_num(self._re(t)) + 1j * np.nan_to_num(self._im(t))
        out = self._fill(t, vals, "value")
        return out.reshape(np.shape(tau))[()]

    def derivative(self, tau):
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        vals = np.nan_to_num(self._re(t, 1)) + 1j * np.nan_to_num(self._im(t, 1))
        out = self._fill(t, vals, "derivative")
        return out.reshape(np.shape(tau))[()]

    def asymptotics(self):
        left = self.omega[0] if self.asymptote_left is None else self.asymptote_left
        right = self.omega[-1] if self.asymptote_right is None else self.asymptote_right
        return complex(left), complex(right)

    @property
    def breakpoints(self):
        return (float(self.tau[0]), float(self.tau[-1]))

    def left_edge(self):
        return float(self.tau[0]) if self.asymptote_left is not None else -math.inf


def load_tabulated(path, asymptote_left=None, asymptote_right=None) -> Tabulated:
    """Read ``tau re_omega [im_omega]`` rows; ``#`` starts a comment."""
    path = Path(path)
    rows = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ConfigError(f"expected 2 or 3 columns, got {len(parts)}", field=str(path), line=lineno)
            try:
                vals = [float(p) for p in parts]
            except ValueError as exc:
                raise ConfigError(str(exc), field=str(path), line=lineno) from None
            if len(vals) == 2:
                vals.append(0.0)
            rows.append(vals)
    if not rows:
        raise ConfigError("no samples found", field=str(path))
    arr = np.array(rows)
    return Tabulated(
        arr[:, 0], arr[:, 1] + 1j * arr[:, 2],
        asymptote_left=asymptote_left, asymptote_right=asymptote_right,
    )


def eval_profile(p: BackgroundProfile, tau):
    """Value of the controlling field at ``tau`` (scalar or array)."""
    return p.evaluate(tau)


def asymptotics(p: BackgroundProfile) -> tuple:
    """``(Omega(-inf), Omega(+inf))``."""
    return p.asymptotics()
