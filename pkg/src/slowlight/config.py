"""Scenario files: a small TOML document describing one run.

Every key is optional; defaults reproduce the constant-background slow
soliton with nu0 = 4.5, Omega0 = 3 and lambda0 = 4.1i.  Complex numbers may be
written as a number, a ``[re, im]`` pair or a string such as ``"-4.1j"``.

Example::

    [spectral]
    lambda0 = "-4.1j"
    [background]
    kind = "exponential"
    alpha = 4.0
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .background import (
    BackgroundProfile,
    Constant,
    ExponentialSwitch,
    StepOff,
    TanhSwitch,
    load_tabulated,
)
from .errors import ConfigError, SlowLightError
from .model import PhysicalParams, SpectralConfig

FAMILIES = ("general", "slow", "fast", "zero-background", "time-dependent")
METHODS = ("closed-form", "ode", "iterative", "adiabatic")
PROFILE_KINDS = ("constant", "exponential", "step", "tanh", "tabulated")
OBSERVABLES = ("velocity", "width", "stopping", "zs")
VERIFICATIONS = ("riccati", "pde", "zero_curvature", "oracle")


@dataclass
class GridSpec:
    tau_min: float = -6.0
    tau_max: float = 6.0
    n_tau: int = 121
    zeta_min: float = -10.0
    zeta_max: float = 30.0
    n_zeta: int = 401

    @property
    def tau(self):
        return np.linspace(self.tau_min, self.tau_max, self.n_tau)

    @property
    def zeta(self):
        return np.linspace(self.zeta_min, self.zeta_max, self.n_zeta)


@dataclass
class ProfileSpec:
    kind: str = "constant"
    alpha: float = 4.0
    T1: float = 1.0
    T: float = 4.0
    amplitude: float = 1.5
    rate: float = 2.0
    center: float = 0.0
    path: str | None = None
    asymptote_left: complex | None = None
    asymptote_right: complex | None = None


@dataclass
class Scenario:
    """Parsed and validated scenario."""

    params: PhysicalParams = field(default_factory=PhysicalParams)
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    profile: ProfileSpec = field(default_factory=ProfileSpec)
    family: str = "slow"
    method: str = "closed-form"
    grid: GridSpec = field(default_factory=GridSpec)
    verify: dict = field(default_factory=lambda: {k: False for k in VERIFICATIONS})
    observables: dict = field(default_factory=lambda: {k: False for k in OBSERVABLES})
    output_dir: str = "out"
    fieldmap_name: str = "fieldmap.csv"
    summary_name: str = "summary.json"
    source: str | None = None

    def build_profile(self) -> BackgroundProfile:
        return build_profile(self.profile, self.params)

    def echo(self) -> dict:
        """Plain-data echo of all parameters for the JSON summary."""
        sp = self.spectral
        return {
            "params": {k: v for k, v in asdict(self.params).items()},
            "spectral": {
                "lambda0": [sp.lambda0.real, sp.lambda0.imag],
                "c1_phase": sp.c1_phase,
                "c2": [complex(sp.c2).real, complex(sp.c2).imag],
                "c3": [complex(sp.c3).real, complex(sp.c3).imag],
            },
            "background": {k: _plain(v) for k, v in asdict(self.profile).items()},
            "family": self.family,
            "method": self.method,
            "grid": asdict(self.grid),
            "verify": dict(self.verify),
            "observables": dict(self.observables),
        }

    def with_value(self, name: str, value) -> "Scenario":
        """Copy with one dotted parameter replaced (used by sweeps)."""
        section, _, key = name.partition(".")
        if not key:
            raise ConfigError("sweep parameter must be 'section.key'", field=name)
        if section == "physics":
            return replace(self, params=_rebuild(PhysicalParams, self.params, key, value, name))
        if section == "spectral":
            if key in ("lambda0", "c2", "c3"):
                value = parse_complex(value, name)
            return replace(self, spectral=_rebuild(SpectralConfig, self.spectral, key, value, name))
        if section == "background":
            if key not in {f.name for f in fields(ProfileSpec)}:
                raise ConfigError("unknown background key", field=name)
            new = replace(self.profile, **{key: value})
            out = replace(self, profile=new)
            validate(out)
            return out
        raise ConfigError("only physics/spectral/background keys can be swept", field=name)


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _rebuild(cls, obj, key, value, name):
    names = {f.name for f in fields(cls)}
    if key not in names:
        raise ConfigError(f"unknown key '{key}'", field=name)
    try:
        return replace(obj, **{key: value})
    except SlowLightError as exc:
        raise ConfigError(str(exc), field=name) from None


def parse_complex(value, name="value") -> complex:
    if isinstance(value, bool):
        raise ConfigError("expected a number", field=name)
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(f"cannot read {value!r} as a complex number", field=name)


def parse_float(value, name) -> float:
    if isinstance(value, bool):
        raise ConfigError("expected a real number", field=name)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    raise ConfigError(f"expected a real number, got {value!r}", field=name)


def _key_lines(text: str) -> dict:
    """Map dotted key paths to the line where they are assigned."""
    out = {}
    section = ""
    for no, line in enumerate(text.splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        m = re.match(r"^\[([^\]]+)\]$", s)
        if m:
            section = m.group(1).strip()
            out.setdefault(section, no)
            continue
        m = re.match(r"^([A-Za-z0-9_\-]+)\s*=", s)
        if m:
            out[f"{section}.{m.group(1)}" if section else m.group(1)] = no
    return out


_ALLOWED = {
    "physics": {"nu0", "delta", "omega0", "k_phase", "x_excited"},
    "spectral": {"lambda0", "c1_phase", "c2", "c3"},
    "background": {f.name for f in fields(ProfileSpec)},
    "solution": {"family", "method"},
    "grid": {"tau", "zeta"},
    "verify": set(VERIFICATIONS),
    "observables": set(OBSERVABLES),
    "output": {"dir", "fieldmap", "summary"},
}


def parse_scenario(text: str, source: str | None = None) -> Scenario:
    """Parse and validate scenario text; raises ConfigError with field/line."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"malformed config: {exc}", line=int(m.group(1)) if m else None) from None
    lines = _key_lines(text)

    def err(msg, path):
        return ConfigError(msg, field=path, line=lines.get(path))

    for sec, body in doc.items():
        if sec not in _ALLOWED:
            raise err("unknown section", sec)
        if not isinstance(body, dict):
            raise err("expected a table", sec)
        for key in body:
            if key not in _ALLOWED[sec]:
                raise err("unknown key", f"{sec}.{key}")

    def get(sec, key, default):
        return doc.get(sec, {}).get(key, default)

    def num(sec, key, default):
        path = f"{sec}.{key}"
        try:
            v = get(sec, key, default)
            return None if v is None else parse_float(v, path)
        except ConfigError as exc:
            raise err(str(exc).split("] ", 1)[-1], path) from None

    def cplx(sec, key, default):
        path = f"{sec}.{key}"
        try:
            v = get(sec, key, default)
            return None if v is None else parse_complex(v, path)
        except ConfigError as exc:
            raise err(str(exc).split("] ", 1)[-1], path) from None

    def guarded(builder, sec):
        try:
            return builder()
        except ConfigError:
            raise
        except SlowLightError as exc:
            raise err(str(exc), sec) from None

    params = guarded(lambda: PhysicalParams(
        nu0=num("physics", "nu0", 4.5), delta=num("physics", "delta", 0.0),
        omega0=num("physics", "omega0", 3.0), k_phase=num("physics", "k_phase", 0.0),
        x_excited=num("physics", "x_excited", None)), "physics")
    c1p = num("spectral", "c1_phase", 0.0)
    spectral = guarded(lambda: SpectralConfig(
        lambda0=cplx("spectral", "lambda0", 4.1j), c1_phase=c1p,
        c2=cplx("spectral", "c2", 1.0), c3=cplx("spectral", "c3", 0.0)), "spectral")

    kind = get("background", "kind", "constant")
    if kind not in PROFILE_KINDS:
        raise err(f"kind must be one of {PROFILE_KINDS}", "background.kind")
    prof = ProfileSpec(
        kind=kind,
        alpha=num("background", "alpha", 4.0),
        T1=num("background", "T1", 1.0),
        T=num("background", "T", 4.0),
        amplitude=num("background", "amplitude", 1.5),
        rate=num("background", "rate", 2.0),
        center=num("background", "center", 0.0),
        path=get("background", "path", None),
        asymptote_left=cplx("background", "asymptote_left", None),
        asymptote_right=cplx("background", "asymptote_right", None),
    )
    if prof.path is not None and source is not None and not Path(prof.path).is_absolute():
        prof.path = str(Path(source).parent / prof.path)

    family = get("solution", "family", "slow")
    if family not in FAMILIES:
        raise err(f"family must be one of {FAMILIES}", "solution.family")
    method = get("solution", "method", "closed-form")
    if method not in METHODS:
        raise err(f"method must be one of {METHODS}", "solution.method")

    grid = GridSpec()
    for axis in ("tau", "zeta"):
        spec = get("grid", axis, None)
        if spec is None:
            continue
        path = f"grid.{axis}"
        if (not isinstance(spec, list) or len(spec) != 3
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in spec)):
            raise err("expected [min, max, points]", path)
        lo, hi, n = spec
        if n != int(n) or n < 1:
            raise err("number of points must be a positive integer (empty grid)", path)
        if n > 1 and not hi > lo:
            raise err("max must exceed min", path)
        setattr(grid, f"{axis}_min", float(lo))
        setattr(grid, f"{axis}_max", float(hi))
        setattr(grid, f"n_{axis}", int(n))

    def flags(sec, names):
        out = {}
        for k in names:
            v = get(sec, k, False)
            if not isinstance(v, bool):
                raise err("expected true or false", f"{sec}.{k}")
            out[k] = v
        return out

    sc = Scenario(
        params=params, spectral=spectral, profile=prof, family=family, method=method,
        grid=grid, verify=flags("verify", VERIFICATIONS),
        observables=flags("observables", OBSERVABLES),
        output_dir=get("output", "dir", "out"),
        fieldmap_name=get("output", "fieldmap", "fieldmap.csv"),
        summary_name=get("output", "summary", "summary.json"),
        source=source,
    )
    validate(sc, lines)
    return sc


def load_scenario(path) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text(), source=str(p))


def build_profile(spec: ProfileSpec, params: PhysicalParams) -> BackgroundProfile:
    om = params.omega0
    if spec.kind == "constant":
        return Constant(om, params.k_phase)
    if spec.kind == "exponential":
        return ExponentialSwitch(om, spec.alpha, spec.T1, spec.T)
    if spec.kind == "step":
        return StepOff(om)
    if spec.kind == "tanh":
        return TanhSwitch(spec.amplitude, spec.rate, spec.center)
    if spec.kind == "tabulated":
        if not spec.path:
            raise ConfigError("tabulated profile needs a path", field="background.path")
        return load_tabulated(spec.path, spec.asymptote_left, spec.asymptote_right)
    raise ConfigError(f"unknown profile kind '{spec.kind}'", field="background.kind")


def validate(sc: Scenario, lines: dict | None = None) -> None:
    """Family/profile/method compatibility, checked before any computation."""
    lines = lines or {}

    def err(msg, path):
        return ConfigError(msg, field=path, line=lines.get(path))

    try:
        profile = sc.build_profile()
    except ConfigError as exc:
        field_ = exc.field or "background"
        raise ConfigError(str(exc).split("] ", 1)[-1], field=field_,
                          line=exc.line or lines.get(field_)) from None
    except SlowLightError as exc:
        raise err(str(exc), "background") from None
    fam, kind = sc.family, sc.profile.kind
    if fam in ("slow", "fast") and kind != "constant":
        raise err(f"family '{fam}' requires a constant background", "solution.family")
    if fam == "zero-background" and (kind != "constant" or sc.params.omega0 != 0):
        raise err("zero-background family requires a constant background with omega0 = 0",
                  "solution.family")
    if fam == "time-dependent" and sc.params.k_phase != 0:
        raise err("time-dependent family assumes k_phase = 0", "physics.k_phase")
    if fam == "general" and kind != "constant" and sc.spectral.c3 != 0:
        raise err("c3 != 0 is only supported on a constant background", "spectral.c3")
    if fam == "fast" and sc.spectral.c3 == 0:
        raise err("fast family needs c3 != 0", "spectral.c3")
    if kind == "constant" and fam != "zero-background":
        try:
            sc.spectral.require_solitonic(sc.params.omega0)
        except SlowLightError as exc:
            raise err(str(exc), "spectral.lambda0") from None
    if sc.method == "closed-form" and kind in ("tanh", "tabulated"):
        raise err(f"no closed form for '{kind}' profiles; use method = \"ode\"", "solution.method")
    if sc.method == "iterative" and not (sc.spectral.lambda0.imag < 0 or kind == "constant"):
        raise err("iterative method needs Im(lambda0) < 0", "solution.method")
    if (kind == "exponential" and math.isfinite(sc.profile.T1) and sc.spectral.lambda0.imag > 0
            and sc.method == "closed-form"):
        raise err("cutoff/restart closed form needs Im(lambda0) < 0", "spectral.lambda0")
    if sc.observables.get("stopping") and profile.omega_plus != 0:
        raise err("stopping distance needs a background that vanishes as tau -> inf",
                  "observables.stopping")
    return None
