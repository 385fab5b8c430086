"""Command-line entry point: run, figure, selfcheck, sweep.

Exit codes: 0 success, 1 failed self-check, 2 validation, 3 numeric, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import Scenario, load_scenario
from .darboux import (
    FundamentalMatrix,
    dressed_general,
    fast_soliton,
    normalization_exact,
    normalization_printed,
    one_soliton_timedep,
    slow_soliton,
    zero_background_memory,
)
from .errors import ConfigError, NumericError, SlowLightError, ValidationError
from .fieldmap import build_fieldmap, ensure_writable
from .figures import FIGURE_IDS, emit_figure_data
from .model import PhysicalParams, SpectralConfig
from .observables import (
    group_velocity,
    memory_bit_width,
    small_field_velocities,
    stopping_distance,
    track_peak,
    zs_functionals,
)
from .oracle import (
    Candidate,
    OracleGrid,
    PerturbedCandidate,
    nonlinear_residual,
    propagation_error,
    zero_curvature_residual,
)
from .scattering import (
    adiabatic_solution,
    closed_form,
    constant_background,
    riccati_residual,
    solve_integral_iteration,
    solve_riccati_ode,
)
from .selfcheck import run_selfcheck

log = logging.getLogger("slowlight")

EXIT_OK, EXIT_CHECK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4
ITERATIVE_STEP = 1e-3


# ---------------------------------------------------------------- building

def build_scattering(sc: Scenario, profile=None):
    """Scattering solution over the scenario's tau range by the chosen method."""
    profile = profile or sc.build_profile()
    lam = sc.spectral.lambda0
    g = sc.grid
    lo, hi = g.tau_min - 1.0, g.tau_max + 1.0
    if sc.method == "closed-form":
        return closed_form(profile, lam)
    if sc.method == "ode":
        return solve_riccati_ode(profile, lam, np.linspace(lo, hi, max(g.n_tau, 2) * 4))
    if sc.method == "iterative":
        n = int(math.ceil((hi - lo) / ITERATIVE_STEP)) + 1
        return solve_integral_iteration(profile, lam, np.linspace(lo, hi, n))
    return adiabatic_solution(profile, lam, np.linspace(lo, hi, 2001))


def build_solution(sc: Scenario):
    """DressedSolution for the scenario's family."""
    p, s = sc.params, sc.spectral
    profile = sc.build_profile()
    if sc.family == "slow":
        return slow_soliton(p, s, profile)
    if sc.family == "fast":
        return fast_soliton(p, s, profile)
    if sc.family == "zero-background":
        return zero_background_memory(p, s, profile)
    if sc.family == "general" and profile.is_constant:
        return dressed_general(p, s, profile=profile)
    scat = build_scattering(sc, profile)
    if sc.family == "general":
        return dressed_general(p, s, scattering=scat, profile=profile)
    return one_soliton_timedep(p, s, scat, profile)


# ---------------------------------------------------------------- diagnostics

def velocity_diagnostics(params: PhysicalParams, spectral: SpectralConfig) -> dict:
    """Exact weak-field speed (Omega0 = eps0 / 10, Delta = 0 kept from params)
    against the two competing closed estimates."""
    eps = spectral.epsilon0
    om = 0.1 * eps
    lam = complex(0, math.copysign(eps, spectral.lambda0.imag))
    w0, _ = constant_background(lam, om)
    p = replace(params, omega0=om)
    exact = float(group_velocity(p, replace(spectral, lambda0=lam), w0))
    est = small_field_velocities(p)
    return {
        "omega0": om,
        "epsilon0": eps,
        "exact": exact,
        "estimate_half": est["half"],
        "estimate_full": est["full"],
        "rel_dev_half": exact / est["half"] - 1,
        "rel_dev_full": exact / est["full"] - 1,
        "supported": "half" if abs(exact / est["half"] - 1) < abs(exact / est["full"] - 1) else "full",
    }


def normalization_flag(sol, tau, zeta) -> dict:
    """Largest relative gap between the printed and the exact normalization."""
    fm = sol.info.get("fundamental")
    if fm is None:
        try:
            fm = FundamentalMatrix(sol.params, sol.spectral.lambda0, sol.scattering,
                                   profile=sol.profile) if sol.params.omega0 else None
        except SlowLightError:
            fm = None
    if fm is None:
        return {"available": False}
    T, Z = np.meshgrid(tau[:: max(tau.size // 20, 1)], zeta[:: max(zeta.size // 20, 1)], indexing="ij")
    with np.errstate(over="ignore", invalid="ignore"):
        a = normalization_exact(fm, sol.spectral, T, Z)
        b = normalization_printed(fm, sol.spectral, T, Z)
        rel = np.abs(a - b) / np.abs(a)
    rel = rel[np.isfinite(rel)]
    gap = float(rel.max()) if rel.size else float("nan")
    return {"available": True, "max_relative_gap": gap, "printed_formula_deviates": bool(gap > 1e-8)}


def _soliton_centre(fmap):
    a = fmap.channel("abs_omega_a")
    i, j = np.unravel_index(int(np.argmax(a)), a.shape)
    return float(fmap.tau[i]), float(fmap.zeta[j])


def run_verifications(sc: Scenario, sol, fmap) -> dict:
    out = {}
    tc, zc = _soliton_centre(fmap)
    if sc.verify.get("riccati"):
        scat = sol.scattering
        if scat is None:
            scat = closed_form(sc.build_profile(), sc.spectral.lambda0) if sc.family != "zero-background" else None
        if scat is None:
            out["riccati"] = {"skipped": "no scattering data for this family"}
        else:
            rw, rz = riccati_residual(scat, np.linspace(sc.grid.tau_min, sc.grid.tau_max, 1000),
                                      sc.build_profile())
            out["riccati"] = {"w": rw, "z": rz}
    if sc.verify.get("pde"):
        grid = OracleGrid(tc - 1, tc + 1, 0.02, zc - 1, zc + 1, 0.02)
        cand = Candidate.from_dressed(sol)
        rep = nonlinear_residual(cand, grid, levels=3)
        ctrl = nonlinear_residual(PerturbedCandidate(cand), grid, levels=3)
        out["pde"] = rep.as_dict()
        out["pde"]["perturbed_control_finest"] = ctrl.total()
    if sc.verify.get("zero_curvature"):
        grid = OracleGrid(tc - 1, tc + 1, 0.02, zc - 1, zc + 1, 0.02)
        out["zero_curvature"] = zero_curvature_residual(sol, grid, [0.7 + 0.3j, -1.1 + 2.0j], 3).as_dict()
    if sc.verify.get("oracle"):
        grid = OracleGrid(tc - 3, tc + 3, 0.01, zc - 0.25, zc + 0.25, 0.005)
        err, run = propagation_error(sol, grid)
        out["oracle"] = {"max_field_error": err, "trace_drift": run.trace_drift,
                         "hermiticity_drift": run.hermiticity_drift}
    return out


def run_observables(sc: Scenario, sol, fmap) -> dict:
    out = {}
    p, s = sc.params, sc.spectral
    if sc.observables.get("velocity"):
        v = {}
        if sc.family in ("slow", "general") and sc.profile.kind == "constant":
            w0, _ = constant_background(s.lambda0, p.omega0)
            v["predicted"] = float(group_velocity(p, s, w0))
        try:
            tr = track_peak(fmap)
            v["tracked"] = tr.velocity
            v["tracked_err"] = tr.velocity_err
        except NumericError as exc:
            v["tracked_error"] = str(exc)
        v["factor2_check"] = velocity_diagnostics(p, s)
        out["velocity"] = v
    if sc.observables.get("width"):
        out["width"] = {"predicted": memory_bit_width(p, s)}
    if sc.observables.get("stopping"):
        scat = sol.scattering if sol.scattering is not None else build_scattering(sc)
        out["stopping"] = stopping_distance(p, s, scat).as_dict()
    if sc.observables.get("zs"):
        i1, i2 = zs_functionals(sc.build_profile(), sc.grid.tau_min)
        out["zs"] = {"I1": i1, "I2": i2}
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def run_scenario(sc: Scenario, out_dir=None) -> dict:
    """Evaluate the scenario, write the field map CSV and JSON summary."""
    t0 = time.perf_counter()
    d = ensure_writable(out_dir or sc.output_dir)
    sol = build_solution(sc)
    fmap = build_fieldmap(sol, sc.grid.tau, sc.grid.zeta)
    csv_path = Path(d) / sc.fieldmap_name
    fmap.to_csv(csv_path)
    summary = {
        "version": __version__,
        "scenario": sc.echo(),
        "population_defect": fmap.population_defect(),
        "observables": run_observables(sc, sol, fmap),
        "verifications": run_verifications(sc, sol, fmap),
        "diagnostics": {
            "velocity_factor2": velocity_diagnostics(sc.params, sc.spectral),
            "normalization_formula": normalization_flag(sol, sc.grid.tau, sc.grid.zeta),
        },
        "fieldmap": str(csv_path),
    }
    summary["wall_time_s"] = time.perf_counter() - t0
    js = Path(d) / sc.summary_name
    js.write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    return summary


# ---------------------------------------------------------------- verbs

def _cmd_run(args):
    sc = load_scenario(args.config)
    summary = run_scenario(sc, args.out)
    print(f"wrote {summary['fieldmap']} (wall time {summary['wall_time_s']:.2f} s)")
    return EXIT_OK


def _cmd_figure(args):
    if args.id not in FIGURE_IDS:
        raise ValidationError(f"unknown figure id {args.id}; known ids are {list(FIGURE_IDS)}")
    for path in emit_figure_data(args.id, args.out, args.resolution):
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_selfcheck(args):
    rep = run_selfcheck(bessel_terms=args.bessel_terms)
    print(f"{'all checks passed' if rep.ok else 'self-check FAILED'} in {rep.seconds:.1f} s")
    return EXIT_OK if rep.ok else EXIT_CHECK


def _parse_values(text, name):
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise ConfigError("empty value list", field=name)
    if name.endswith(("lambda0", "c2", "c3")):
        return vals
    try:
        return [float(v) for v in vals]
    except ValueError:
        raise ConfigError(f"cannot read '{text}' as numbers", field=name) from None


def _cmd_sweep(args):
    base = load_scenario(args.config)
    values = _parse_values(args.values, args.param)
    scenarios = [base.with_value(args.param, v) for v in values]  # validate all first
    root = ensure_writable(args.out or base.output_dir)
    rows = []
    for i, (v, sc) in enumerate(zip(values, scenarios)):
        sub = Path(root) / f"{i:03d}"
        summary = run_scenario(sc, sub)
        rows.append({"index": i, "value": v, "dir": str(sub), "observables": summary["observables"]})
        print(f"{args.param} = {v}: wrote {sub}")
    (Path(root) / "sweep.json").write_text(
        json.dumps(_jsonable({"param": args.param, "runs": rows}), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _origin(exc) -> str:
    """Module of the innermost package frame that raised ``exc``."""
    tb, name = exc.__traceback__, "slowlight"
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("slowlight"):
            name = mod
        tb = tb.tb_next
    return name


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slowlight", description="Slow-light soliton scenarios.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)
    r = sub.add_parser("run", help="evaluate a scenario file")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="output directory (overrides the config)")
    r.set_defaults(func=_cmd_run)
    f = sub.add_parser("figure", help="emit the data behind a figure")
    f.add_argument("id", type=int)
    f.add_argument("--out", default="figures")
    f.add_argument("--resolution", type=float, default=1.0)
    f.set_defaults(func=_cmd_figure)
    c = sub.add_parser("selfcheck", help="fast release gate")
    c.add_argument("--bessel-terms", type=int, default=120, help=argparse.SUPPRESS)
    c.set_defaults(func=_cmd_selfcheck)
    s = sub.add_parser("sweep", help="run a scenario for several values of one parameter")
    s.add_argument("config")
    s.add_argument("--param", required=True, help="dotted name, e.g. background.alpha")
    s.add_argument("--values", required=True, help="comma-separated list")
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric error in {_origin(exc)} ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
