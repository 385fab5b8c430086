"""Data behind the published figures, as CSV bundles.

Figure ids:

1. reading a stored bit on an empty medium (Omega0 = 0)
2. knocking down a slow soliton with a fast one (c2 = c3 = 1, lambda0 = 4.1i)
3. |Omega_b|^2 versus t at z = 0, 6, 12 for the switch-off/restart scenario
4. |Omega_a|^2 map of the same scenario
5. P2 map of the same scenario (standing polarization flip)
6. exact versus adiabatic profiles for Omega = 0.5 exp(-4 tau), eps0 = 4.1
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .background import ExponentialSwitch
from .darboux import dressed_general, one_soliton_timedep, zero_background_memory
from .errors import ValidationError
from .fieldmap import FieldMap, build_fieldmap, ensure_writable
from .model import PhysicalParams, SpectralConfig
from .scattering import adiabatic_solution, constant_background, piecewise_scenario

FIGURE_IDS = (1, 2, 3, 4, 5, 6)
TITLES = {
    1: "reading",
    2: "knocking_down",
    3: "intensity_b_cuts",
    4: "intensity_a_map",
    5: "population_2_map",
    6: "exact_vs_adiabatic",
}

# switch-off/restart scenario shared by figures 3-5
STOP_LAMBDA = -4.1j
STOP_ALPHA = 4.0
STOP_T1 = 1.0
STOP_T = 4.0
STOP_ZETA = 6.0


@dataclass
class Curves:
    """Named columns of equal length, written as one CSV."""

    columns: dict

    def to_csv(self, path) -> None:
        names = list(self.columns)
        data = np.column_stack([np.asarray(self.columns[n], float) for n in names])
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for row in data:
                w.writerow([format(v, ".17g") for v in row])


def c2_for_stop(params: PhysicalParams, lam, zeta_stop: float) -> float:
    """|c2| placing the slow-soliton centre at ``zeta_stop`` when tau = 0."""
    w0, _ = constant_background(lam, params.omega0)
    rate = 0.5 * params.nu0 * (1 / (complex(lam) - params.delta)).imag
    return math.exp(-rate * zeta_stop - 0.5 * math.log1p(abs(w0) ** 2))


def stop_scenario(params: PhysicalParams | None = None):
    """Dressed slow soliton on the ExponentialSwitch(alpha=4, T1=1, T=4) background."""
    params = params or PhysicalParams()
    sc = piecewise_scenario(STOP_LAMBDA, params.omega0, STOP_ALPHA, STOP_T1, STOP_T)
    spectral = SpectralConfig(STOP_LAMBDA, c2=c2_for_stop(params, STOP_LAMBDA, STOP_ZETA))
    return one_soliton_timedep(params, spectral, sc)


def _lab_cut(sol, t, z):
    tau = np.asarray(t) - z
    return sol.fields(tau, np.full_like(tau, z))


def figure_data(fig_id: int, resolution: float = 1.0) -> dict:
    """Return {file stem: FieldMap | Curves} for the figure; ``resolution``
    scales the number of grid points."""
    if fig_id not in FIGURE_IDS:
        raise ValidationError(f"unknown figure id {fig_id}; known ids are {FIGURE_IDS}")

    def n(k):
        return max(int(k * resolution), 3)

    if fig_id == 1:
        p = PhysicalParams(omega0=0.0)
        sol = zero_background_memory(p, SpectralConfig(4.1j, c2=1, c3=1))
        fm = build_fieldmap(sol, np.linspace(-3, 3, n(121)), np.linspace(-10, 10, n(201)))
        return {"reading_map": fm}
    if fig_id == 2:
        p = PhysicalParams()
        sol = dressed_general(p, SpectralConfig(4.1j, c2=1, c3=1))
        fm = build_fieldmap(sol, np.linspace(-6, 6, n(121)), np.linspace(-10, 30, n(401)))
        return {"knocking_down_map": fm}
    if fig_id == 3:
        sol = stop_scenario()
        t = np.linspace(-15, 25, n(801))
        cols = {"t": t}
        for z in (0.0, 6.0, 12.0):
            _, ob = _lab_cut(sol, t, z)
            cols[f"abs2_omega_b_z{z:g}"] = np.abs(ob) ** 2
        return {"intensity_b_cuts": Curves(cols)}
    if fig_id in (4, 5):
        sol = stop_scenario()
        fm = build_fieldmap(sol, np.linspace(-15, 15, n(301)), np.linspace(-2, 14, n(321)))
        return {TITLES[fig_id]: fm}
    # fig_id == 6
    lam = -4.1j
    p = PhysicalParams(omega0=0.5)
    prof = ExponentialSwitch(0.5, 4.0, math.inf, math.inf)
    tau = np.linspace(-1, 3, n(401))
    exact_sc = piecewise_scenario(lam, 0.5, 4.0, math.inf, math.inf)
    adia_sc = adiabatic_solution(prof, lam, np.linspace(-1.5, 3.5, 1001))
    spectral = SpectralConfig(lam)
    exact = one_soliton_timedep(p, spectral, exact_sc)
    adia = one_soliton_timedep(p, spectral, adia_sc)
    zeta = np.zeros_like(tau)
    ea, _ = exact.fields(tau, zeta)
    aa, _ = adia.fields(tau, zeta)
    we, wa = exact_sc.w(tau), adia_sc.w(tau)
    cols = {
        "tau": tau,
        "re_w_exact": we.real, "im_w_exact": we.imag,
        "re_w_adiabatic": wa.real, "im_w_adiabatic": wa.imag,
        "abs_omega_a_exact": np.abs(ea), "abs_omega_a_adiabatic": np.abs(aa),
    }
    return {"exact_vs_adiabatic": Curves(cols)}


def emit_figure_data(fig_id: int, out_dir, resolution: float = 1.0) -> list:
    """Write the figure bundle into ``out_dir``; returns the written paths."""
    if fig_id not in FIGURE_IDS:
        raise ValidationError(f"unknown figure id {fig_id}; known ids are {FIGURE_IDS}")
    d = ensure_writable(out_dir)
    written = []
    for stem, obj in figure_data(fig_id, resolution).items():
        path = Path(d) / f"fig{fig_id}_{stem}.csv"
        obj.to_csv(path)
        written.append(path)
    return written


def adiabatic_deviation(omega0=0.5, alpha=4.0, lam=-4.1j, tau=None) -> float:
    """Sup-norm relative deviation of the adiabatic |Omega_a| profile from the exact one."""
    tau = np.linspace(-1, 3, 2001) if tau is None else np.asarray(tau, float)
    p = PhysicalParams(omega0=omega0)
    prof = ExponentialSwitch(omega0, alpha, math.inf, math.inf)
    exact_sc = piecewise_scenario(lam, omega0, alpha, math.inf, math.inf)
    adia_sc = adiabatic_solution(prof, lam, np.linspace(tau[0] - 0.5, tau[-1] + 0.5, 1001))
    spectral = SpectralConfig(lam)
    zeta = np.zeros_like(tau)
    ea, _ = one_soliton_timedep(p, spectral, exact_sc).fields(tau, zeta)
    aa, _ = one_soliton_timedep(p, spectral, adia_sc).fields(tau, zeta)
    return float(np.max(np.abs(np.abs(ea) - np.abs(aa))) / np.max(np.abs(ea)))


__all__ = ["FIGURE_IDS", "Curves", "FieldMap", "emit_figure_data", "figure_data",
           "stop_scenario", "c2_for_stop", "adiabatic_deviation"]
