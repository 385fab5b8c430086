import math

import numpy as np
import pytest

from slowlight.background import ExponentialSwitch
from slowlight.darboux import FundamentalMatrix, dressed_general, one_soliton_timedep, slow_soliton
from slowlight.errors import InstabilityError, PoleError, ResolutionError, ValidationError
from slowlight.model import PhysicalParams, SpectralConfig
from slowlight.oracle import (
    Candidate,
    OracleGrid,
    PerturbedCandidate,
    integrate_maxwell_bloch,
    linear_solution_residual,
    nonlinear_residual,
    propagation_error,
    seed_candidate,
    zero_curvature_residual,
)
from slowlight.scattering import piecewise_scenario

GRID = OracleGrid(-1, 1, 0.02, -1, 1, 0.02)


def test_grid_validation():
    with pytest.raises(ValidationError):
        OracleGrid(0, 1, 0, 0, 1, 0.1)
    with pytest.raises(ValidationError):
        OracleGrid(1, 0, 0.1, 0, 1, 0.1)
    g = GRID.refined()
    assert g.h_tau == 0.01 and g.level == 1 and g.tau.size == 201


@pytest.mark.parametrize("spectral", [SpectralConfig(4.1j), SpectralConfig(-4.1j, 0.2, 1, 1),
                                      SpectralConfig(0.5 + 4.1j, 0.0, 1, 0.5)])
def test_dressed_solutions_second_order(params, spectral):
    rep = nonlinear_residual(dressed_general(params, spectral), GRID, levels=3)
    orders = rep.orders()["total"]
    assert all(abs(o - 2) < 0.2 for o in orders)
    assert rep.total() < 1e-3


def test_perturbed_candidate_does_not_converge(params, spectral_up):
    base = Candidate.from_dressed(slow_soliton(params, spectral_up))
    good = nonlinear_residual(base, GRID, levels=3)
    rep = nonlinear_residual(PerturbedCandidate(base, 1.01), GRID, levels=3)
    assert rep.total() > 10 * good.total()
    assert abs(rep.orders()["total"][-1]) < 0.5


def test_seed_is_exact_solution():
    prof = ExponentialSwitch(3.0, 4.0, 1.0, 4.0)
    rep = nonlinear_residual(seed_candidate(prof, 1.0, 0.0), OracleGrid(-0.5, 0.5, 0.02, -1, 1, 0.1), levels=2)
    assert rep.total() < 1e-14


def test_time_dependent_solution_residual(params, spectral_down):
    sc = piecewise_scenario(-4.1j, 3.0, 4.0, math.inf, math.inf)
    sol = one_soliton_timedep(params, spectral_down, sc)
    rep = nonlinear_residual(sol, OracleGrid(0.1, 1.1, 0.02, -1, 1, 0.02), levels=3)
    assert all(abs(o - 2) < 0.3 for o in rep.orders()["total"])


def test_resolution_guard(params, spectral_up):
    with pytest.raises(ResolutionError):
        nonlinear_residual(slow_soliton(params, spectral_up), OracleGrid(-1, 1, 0.5, -1, 1, 0.5))


def test_zero_curvature(params):
    sol = dressed_general(params, SpectralConfig(-4.1j, 0.0, 1, 1))
    probes = [0.7 + 0.3j, -1.1 + 2j]
    good = zero_curvature_residual(sol, GRID, probes)
    bad = zero_curvature_residual(sol, GRID, probes, transpose_rho=True)
    assert good.total() < 2e-3 and all(abs(o - 2) < 0.2 for o in good.orders()["total"])
    assert bad.total() > 100 * good.total()


def test_zero_curvature_probe_validation(params, spectral_up):
    sol = slow_soliton(params, spectral_up)
    with pytest.raises(ValidationError):
        zero_curvature_residual(sol, GRID, [1j, 1j])
    with pytest.raises(PoleError):
        zero_curvature_residual(sol, GRID, [0.0, 1j])


@pytest.mark.parametrize("p", [PhysicalParams(), PhysicalParams(k_phase=0.3, x_excited=1.0, delta=0.2)])
def test_linear_solution_residual(p):
    fm = FundamentalMatrix(p, 0.7 + 2.1j)
    rep = linear_solution_residual(fm, OracleGrid(-1, 1, 0.01, -1, 1, 0.01))
    assert rep.total() < 1e-3


def test_propagation_matches_dressed(params, spectral_up):
    sol = slow_soliton(params, spectral_up)
    err, run = propagation_error(sol, OracleGrid(-3, 3, 0.01, -0.25, 0.25, 0.005))
    assert err < 1e-4
    assert run.trace_drift < 1e-12 and run.hermiticity_drift < 1e-12


def test_propagation_instability_reported():
    grid = OracleGrid(0, 1, 0.1, 0, 100, 1.0)
    rho = np.diag([0.0, 0.0, 1.0]).astype(complex)  # inverted medium amplifies
    with pytest.raises(InstabilityError) as exc:
        integrate_maxwell_bloch((np.full(11, 1e-3 + 0j), np.zeros(11, complex)),
                                lambda z: rho, grid, 50.0, 0.0, growth_limit=10)
    assert exc.value.suggested_step == 0.5


def test_entry_shape_validated():
    grid = OracleGrid(0, 1, 0.1, 0, 1, 0.1)
    with pytest.raises(ValidationError):
        integrate_maxwell_bloch((np.zeros(3), np.zeros(3)), lambda z: np.eye(3), grid, 1.0, 0.0)
