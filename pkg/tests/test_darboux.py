import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowlight.background import Constant, ExponentialSwitch, TanhSwitch
from slowlight.darboux import (
    FAMILIES,
    FundamentalMatrix,
    dressed_general,
    dressing_matrix,
    fast_soliton,
    fundamental_matrix,
    generic_values,
    normalization_exact,
    normalization_printed,
    one_soliton_timedep,
    slow_soliton,
    zero_background_memory,
)
from slowlight.errors import (
    ConfigError,
    DegenerateConfigurationError,
    FamilyMismatchError,
    PoleError,
    ValidationError,
)
from slowlight.model import PhysicalParams, SpectralConfig
from slowlight.scattering import constant_solution, piecewise_scenario, solve_riccati_ode

T, Z = np.meshgrid(np.linspace(-3, 3, 25), np.linspace(-6, 6, 25), indexing="ij")


def close(a, b, tol=1e-10):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) < tol


def test_family_registry():
    assert set(FAMILIES) == {"general", "slow", "fast", "zero-background", "time-dependent"}


@pytest.mark.parametrize("lam", [4.1j, -4.1j, 0.7 + 4.1j])
def test_general_reduces_to_slow(params, lam):
    sp = SpectralConfig(lam, 0.3, 0.8 - 0.2j, 0)
    g = dressed_general(params, sp).evaluate(T, Z)
    s = slow_soliton(params, sp).evaluate(T, Z)
    assert close(g.omega_a, s.omega_a) and close(g.omega_b, s.omega_b) and close(g.psi, s.psi)


@pytest.mark.parametrize("lam", [4.1j, -4.1j])
def test_general_reduces_to_fast(params, lam):
    sp = SpectralConfig(lam, -0.4, 0, 1.3 + 0.1j)
    g = dressed_general(params, sp).evaluate(T, Z)
    f = fast_soliton(params, sp).evaluate(T, Z)
    assert close(g.omega_a, f.omega_a) and close(g.omega_b, f.omega_b) and close(g.psi, f.psi)


@pytest.mark.parametrize("c", [(1, 0), (0, 1), (1, 1)])
def test_projector_matches_explicit_dressing_matrix(params, c):
    sp = SpectralConfig(-4.1j, 0.2, *c)
    g = dressed_general(params, sp)
    fm = g.info["fundamental"]
    for t, z in [(0.37, 0.81), (-1.2, 2.5), (1.9, -3.0)]:
        v = g.evaluate(t, z)
        oa, ob, psi = generic_values(fm, sp, params, t, z)
        assert abs(v.omega_a - oa) < 1e-10 and abs(v.omega_b - ob) < 1e-10
        assert np.max(np.abs(v.psi - psi)) < 1e-10


def test_dressing_matrix_structure(params):
    sp = SpectralConfig(-4.1j, 0.0, 1, 1)
    fm = fundamental_matrix(params, lam=sp.lambda0, scattering=constant_solution(sp.lambda0, 3.0))
    dm = dressing_matrix(fm.matrix(0.2, 0.4), fm.conj_matrix(0.2, 0.4), sp, 0.0)
    ev = np.sort_complex(dm.eigenvalues)
    assert np.allclose(sorted(ev.imag), sorted([4.1, 4.1, -4.1]))
    assert np.max(np.abs(dm.column_overlaps())) < 1e-12


def test_degenerate_dressing_reported():
    sp = SpectralConfig(-4.1j, 0.0, 1, 0)
    zero = np.zeros((3, 3), complex)
    with pytest.raises(DegenerateConfigurationError) as exc:
        dressing_matrix(zero, zero, sp, 0.0, tau=1.0, zeta=2.0)
    assert (exc.value.tau, exc.value.zeta) == (1.0, 2.0)


def test_fundamental_pairing_is_identity(params):
    fm = FundamentalMatrix(params, 4.1j)
    g = fm.pairing(T[:5, :5], Z[:5, :5])
    assert np.max(np.abs(g - np.eye(3))) < 1e-12


def test_fundamental_matrix_pole():
    with pytest.raises(PoleError):
        FundamentalMatrix(PhysicalParams(delta=0.0), 0.0 + 0j)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 6), st.floats(-2, 2), st.floats(-math.pi, math.pi),
       st.floats(0.1, 3), st.floats(-math.pi, math.pi), st.floats(0, 2), st.booleans())
def test_normalization_property(om, delta, c1, r2, ph2, r3, up):
    lam = complex(0.3, (om + 1.0) * (1 if up else -1))
    p = PhysicalParams(omega0=om, delta=delta)
    sp = SpectralConfig(lam, c1, r2 * np.exp(1j * ph2), r3)
    v = dressed_general(p, sp).evaluate(T, Z)
    assert np.max(np.abs(np.sum(np.abs(v.psi) ** 2, axis=-1) - 1)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(-math.pi, math.pi))
def test_common_phase_gauge_freedom(phi):
    # (c1, c2, c3) -> e^{i phi} (c1, c2, c3) leaves every observable unchanged
    p = PhysicalParams()
    a = dressed_general(p, SpectralConfig(-4.1j, 0.2, 1 + 0.3j, 0.5)).evaluate(T, Z)
    b = dressed_general(p, SpectralConfig(-4.1j, 0.2 + phi, (1 + 0.3j) * np.exp(1j * phi),
                                          0.5 * np.exp(1j * phi))).evaluate(T, Z)
    assert close(a.omega_a, b.omega_a, 1e-9) and close(a.omega_b, b.omega_b, 1e-9)
    assert close(a.psi, b.psi, 1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2))
def test_c2_scaling_translates_slow_soliton(s):
    # |c2| -> e^s |c2| shifts the slow soliton in zeta by -s / rate
    p = PhysicalParams()
    lam = 4.1j
    rate = 0.5 * p.nu0 * (1 / lam).imag
    a = slow_soliton(p, SpectralConfig(lam, c2=math.exp(s)))
    b = slow_soliton(p, SpectralConfig(lam, c2=1.0))
    za = np.linspace(-4, 4, 33)
    fa = np.abs(a.fields(0.4, za)[0])
    fb = np.abs(b.fields(0.4, za + s / rate)[0])
    assert np.max(np.abs(fa - fb)) < 1e-10


def test_mirror_symmetry_of_intensities():
    # lambda -> -conj(lambda), c2 -> conj(c2), c3 -> -conj(c3) at Delta = 0
    p = PhysicalParams()
    c2, c3 = 1 + 0.5j, 0.7 - 0.2j
    a = dressed_general(p, SpectralConfig(1 + 4.1j, 0.3, c2, c3)).evaluate(T, Z)
    b = dressed_general(p, SpectralConfig(-1 + 4.1j, 0.3, np.conj(c2), -np.conj(c3))).evaluate(T, Z)
    assert close(np.abs(a.omega_a), np.abs(b.omega_a)) and close(np.abs(a.omega_b), np.abs(b.omega_b))
    assert close(np.abs(a.psi), np.abs(b.psi))


def test_mixed_state_density_matrix():
    p = PhysicalParams(k_phase=0.3, x_excited=1.0, delta=0.2)
    sol = dressed_general(p, SpectralConfig(-4.1j, 0.0, 1, 0))
    rho = sol.density_matrix(T[:4, :4], Z[:4, :4])
    assert np.allclose(rho, np.conj(np.swapaxes(rho, -1, -2)), atol=1e-12)
    assert np.allclose(np.trace(rho, axis1=-2, axis2=-1), 1, atol=1e-12)
    with pytest.raises(ValidationError):
        sol.state(0.0, 0.0)
    assert sum(x for x in sol.populations(0.1, 0.2)) == pytest.approx(1)


def test_family_profile_mismatch(params):
    with pytest.raises(FamilyMismatchError):
        slow_soliton(params, SpectralConfig(4.1j), ExponentialSwitch())
    with pytest.raises(FamilyMismatchError):
        zero_background_memory(params, SpectralConfig(4.1j))
    with pytest.raises(ValidationError):
        fast_soliton(params, SpectralConfig(4.1j))


def test_non_solitonic_config_rejected():
    with pytest.raises(ValidationError):
        slow_soliton(PhysicalParams(omega0=5.0), SpectralConfig(4.1j))


def test_scattering_lambda_mismatch(params):
    sc = constant_solution(-4.1j, 3.0)
    with pytest.raises(ConfigError):
        dressed_general(params, SpectralConfig(4.1j), scattering=sc)
    with pytest.raises(ConfigError):
        one_soliton_timedep(params, SpectralConfig(4.1j), sc)


def test_general_c3_needs_partner_on_time_dependent_background(params):
    prof = TanhSwitch()
    sc = solve_riccati_ode(prof, -4.1j, np.linspace(-5, 5, 50))
    with pytest.raises(ConfigError):
        dressed_general(params, SpectralConfig(-4.1j, c3=1), scattering=sc)
    ok = dressed_general(params, SpectralConfig(-4.1j), scattering=sc)
    v = ok.evaluate(np.linspace(-4, 4, 9), 0.0)
    assert np.allclose(np.sum(np.abs(v.psi) ** 2, axis=-1), 1, atol=1e-12)


def test_time_dependent_with_constant_profile_equals_slow(params):
    sp = SpectralConfig(-4.1j)
    sc = constant_solution(-4.1j, 3.0, Constant(3.0))
    a = one_soliton_timedep(params, sp, sc).evaluate(T, Z)
    b = slow_soliton(params, sp).evaluate(T, Z)
    assert close(a.omega_a, b.omega_a) and close(a.psi, b.psi)


def test_time_dependent_matches_general_projector(params):
    sp = SpectralConfig(-4.1j)
    sc = piecewise_scenario(-4.1j, 3.0, 4.0, math.inf, math.inf)
    a = one_soliton_timedep(params, sp, sc).evaluate(T, Z)
    b = dressed_general(params, sp, scattering=sc).evaluate(T, Z)
    assert close(a.omega_a, b.omega_a, 1e-9) and close(a.omega_b, b.omega_b, 1e-9)


def test_zero_background_max_population():
    z = np.linspace(-15, 15, 30001)
    for delta, expect in ((0.0, 1.0), (1.0, 4.1**2 / (1 + 4.1**2))):
        s = zero_background_memory(PhysicalParams(omega0=0.0, delta=delta), SpectralConfig(-4.1j))
        p2 = s.populations(np.zeros_like(z), z)[1]
        assert p2.max() == pytest.approx(expect, abs=1e-6)


def test_normalization_formulas(params):
    fm = FundamentalMatrix(params, 4.1j)
    sp = SpectralConfig(4.1j, 0, 1, 1)
    # they agree on the imaginary axis, where the cross term vanishes
    assert np.allclose(normalization_exact(fm, sp, T, Z * 0.1), normalization_printed(fm, sp, T, Z * 0.1))
    fm2 = FundamentalMatrix(params, 1 + 4.1j)
    sp2 = SpectralConfig(1 + 4.1j, 0, 1, 1)
    a = normalization_exact(fm2, sp2, 0.3, 0.2)
    b = normalization_printed(fm2, sp2, 0.3, 0.2)
    assert abs(a - b) / abs(a) > 1e-6
