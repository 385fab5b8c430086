import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowlight.background import (
    Constant,
    ExponentialSwitch,
    StepOff,
    Tabulated,
    TanhSwitch,
    asymptotics,
    eval_profile,
    load_tabulated,
)
from slowlight.errors import ConfigError, DomainError, ValidationError


def test_constant_profile():
    p = Constant(3.0)
    assert np.all(p.evaluate(np.linspace(-5, 5, 7)) == 3.0)
    assert p.is_constant and asymptotics(p) == (3.0, 3.0)
    assert math.isinf(p.left_edge())


def test_exponential_switch_regions():
    p = ExponentialSwitch(3.0, 4.0, 1.0, 4.0)
    assert eval_profile(p, -1.0) == pytest.approx(3.0)
    assert p.evaluate(0.5) == pytest.approx(3.0 * math.exp(-2.0))
    assert p.evaluate(2.0) == 0
    assert p.evaluate(5.0) == pytest.approx(3.0)
    # Heaviside(0) = 1/2 at the jumps
    assert p.evaluate(1.0) == pytest.approx(0.5 * 3.0 * math.exp(-4.0))
    assert p.evaluate(4.0) == pytest.approx(1.5)
    assert p.breakpoints == (0.0, 1.0, 4.0)
    assert p.asymptotics() == (3.0, 3.0)


def test_exponential_pure_decay_and_cutoff_only():
    p = ExponentialSwitch(3.0, 4.0, math.inf, math.inf)
    assert p.asymptotics() == (3.0, 0.0)
    assert p.evaluate(10.0) == pytest.approx(3.0 * math.exp(-40.0))
    q = ExponentialSwitch(3.0, 4.0, 1.0, math.inf)
    assert q.omega_plus == 0 and q.evaluate(50.0) == 0


@pytest.mark.parametrize("kw", [dict(alpha=0), dict(T1=4.0, T=1.0), dict(T1=0.0), dict(omega0=-1)])
def test_exponential_switch_rejects_bad_ordering(kw):
    with pytest.raises(ValidationError):
        ExponentialSwitch(**kw)


def test_step_and_tanh():
    s = StepOff(2.0)
    assert s.evaluate(-1) == 2 and s.evaluate(1) == 0 and s.evaluate(0) == 1
    t = TanhSwitch(1.5, 2.0)
    assert t.asymptotics() == (3.0, 0.0)
    assert t.evaluate(0.0) == pytest.approx(1.5)
    h = 1e-5
    fd = (t.evaluate(0.3 + h) - t.evaluate(0.3 - h)) / (2 * h)
    assert t.derivative(0.3) == pytest.approx(fd, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(0.1, 5), st.floats(0.1, 6))
def test_exponential_derivative_matches_finite_difference(t, alpha, om):
    p = ExponentialSwitch(om, alpha, math.inf, math.inf)
    if abs(t) < 1e-3:
        return
    h = 1e-6
    fd = (p.evaluate(t + h) - p.evaluate(t - h)) / (2 * h)
    assert abs(p.derivative(t) - fd) <= 1e-5 * max(1.0, om * alpha)


def test_tabulated_interpolation_and_asymptotes():
    tau = np.linspace(0, 2, 21)
    om = 3.0 * np.exp(-tau)
    p = Tabulated(tau, om, asymptote_left=3.0)
    assert p.evaluate(-1.0) == 3.0
    assert abs(p.evaluate(1.05) - 3.0 * math.exp(-1.05)) < 1e-3
    with pytest.raises(DomainError):
        p.evaluate(3.0)
    with pytest.raises(ValidationError):
        Tabulated(tau[::-1], om)
    with pytest.raises(ValidationError):
        Tabulated(tau, om, asymptote_left=1.0)


def test_load_tabulated(tmp_path):
    f = tmp_path / "prof.dat"
    f.write_text("# tau re im\n0 3 0\n1 1.5   # halfway\n\n2 0 0\n")
    p = load_tabulated(f, asymptote_left=3.0, asymptote_right=0.0)
    assert p.asymptotics() == (3.0, 0.0)
    assert p.evaluate(1.0) == pytest.approx(1.5)
    bad = tmp_path / "bad.dat"
    bad.write_text("0 1\n1 x\n")
    with pytest.raises(ConfigError) as exc:
        load_tabulated(bad)
    assert exc.value.line == 2
