from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqseirs import DomainError, IncidenceFunction, PeriodicCoefficient, rhs_full, rhs_reduced, validate
from floqseirs.dfe import disease_free_solution, s_hat_initial
from floqseirs.model import full_field, reduced_field
from floqseirs.odeint import SolverConfig, integrate

from conftest import example_params

X1 = np.array([1.5e6, 4e5, 4e4, 2.6e5])


def test_example_derivative_of_infectious(ex1, sat):
    d = rhs_full(ex1, sat, 0.0, X1)
    assert d[2] == pytest.approx(38.5 * 4e5 - 100.02 * 4e4, rel=1e-14)
    assert d[2] == pytest.approx(11_399_200.0, rel=1e-14)


def test_disease_free_point_has_no_infection_flow(ex1, sat):
    s0 = s_hat_initial(ex1)
    d = rhs_full(ex1, sat, 0.0, [s0, 0.0, 0.0, ex1.N - s0])
    assert d[1] == 0.0 and d[2] == 0.0
    # the orbit is periodic, not stationary: dS matches its slope
    dr = rhs_reduced(ex1, sat, 0.0, [s0, 0.0, 0.0])
    assert dr[0] == pytest.approx(float(disease_free_solution(ex1).derivative(0.0)), rel=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 5))
def test_full_field_sums_to_zero_and_matches_reduced(a, b, c, d, t):
    p = example_params()
    f = IncidenceFunction.saturated(0.001)
    w = np.array([a, b, c, d]) + 1e-3
    x = p.N * w / w.sum()
    dx = rhs_full(p, f, t, x)
    assert abs(dx.sum()) <= 1e-9 * np.abs(dx).max() + 1e-6
    np.testing.assert_allclose(rhs_reduced(p, f, t, x[:3]), dx[:3], rtol=1e-12, atol=1e-6)


def test_disease_free_axis(ex1, sat):
    d = rhs_reduced(ex1, sat, 0.3, [1e5, 0.0, 0.0])
    assert d[1] == 0.0 and d[2] == 0.0


def test_domain_errors(ex1, sat):
    with pytest.raises(DomainError):
        rhs_reduced(ex1, sat, 0.0, [1.0, -1.0, 0.0])
    with pytest.raises(DomainError):
        rhs_reduced(ex1, sat, 0.0, [ex1.N, 1.0, 1.0])
    with pytest.raises(DomainError):
        rhs_full(ex1, sat, 0.0, [1.0, np.nan, 0.0, 0.0])
    # S + E + I = N exactly is admitted
    rhs_reduced(ex1, sat, 0.0, [ex1.N - 2, 1.0, 1.0])


def test_validate_examples(ex1):
    assert validate(ex1).ok
    assert not validate(replace(ex1, p=1.5)).ok
    bad = replace(ex1, beta=PeriodicCoefficient.cosine(0.0018, 0.0002, 0.3))
    rep = validate(bad)
    assert not rep.ok and any("divide" in v for v in rep.violations)
    assert validate(replace(ex1, beta=PeriodicCoefficient.cosine(0.0018, 0.0002, 0.5))).ok
    assert not validate(replace(ex1, beta=PeriodicCoefficient.cosine(0.0018, 0.002, 1.0))).ok
    assert not validate(replace(ex1, delta=-0.1)).ok


def test_coefficient_forms():
    c = PeriodicCoefficient.cosine(0.1, 0.004, 1.0)
    assert c(0.0) == pytest.approx(0.104)
    assert c(0.5) == pytest.approx(0.096)
    assert c(0.25) == c(1.25)
    tab = PeriodicCoefficient.tabulated([1.0, 2.0, 3.0, 2.0], 1.0)
    assert tab(0.0) == 1.0 and tab(0.125) == pytest.approx(1.5)
    assert tab(0.875) == pytest.approx(1.5)  # wraps back to the first sample
    assert tab(1.25) == pytest.approx(tab(0.25))
    assert PeriodicCoefficient.from_dict(tab.to_dict()) == tab
    assert PeriodicCoefficient.from_dict(c.to_dict()) == c


@pytest.fixture(scope="module")
def long_run():
    p = example_params()
    f = IncidenceFunction.saturated(0.001)
    cfg = SolverConfig(rel_tol=1e-9, abs_tol=1e-6)
    ts = np.linspace(0.0, 50.0, 5001)
    return p, integrate(full_field(p, f), X1, 0.0, 50.0, cfg, t_eval=ts), cfg


def test_conservation_over_fifty_years(long_run):
    p, traj, _ = long_run
    assert np.max(np.abs(traj.y.sum(axis=1) - p.N)) <= 1e-6 * p.N


def test_non_negativity(long_run):
    _, traj, cfg = long_run
    assert traj.y.min() >= -10 * cfg.abs_tol


def test_exposed_and_infectious_lower_bounds(ex1, sat):
    cfg = SolverConfig(rel_tol=1e-10, abs_tol=1e-8)
    ts = np.linspace(0.0, 2.0, 201)
    x0 = [1.5e6, 4e5, 4e4]
    traj = integrate(reduced_field(ex1, sat), x0, 0.0, 2.0, cfg, t_eval=ts)
    E_lb = x0[1] * np.exp(-(ex1.mu + ex1.sigma) * ts)
    I_lb = x0[2] * np.exp(-(ex1.mu + ex1.gamma) * ts)
    assert np.all(traj.y[:, 1] >= E_lb * (1 - 1e-7) - 10 * cfg.abs_tol)
    assert np.all(traj.y[:, 2] >= I_lb * (1 - 1e-7) - 10 * cfg.abs_tol)


def test_axis_invariance_under_integration(ex1, sat):
    traj = integrate(reduced_field(ex1, sat), [3e5, 0.0, 0.0], 0.0, 5.0, SolverConfig(abs_tol=1e-4))
    assert np.all(traj.y[:, 1:] == 0.0)
