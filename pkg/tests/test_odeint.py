import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqseirs import NumericalFailure, SolverConfig, evolution_operator, floquet_exponent
from floqseirs import integrate, monodromy, poincare_map, spectral_radius
from floqseirs.dfe import s_hat_initial
from floqseirs.model import reduced_field
from floqseirs.odeint import eigenvalues2
from floqseirs.reproduction import assemble

V = np.array([[38.52, 0.0], [-38.5, 100.02]])
TIGHT = SolverConfig(rel_tol=1e-12, abs_tol=1e-60)


def test_scalar_decay():
    traj = integrate(lambda t, y: -y, [1.0], 0.0, 1.0)
    assert abs(traj.final[0] - math.exp(-1)) <= 1e-8
    assert traj.nfev == 2 + 6 * (traj.steps + traj.rejected)


def test_rk4_fourth_order():
    errs = []
    for h in (0.1, 0.05):
        traj = integrate(lambda t, y: -y, [1.0], 0.0, 1.0, SolverConfig("fixed-rk4", step=h))
        errs.append(abs(traj.final[0] - math.exp(-1)))
    assert 14 < errs[0] / errs[1] < 18


def test_t_eval_is_hit_exactly():
    ts = np.linspace(0, 1, 7)
    for method in ("fixed-rk4", "adaptive-rk45"):
        traj = integrate(lambda t, y: -y, [1.0], 0.0, 1.0, SolverConfig(method, step=0.01), t_eval=ts)
        np.testing.assert_array_equal(traj.t, ts)
        np.testing.assert_allclose(traj.y[:, 0], np.exp(-ts), rtol=1e-7)


def test_rk4_and_rk45_agree_on_example(ex1, sat):
    rhs = reduced_field(ex1, sat)
    x0 = [1.5e6, 4e5, 4e4]
    a = integrate(rhs, x0, 0.0, 10.0, SolverConfig("fixed-rk4", step=1e-3)).final
    b = integrate(rhs, x0, 0.0, 10.0, SolverConfig(rel_tol=1e-10, abs_tol=1e-8)).final
    assert a[1] == pytest.approx(b[1], rel=1e-5)


def test_budget_exhaustion_raises():
    with pytest.raises(NumericalFailure):
        integrate(lambda t, y: -y, [1.0], 0.0, 1.0, SolverConfig(max_steps=2))
    with pytest.raises(NumericalFailure):
        integrate(lambda t, y: -y, [1.0], 0.0, 1.0, SolverConfig("fixed-rk4", max_steps=2))


def test_zero_generator_gives_identity():
    Y = evolution_operator(lambda t: np.zeros((2, 2)), 0.0, 1.0)
    np.testing.assert_allclose(Y, np.eye(2), atol=1e-15)


def test_constant_minus_v_eigenvalues():
    M = monodromy(lambda t: -V, 1.0, TIGHT)
    lam = sorted(abs(x) for x in eigenvalues2(M))
    assert lam[0] == pytest.approx(math.exp(-100.02), rel=1e-8)
    assert lam[1] == pytest.approx(math.exp(-38.52), rel=1e-8)
    assert spectral_radius(M) == pytest.approx(math.exp(-38.52), rel=1e-8)


def test_scalar_dfe_monodromy(ex1):
    M = evolution_operator(lambda t: np.array([[-ex1.dfe_rate(t)]]), 0.0, 1.0, TIGHT)
    assert M.shape == (1, 1)
    assert M[0, 0] == pytest.approx(math.exp(-0.12), rel=1e-8)


def rotating(t):
    return np.array([[-1.0 + 0.5 * math.cos(2 * math.pi * t), 2.0], [-0.3, -0.5 * math.sin(2 * math.pi * t)]])


def cooperative(t):
    # non-negative off-diagonal entries give a real positive dominant multiplier
    return np.array([[-1.0 + 0.5 * math.cos(2 * math.pi * t), 0.2], [0.3, -2.0 + 0.5 * math.sin(2 * math.pi * t)]])


def test_cocycle():
    cfg = SolverConfig(rel_tol=1e-12, abs_tol=1e-14)
    Y02 = evolution_operator(rotating, 0.0, 0.9, cfg)
    Y12 = evolution_operator(rotating, 0.35, 0.9, cfg)
    Y01 = evolution_operator(rotating, 0.0, 0.35, cfg)
    np.testing.assert_allclose(Y12 @ Y01, Y02, rtol=1e-8, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 1), st.floats(-3, 1), st.floats(-2, 2), st.floats(-2, 2))
def test_constant_generator_eigenvalue_moduli(a, d, b, c):
    A = np.array([[a, b], [c, d]])
    M = monodromy(lambda t: A, 1.0, SolverConfig(rel_tol=1e-12, abs_tol=1e-14))
    got = sorted(abs(x) for x in eigenvalues2(M))
    want = sorted(np.exp(np.linalg.eigvals(A).real))
    np.testing.assert_allclose(got, want, rtol=1e-8)


def test_spectral_radius_examples():
    assert spectral_radius(np.eye(2)) == 1.0
    assert spectral_radius([[0.0, 7.5], [0.0, 0.0]]) == 0.0
    assert spectral_radius([[2.0, 0.0], [1.0, 3.0]]) == 3.0
    assert spectral_radius([[0.0, -1.0], [1.0, 0.0]]) == pytest.approx(1.0)
    assert spectral_radius([[5.0]]) == 5.0


def test_eigenvalues_without_cancellation():
    # eigenvalues 1 and 1e-12; naive (tr - sqrt(disc))/2 loses the small one
    M = np.array([[1.0, 0.0], [3.0, 1e-12]])
    big, small = eigenvalues2(M)
    assert big == 1.0 and small == pytest.approx(1e-12, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4), st.floats(-6, 6))
def test_spectral_radius_diagonal_similarity(entries, logscale):
    M = np.array(entries).reshape(2, 2)
    D = np.diag([1.0, 10.0 ** logscale])
    S = np.linalg.inv(D) @ M @ D
    assert spectral_radius(S) == pytest.approx(spectral_radius(M), rel=1e-9, abs=1e-12)


def test_diagonal_monodromy_and_exponent():
    A = lambda t: np.diag([-1.0, -2.0])
    M = monodromy(A, 1.0, SolverConfig(rel_tol=1e-12, abs_tol=1e-14))
    np.testing.assert_allclose(M, np.diag([math.exp(-1), math.exp(-2)]), rtol=1e-9, atol=1e-15)
    assert floquet_exponent(A, 1.0, SolverConfig(rel_tol=1e-12, abs_tol=1e-14)) == pytest.approx(-1.0, rel=1e-9)


def test_floquet_eigenvector_property():
    cfg = SolverConfig(rel_tol=1e-12, abs_tol=1e-14)
    M = monodromy(cooperative, 1.0, cfg)
    w, vecs = np.linalg.eig(M)
    k = int(np.argmax(np.abs(w)))
    assert w[k].imag == 0 and w[k].real > 0
    v0 = np.real(vecs[:, k])
    p = floquet_exponent(cooperative, 1.0, cfg)
    out = integrate(lambda t, y: cooperative(t) @ y, v0, 0.0, 1.0, cfg).final
    np.testing.assert_allclose(out, math.exp(p) * v0, rtol=1e-8, atol=1e-12)


def test_small_epsilon_keeps_example1_stable(ex1, sat):
    ngm = assemble(ex1, sat)
    assert spectral_radius(monodromy(ngm.generator(epsilon=1e-6), 1.0)) < 1.0


def test_example2_perturbed_exponent_positive(ex2, sat):
    ngm = assemble(ex2, sat, eta=10.0)
    assert floquet_exponent(ngm.generator(eta=10.0, alpha=1.0), 1.0) > 0


def test_minus_v_monodromy_radius(ex1):
    rho = spectral_radius(monodromy(lambda t: -V, 1.0, TIGHT))
    assert rho == pytest.approx(max(math.exp(-38.52), math.exp(-100.02)), rel=1e-8)


def test_poincare_fixed_point_and_axis(ex1, sat):
    s0 = s_hat_initial(ex1)
    out = poincare_map(ex1, sat, [s0, 0.0, 0.0], SolverConfig(rel_tol=1e-12, abs_tol=1e-8))
    assert out[0] == pytest.approx(s0, rel=1e-9)
    assert out[1] == 0.0 and out[2] == 0.0
    out = poincare_map(ex1, sat, [1e6, 0.0, 0.0])
    assert out[1] == 0.0 and out[2] == 0.0


def test_poincare_iterates_approach_disease_free_point(ex1, sat):
    m0 = np.array([s_hat_initial(ex1), 0.0, 0.0])
    x = np.array([1.5e6, 4e5, 4e4])
    cfg = SolverConfig(rel_tol=1e-9, abs_tol=1e-6)
    dists = []
    for _ in range(30):
        x = poincare_map(ex1, sat, x, cfg)
        dists.append(np.linalg.norm(x - m0))
    tail = dists[10:]
    assert all(b < a for a, b in zip(tail, tail[1:]))
    assert tail[-1] < 1e-2 * dists[0]
