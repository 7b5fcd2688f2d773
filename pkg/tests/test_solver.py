"""Joint-stage solver: projection, gradients, proximal map, and the full loop."""

import numpy as np
import pytest

import jpr.solver as solver_mod
from jpr import (
    ConfigError,
    DegenerateVarianceError,
    Pd3oState,
    SolverConfig,
    grad_f,
    lipschitz_constant,
    loss_gradient,
    objective_value,
    pd3o_step,
    project_spectral_box,
    prox_g_over_eta,
    smooth_objective,
    solve_jpr,
)
from jpr.solver import default_omega0

from oracles import (
    numeric_grad,
    oracle_objective,
    oracle_smooth_objective,
    power_iter_top,
    reference_prox_grad,
)


def _instance(seed, n=40, p=4):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p))
    x[:, 0] += 0.6 * x[:, 1]
    x -= x.mean(axis=0)
    tau_sq = rng.uniform(0.5, 2.0, p)
    return x, tau_sq


def _random_symmetric(rng, p, scale=1.0):
    b = rng.standard_normal((p, p)) * scale
    return 0.5 * (b + b.T)


def test_projection_hand_value():
    out = project_spectral_box(np.diag([3.0, -1.0]), alpha=0.0, beta=2.0)
    assert np.allclose(out, np.diag([2.0, 0.0]), atol=1e-12)


def test_projection_is_idempotent_and_in_box():
    rng = np.random.default_rng(0)
    for _ in range(25):
        p = rng.integers(2, 8)
        A = rng.standard_normal((p, p)) * 3.0
        alpha = float(rng.uniform(0.0, 0.5))
        beta = alpha + float(rng.uniform(0.5, 3.0))
        P = project_spectral_box(A, alpha, beta)
        assert np.array_equal(P, P.T)
        w = np.linalg.eigvalsh(P)
        assert w.min() >= alpha - 1e-10 and w.max() <= beta + 1e-10
        PP = project_spectral_box(P, alpha, beta)
        assert np.max(np.abs(PP - P)) <= 1e-10 * max(1.0, np.max(np.abs(P)))


def test_projection_fixes_feasible_point():
    rng = np.random.default_rng(1)
    S = _random_symmetric(rng, 5)
    w = np.linalg.eigvalsh(S)
    P = project_spectral_box(S, alpha=w.min() - 1.0, beta=w.max() + 1.0)
    assert np.max(np.abs(P - S)) <= 1e-12 * max(1.0, np.max(np.abs(S)))


def test_loss_gradient_hand_values():
    z = np.array([2.0, -4.0, 0.5, 0.0])
    assert np.array_equal(loss_gradient(z, "quadratic"), z / 4.0)
    assert np.array_equal(
        loss_gradient(z, "huber", huber_rho=1.0),
        np.array([1.0, -1.0, 0.5, 0.0]) / 4.0,
    )


def test_smooth_objective_matches_oracle():
    for seed in range(6):
        x, tau_sq = _instance(seed, p=5)
        rng = np.random.default_rng(100 + seed)
        omega = _random_symmetric(rng, 5, scale=0.7)
        for loss in ("quadratic", "huber"):
            got = smooth_objective(omega, x, tau_sq, loss, huber_rho=0.8)
            ref = oracle_smooth_objective(omega, x, tau_sq, loss, rho=0.8)
            assert got == pytest.approx(ref, rel=1e-12)


def test_objective_value_matches_oracle():
    x, tau_sq = _instance(7, p=4)
    rng = np.random.default_rng(7)
    omega = _random_symmetric(rng, 4)
    lambdas = rng.uniform(0.05, 0.3, 4)
    got = objective_value(omega, x, tau_sq, lambdas)
    ref = oracle_objective(omega, x, tau_sq, lambdas)
    assert got == pytest.approx(ref, rel=1e-12)


def test_grad_matches_central_differences():
    for seed, p in ((0, 3), (1, 4), (2, 5)):
        x, tau_sq = _instance(seed, n=30, p=p)
        rng = np.random.default_rng(200 + seed)
        omega = _random_symmetric(rng, p, scale=0.5)
        for loss in ("quadratic", "huber"):
            got = grad_f(omega, x, tau_sq, loss, huber_rho=5.0)
            ref = numeric_grad(
                lambda m: oracle_smooth_objective(m, x, tau_sq, loss, rho=5.0), omega
            )
            np.fill_diagonal(ref, 0.0)  # diagonal entries are pinned, gradient unused
            scale = max(1.0, float(np.max(np.abs(ref))))
            assert np.max(np.abs(got - ref)) <= 1e-5 * scale


def test_grad_gram_path_matches_data_path():
    x, tau_sq = _instance(5, n=50, p=6)
    rng = np.random.default_rng(5)
    omega = _random_symmetric(rng, 6)
    plain = grad_f(omega, x, tau_sq, "quadratic")
    fast = grad_f(omega, x, tau_sq, "quadratic", gram=x.T @ x / x.shape[0])
    assert np.max(np.abs(plain - fast)) <= 1e-12 * max(1.0, np.max(np.abs(plain)))


def test_grad_diagonal_is_zero():
    x, tau_sq = _instance(3)
    omega = np.eye(4) + 0.1
    assert np.array_equal(np.diag(grad_f(omega, x, tau_sq)), np.zeros(4))


def test_huber_with_huge_rho_equals_quadratic():
    x, tau_sq = _instance(9, p=5)
    rng = np.random.default_rng(9)
    omega = _random_symmetric(rng, 5)
    a = grad_f(omega, x, tau_sq, "quadratic")
    b = grad_f(omega, x, tau_sq, "huber", huber_rho=1e9)
    assert np.array_equal(a, b)


def test_lipschitz_matches_brute_force():
    x, tau_sq = _instance(11, n=60, p=6)
    got = lipschitz_constant(x, tau_sq)
    n = x.shape[0]
    best = 0.0
    for j in range(6):
        rest = np.delete(x, j, axis=1)
        best = max(best, tau_sq[j] ** 2 * power_iter_top(rest.T @ rest, seed=j) / n)
    assert got == pytest.approx(best, rel=1e-10)


def test_prox_hand_values():
    V = np.array([[10.0, 3.0], [-0.4, 7.0]])
    P = prox_g_over_eta(V, eta=2.0, tau_sq=np.array([1.0, 4.0]),
                        lambdas=np.array([0.5, 0.25]))
    assert np.array_equal(P, np.array([[1.0, 1.0], [0.0, 0.25]]))


def test_pd3o_step_matches_hand_update():
    x, tau_sq = _instance(13, n=20, p=3)
    gamma, eta = 0.01, 50.0
    lambdas = np.array([0.1, 0.2, 0.3])
    config = SolverConfig(gamma=gamma, eta=eta, lambdas=lambdas, alpha=0.0, beta=10.0)
    rng = np.random.default_rng(13)
    omega = project_spectral_box(_random_symmetric(rng, 3) + 2 * np.eye(3), 0.0, 10.0)
    u = _random_symmetric(rng, 3, scale=0.1)
    g0 = grad_f(omega, x, tau_sq)
    state = Pd3oState(omega=omega, u=u, grad_cache=g0, iteration=4)
    out = pd3o_step(state, x, tau_sq, config)

    omega1 = project_spectral_box(omega - gamma * (u + g0), 0.0, 10.0)
    g1 = grad_f(omega1, x, tau_sq)
    v = u + eta * (2.0 * omega1 - omega) + gamma * eta * (g0 - g1)
    prox = prox_g_over_eta(v, eta, tau_sq, lambdas)
    assert np.array_equal(out.omega, omega1)
    assert np.array_equal(out.u, v - eta * prox)
    assert np.array_equal(out.prox, prox)
    assert np.array_equal(out.grad_cache, g1)
    assert out.iteration == 5


def test_one_gradient_evaluation_per_iteration(monkeypatch):
    x, tau_sq = _instance(17, n=30, p=4)
    calls = []
    real = solver_mod.grad_f

    def counting(*args, **kwargs):
        calls.append(1)
        return real(*args, **kwargs)

    monkeypatch.setattr(solver_mod, "grad_f", counting)
    config = SolverConfig(lambdas=0.05, tol=1e-300, max_iter=25)
    result = solve_jpr(x, tau_sq, config)
    assert result.iterations == 25
    # one evaluation to seed the cache, then one per iteration
    assert len(calls) == 26


def test_solver_reaches_reference_optimum():
    x, tau_sq = _instance(23, n=40, p=4)
    lambdas = np.full(4, 0.08)
    config = SolverConfig(lambdas=lambdas, tol=1e-10, max_iter=200000)
    result = solve_jpr(x, tau_sq, config)
    assert result.converged
    ref, min_eig = reference_prox_grad(x, tau_sq, lambdas)
    assert min_eig > 1e-8  # interior optimum, box constraint inactive
    got = objective_value(result.prox_omega, x, tau_sq, lambdas)
    best = objective_value(ref, x, tau_sq, lambdas)
    assert abs(got - best) <= 1e-8 * max(1.0, abs(best))


def test_lambda_zero_recovers_inverse_covariance():
    rng = np.random.default_rng(29)
    x = rng.standard_normal((300, 4))
    x -= x.mean(axis=0)
    S = x.T @ x / x.shape[0]
    # residual variances of exact least squares regressions
    tau_sq = 1.0 / np.diag(np.linalg.inv(S))
    config = SolverConfig(lambdas=0.0, tol=1e-12, max_iter=100000)
    result = solve_jpr(x, tau_sq, config)
    target = np.linalg.inv(S)
    rel = np.linalg.norm(result.omega - target) / np.linalg.norm(target)
    assert rel <= 1e-6


def test_solver_is_deterministic():
    x, tau_sq = _instance(31, p=5)
    config = SolverConfig(lambdas=0.1, tol=1e-9, max_iter=50000)
    a = solve_jpr(x, tau_sq, config)
    b = solve_jpr(x, tau_sq, config)
    assert np.array_equal(a.omega, b.omega)
    assert np.array_equal(a.u, b.u)
    assert np.array_equal(a.prox_omega, b.prox_omega)
    assert a.iterations == b.iterations


def test_solver_respects_spectral_box():
    x, tau_sq = _instance(37, n=80, p=5)
    config = SolverConfig(lambdas=0.02, alpha=0.3, beta=1.4, tol=1e-9, max_iter=50000)
    result = solve_jpr(x, tau_sq, config)
    w = np.linalg.eigvalsh(result.omega)
    assert w.min() >= 0.3 - 1e-8
    assert w.max() <= 1.4 + 1e-8


def test_solver_iteration_cap_and_history():
    x, tau_sq = _instance(41)
    config = SolverConfig(lambdas=0.05, tol=1e-300, max_iter=7)
    result = solve_jpr(x, tau_sq, config, keep_history=True)
    assert not result.converged
    assert result.iterations == 7
    assert len(result.residual_history) == 7
    assert result.residual_history[-1] == result.residual
    assert np.all(np.isfinite(result.omega))


def test_prox_output_structure():
    x, tau_sq = _instance(43, n=50, p=6)
    config = SolverConfig(lambdas=0.5, tol=1e-9, max_iter=50000)
    result = solve_jpr(x, tau_sq, config)
    assert np.array_equal(np.diag(result.prox_omega), 1.0 / tau_sq)
    off = result.prox_omega[~np.eye(6, dtype=bool)]
    assert np.any(off == 0.0)  # heavy penalty produces exact zeros


def test_default_omega0_is_feasible_diagonal():
    tau_sq = np.array([0.5, 2.0])
    w0 = default_omega0(tau_sq, alpha=0.0, beta=1.0)
    assert np.allclose(w0, np.diag([1.0, 0.5]), atol=1e-12)


def test_config_validation():
    with pytest.raises(ConfigError):
        SolverConfig(loss="cubic")
    with pytest.raises(ConfigError):
        SolverConfig(huber_rho=0.0)
    with pytest.raises(ConfigError):
        SolverConfig(alpha=-0.1)
    with pytest.raises(ConfigError):
        SolverConfig(alpha=1.0, beta=1.0)
    with pytest.raises(ConfigError):
        SolverConfig(tol=0.0)
    with pytest.raises(ConfigError):
        SolverConfig(max_iter=0)
    with pytest.raises(ConfigError):
        SolverConfig(gamma=-1.0)


def test_solve_rejects_bad_inputs():
    x, tau_sq = _instance(47)
    with pytest.raises(DegenerateVarianceError):
        solve_jpr(x, np.array([1.0, 0.0, 1.0, 1.0]), SolverConfig())
    with pytest.raises(ConfigError):
        solve_jpr(x, tau_sq[:3], SolverConfig())
    with pytest.raises(ConfigError):
        solve_jpr(x, tau_sq, SolverConfig(lambdas=np.ones(3)))
    with pytest.raises(ConfigError):
        solve_jpr(x, tau_sq, SolverConfig(lambdas=-0.1))
    L = lipschitz_constant(x, tau_sq)
    with pytest.raises(ConfigError):
        solve_jpr(x, tau_sq, SolverConfig(gamma=2.1 / L))
    with pytest.raises(ConfigError):
        solve_jpr(x, tau_sq, SolverConfig(gamma=1.0 / L, eta=1.5 * L))
    with pytest.raises(ConfigError):
        solve_jpr(x, tau_sq, SolverConfig(), omega0=np.eye(3))


def test_pd3o_step_requires_explicit_steps():
    x, tau_sq = _instance(53)
    state = Pd3oState(np.eye(4), np.zeros((4, 4)), None, 0)
    with pytest.raises(ConfigError):
        pd3o_step(state, x, tau_sq, SolverConfig())
