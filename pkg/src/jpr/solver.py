"""Second stage: joint estimation by primal-dual proximal splitting.

Solves

    minimize_Omega  f(Omega) + g(Omega)   subject to  alpha I <= Omega <= beta I

where, with residual columns r_j(Omega) = X_j + tau_j^2 X_rest Omega_offdiag_j,

    f(Omega) = sum_j loss(r_j(Omega)),
    g(Omega) = sum_j ( lam_j tau_j^2 ||Omega_offdiag_j||_1
                       + indicator{Omega_jj = 1/tau_j^2} ),

loss is quadratic (1/2n)||z||^2 or Huber (1/n) sum phi_rho(z_i). The spectral
box constraint is handled by projection in the primal update; g is handled
through its proximal map in the dual update. One gradient evaluation is
performed per iteration (the previous gradient is carried in the state).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .data import DataMatrix
from .errors import (
    ConfigError,
    DegenerateVarianceError,
    EigenFailureError,
    NonFiniteError,
)
from .lasso import top_eigenvalue

LOSSES = ("quadratic", "huber")


@dataclass(frozen=True)
class SolverConfig:
    """Settings for the joint stage.

    gamma/eta of None means automatic step sizes gamma = 1/L, eta = 1/gamma,
    where L is the gradient Lipschitz constant of f. Explicit values must
    satisfy gamma < 2/L and gamma * eta <= 1 at solve time. ``lambdas`` may be
    a scalar (broadcast to all features) or a length-p vector.
    """

    loss: str = "quadratic"
    huber_rho: float = 1.345
    alpha: float = 0.0
    beta: float = np.inf
    gamma: float | None = None
    eta: float | None = None
    tol: float = 1e-6
    max_iter: int = 10000
    lambdas: object = 0.0

    def __post_init__(self):
        if self.loss not in LOSSES:
            raise ConfigError(f"unknown loss {self.loss!r}")
        if self.huber_rho <= 0:
            raise ConfigError("huber_rho must be positive")
        if self.alpha < 0:
            raise ConfigError("alpha must be nonnegative")
        if not self.beta > self.alpha:
            raise ConfigError("beta must exceed alpha")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        for name in ("gamma", "eta"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError(f"{name} must be positive when given")


@dataclass(frozen=True)
class Pd3oState:
    """One iterate of the primal-dual splitting loop."""

    omega: np.ndarray
    u: np.ndarray
    grad_cache: np.ndarray
    iteration: int
    prox: np.ndarray | None = None


@dataclass(frozen=True)
class JprSolveResult:
    """Output of solve_jpr.

    ``omega`` is the final projected primal iterate; ``prox_omega`` is the
    final proximal-map output for g (same limit, exact zeros off-diagonal and
    exact 1/tau^2 diagonal). ``diag_deviation`` is
    max_j |omega_jj - 1/tau_j^2| for the projected iterate.
    """

    omega: np.ndarray
    u: np.ndarray
    prox_omega: np.ndarray
    iterations: int
    residual: float
    converged: bool
    diag_deviation: float
    residual_history: list | None = None


def project_spectral_box(A, alpha: float = 0.0, beta: float = np.inf) -> np.ndarray:
    """Project a square matrix onto {S symmetric : alpha I <= S <= beta I}.

    Symmetrizes to (A + A^T)/2, eigendecomposes, clips the spectrum to
    [alpha, beta], and reconstructs.
    """
    A = np.asarray(A, dtype=float)
    sym = 0.5 * (A + A.T)
    try:
        w, Q = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigendecomposition failed: {exc}") from exc
    np.clip(w, alpha, beta, out=w)
    out = (Q * w) @ Q.T
    return 0.5 * (out + out.T)


def loss_gradient(z, loss: str = "quadratic", huber_rho: float = 1.345) -> np.ndarray:
    """Gradient of the per-column loss at residual vector z (length n).

    quadratic: z/n.  huber: (1/n) * clip(z, -rho, rho).
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[0]
    if loss == "quadratic":
        return z / n
    if loss == "huber":
        return np.clip(z, -huber_rho, huber_rho) / n
    raise ConfigError(f"unknown loss {loss!r}")


def _residual_matrix(omega, Xv, tau_sq):
    # column j: X_j + tau_j^2 * (X omega_col_j - X_j omega_jj)
    scaled = (Xv @ omega) * tau_sq[None, :]
    return Xv + scaled - Xv * (tau_sq * np.diag(omega))[None, :]


def grad_f(omega, X, tau_sq, loss: str = "quadratic", huber_rho: float = 1.345,
           gram=None) -> np.ndarray:
    """Gradient of the smooth term f at Omega (p x p, zero diagonal).

    Column j is tau_j^2 * X_rest^T loss_gradient(r_j(Omega)) placed on the
    off-diagonal entries; the diagonal is zero (those entries are pinned by g).
    For the quadratic loss a precomputed ``gram`` = X^T X / n enables an
    O(p^3) evaluation that never touches the data matrix.
    """
    omega = np.asarray(omega, dtype=float)
    tau_sq = np.asarray(tau_sq, dtype=float)
    if loss == "quadratic" and gram is not None:
        S = gram
        W = S + (S @ omega) * tau_sq[None, :] - S * (tau_sq * np.diag(omega))[None, :]
    else:
        Xv = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=float)
        R = _residual_matrix(omega, Xv, tau_sq)
        n = Xv.shape[0]
        if loss == "quadratic":
            Psi = R / n
        elif loss == "huber":
            Psi = np.clip(R, -huber_rho, huber_rho) / n
        else:
            raise ConfigError(f"unknown loss {loss!r}")
        W = Xv.T @ Psi
    grad = W * tau_sq[None, :]
    np.fill_diagonal(grad, 0.0)
    return grad


def lipschitz_constant(X, tau_sq, gram=None) -> float:
    """L = max_j tau_j^4 * lambda_max(X_rest_j^T X_rest_j) / n.

    ``gram`` = X^T X may be passed to avoid recomputing it; each feature's
    submatrix is the Gram matrix with row/column j removed.
    """
    Xv = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=float)
    n, p = Xv.shape
    if gram is None:
        gram = Xv.T @ Xv
    tau_sq = np.asarray(tau_sq, dtype=float)
    L = 0.0
    idx = np.arange(p)
    for j in range(p):
        keep = idx != j
        top = top_eigenvalue(gram[np.ix_(keep, keep)])
        L = max(L, tau_sq[j] ** 2 * top / n)
    return L


def smooth_objective(omega, X, tau_sq, loss: str = "quadratic",
                     huber_rho: float = 1.345) -> float:
    """Value of f at Omega."""
    Xv = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=float)
    tau_sq = np.asarray(tau_sq, dtype=float)
    R = _residual_matrix(np.asarray(omega, dtype=float), Xv, tau_sq)
    n = Xv.shape[0]
    if loss == "quadratic":
        return float(np.sum(R * R)) / (2.0 * n)
    if loss == "huber":
        a = np.abs(R)
        phi = np.where(a <= huber_rho, 0.5 * R * R, huber_rho * (a - 0.5 * huber_rho))
        return float(np.sum(phi)) / n
    raise ConfigError(f"unknown loss {loss!r}")


def objective_value(omega, X, tau_sq, lambdas, loss: str = "quadratic",
                    huber_rho: float = 1.345) -> float:
    """f(Omega) plus the weighted off-diagonal l1 penalty.

    The diagonal indicator part of g is excluded; callers evaluate this at
    points whose diagonal satisfies (or nearly satisfies) the constraint.
    """
    omega = np.asarray(omega, dtype=float)
    tau_sq = np.asarray(tau_sq, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float)
    col_l1 = np.sum(np.abs(omega), axis=0) - np.abs(np.diag(omega))
    penalty = float(np.sum(lambdas * tau_sq * col_l1))
    return smooth_objective(omega, X, tau_sq, loss, huber_rho) + penalty


def prox_g_over_eta(V, eta: float, tau_sq, lambdas) -> np.ndarray:
    """Proximal map of g/eta evaluated at V/eta.

    Column j: diagonal entry 1/tau_j^2; off-diagonal entries
    sign(V_kj) * max(|V_kj| - tau_j^2 lam_j, 0) / eta.
    """
    V = np.asarray(V, dtype=float)
    tau_sq = np.asarray(tau_sq, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float)
    thr = (tau_sq * lambdas)[None, :]
    P = np.sign(V) * np.maximum(np.abs(V) - thr, 0.0) / eta
    np.fill_diagonal(P, 1.0 / tau_sq)
    return P


def _resolve(config: SolverConfig, X, tau_sq, gram_raw=None) -> tuple:
    """Fill in automatic step sizes and broadcast lambdas; validate."""
    Xv = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=float)
    p = Xv.shape[1]
    tau_sq = np.asarray(tau_sq, dtype=float)
    if tau_sq.shape != (p,):
        raise ConfigError(f"tau_sq must have length {p}")
    if np.any(tau_sq <= 0):
        j = int(np.flatnonzero(tau_sq <= 0)[0])
        raise DegenerateVarianceError(f"feature {j}: residual variance is not positive")
    lambdas = np.asarray(config.lambdas, dtype=float)
    if lambdas.ndim == 0:
        lambdas = np.full(p, float(lambdas))
    if lambdas.shape != (p,):
        raise ConfigError(f"lambdas must be a scalar or length-{p} vector")
    if np.any(lambdas < 0):
        raise ConfigError("lambdas must be nonnegative")

    L = lipschitz_constant(Xv, tau_sq, gram=gram_raw)
    if L <= 0:
        raise DegenerateVarianceError("data matrix is zero, gradient has no curvature")
    gamma = config.gamma if config.gamma is not None else 1.0 / L
    eta = config.eta if config.eta is not None else 1.0 / gamma
    if not gamma < 2.0 / L:
        raise ConfigError(f"gamma = {gamma} violates gamma < 2/L with L = {L}")
    if gamma * eta > 1.0 + 1e-12:
        raise ConfigError(f"gamma * eta = {gamma * eta} exceeds 1")
    resolved = replace(config, gamma=gamma, eta=eta, lambdas=lambdas)
    return resolved, tau_sq, L


def pd3o_step(state: Pd3oState, X, tau_sq, config: SolverConfig, gram=None) -> Pd3oState:
    """One primal-dual iteration.

    Requires explicit gamma/eta and a length-p lambdas vector in ``config``
    (solve_jpr resolves automatic values before looping). Exactly one new
    gradient is evaluated; the previous one is reused from the state.
    """
    if config.gamma is None or config.eta is None:
        raise ConfigError("pd3o_step needs explicit gamma and eta")
    gamma, eta = config.gamma, config.eta
    tau_sq = np.asarray(tau_sq, dtype=float)
    lambdas = np.asarray(config.lambdas, dtype=float)
    grad = state.grad_cache
    if grad is None:
        grad = grad_f(state.omega, X, tau_sq, config.loss, config.huber_rho, gram=gram)

    omega_new = project_spectral_box(
        state.omega - gamma * (state.u + grad), config.alpha, config.beta
    )
    grad_new = grad_f(omega_new, X, tau_sq, config.loss, config.huber_rho, gram=gram)
    v = state.u + eta * (2.0 * omega_new - state.omega) + gamma * eta * (grad - grad_new)
    prox = prox_g_over_eta(v, eta, tau_sq, lambdas)
    u_new = v - eta * prox
    return Pd3oState(omega_new, u_new, grad_new, state.iteration + 1, prox)


def default_omega0(tau_sq, alpha: float = 0.0, beta: float = np.inf) -> np.ndarray:
    """Feasible diagonal start diag(1/tau_j^2), projected onto the box."""
    tau_sq = np.asarray(tau_sq, dtype=float)
    return project_spectral_box(np.diag(1.0 / tau_sq), alpha, beta)


def solve_jpr(
    X,
    tau_sq,
    config: SolverConfig,
    omega0=None,
    keep_history: bool = False,
) -> JprSolveResult:
    """Run the primal-dual loop to tolerance.

    Stops when max(||Omega_{k+1} - Omega_k||_F, ||U_{k+1} - U_k||_F) <= tol,
    or at max_iter with converged=False (the last iterate is still returned).
    X should be centered; tau_sq entries must be positive.
    """
    Xv = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=float)
    n, p = Xv.shape
    gram_raw = Xv.T @ Xv
    config, tau_sq, _ = _resolve(config, Xv, tau_sq, gram_raw=gram_raw)
    gram = gram_raw / n if config.loss == "quadratic" else None

    if omega0 is None:
        omega0 = default_omega0(tau_sq, config.alpha, config.beta)
    omega0 = np.asarray(omega0, dtype=float)
    if omega0.shape != (p, p):
        raise ConfigError(f"omega0 must be {p}x{p}")

    state = Pd3oState(
        omega=omega0,
        u=np.zeros((p, p)),
        grad_cache=grad_f(omega0, Xv, tau_sq, config.loss, config.huber_rho, gram=gram),
        iteration=0,
    )
    history = [] if keep_history else None
    residual = np.inf
    converged = False
    for _ in range(config.max_iter):
        new = pd3o_step(state, Xv, tau_sq, config, gram=gram)
        residual = max(
            float(np.linalg.norm(new.omega - state.omega)),
            float(np.linalg.norm(new.u - state.u)),
        )
        if not np.isfinite(residual):
            raise NonFiniteError("solver iterates diverged to non-finite values")
        if history is not None:
            history.append(residual)
        state = new
        if residual <= config.tol:
            converged = True
            break

    # max_iter >= 1, so at least one step ran and state.prox is set
    diag_dev = float(np.max(np.abs(np.diag(state.omega) - 1.0 / tau_sq)))
    return JprSolveResult(
        omega=state.omega,
        u=state.u,
        prox_omega=state.prox,
        iterations=state.iteration,
        residual=residual,
        converged=converged,
        diag_deviation=diag_dev,
        residual_history=history,
    )
