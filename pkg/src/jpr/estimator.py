"""Two-stage estimator: per-feature lasso, then the joint solve.

The fitted precision matrix Omega_hat has diagonal exactly 1/tau_j^2 and
off-diagonal entries from the final proximal map (so soft-thresholded zeros
are exact). The partial-correlation matrix is Q_hat = -T Omega_hat T with
T = diag(tau), giving diag(Q_hat) = -1; entry (j, k) is the negated sign
convention rho_jk = -Omega_jk / sqrt(Omega_jj Omega_kk).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import DataMatrix, center_columns, standardize_columns
from .errors import DegenerateFeatureError, DegenerateVarianceError, ShapeError
from .lasso import LambdaRule, LassoFit, fit_all_features
from .solver import JprSolveResult, SolverConfig, project_spectral_box, solve_jpr


@dataclass(frozen=True)
class SolveDiagnostics:
    """Convergence summary of the joint stage."""

    iterations: int
    residual: float
    converged: bool
    diag_deviation: float
    residual_history: list | None = None


@dataclass(frozen=True)
class JprEstimate:
    """Fitted model.

    Attributes
    ----------
    omega_hat : ndarray (p, p)
        Precision estimate; symmetric, diagonal exactly 1/tau_j^2.
    q_hat : ndarray (p, p)
        Partial correlations, -T omega_hat T; diagonal exactly -1.
    tau : ndarray (p,)
        Residual scales tau_j from the first stage.
    lambdas : ndarray (p,)
        Selected per-feature penalty levels.
    stage1 : list of LassoFit
        The per-feature regressions (for audit).
    solve_diag : SolveDiagnostics
        Joint-stage convergence information.
    """

    omega_hat: np.ndarray
    q_hat: np.ndarray
    tau: np.ndarray
    lambdas: np.ndarray
    stage1: list[LassoFit]
    solve_diag: SolveDiagnostics


def _stage1_matrix(stage1: list[LassoFit]) -> np.ndarray:
    """M with M_jj = 1/tau_j^2 and column j off-diagonal -theta_j / tau_j^2."""
    p = len(stage1)
    M = np.zeros((p, p))
    for j, fit in enumerate(stage1):
        if fit.tau_sq <= 0:
            raise DegenerateVarianceError(f"feature {j}: residual variance is not positive")
        if fit.theta.shape != (p - 1,):
            raise ShapeError(f"feature {j}: theta has length {fit.theta.shape[0]}, expected {p - 1}")
        rows = np.concatenate([np.arange(j), np.arange(j + 1, p)])
        M[rows, j] = -fit.theta / fit.tau_sq
        M[j, j] = 1.0 / fit.tau_sq
    return M


def init_omega(stage1: list[LassoFit], alpha: float = 0.0, beta: float = np.inf) -> np.ndarray:
    """Feasible start for the joint solve: the stage-1 matrix projected onto the box."""
    return project_spectral_box(_stage1_matrix(stage1), alpha, beta)


def partial_correlation_from(omega, tau) -> np.ndarray:
    """Q with Q_jk = -tau_j tau_k Omega_jk."""
    omega = np.asarray(omega, dtype=float)
    tau = np.asarray(tau, dtype=float)
    return -np.outer(tau, tau) * omega


def _prepare(X, center: bool, standardize: bool) -> DataMatrix:
    if not isinstance(X, DataMatrix):
        X = DataMatrix(np.asarray(X, dtype=float))
    if X.n < 2:
        raise ShapeError(f"need at least 2 rows to estimate, got {X.n}")
    std = X.values.std(axis=0)
    zero = np.flatnonzero(std == 0.0)
    if zero.size:
        raise DegenerateFeatureError(f"feature {zero[0]}: zero variance")
    if center and not X.centered:
        X = center_columns(X)
    if standardize:
        X = standardize_columns(X)
    return X


def fit(
    X,
    rule: LambdaRule | None = None,
    config: SolverConfig | None = None,
    center: bool = True,
    standardize: bool = False,
    stage1_tol: float = 1e-6,
    stage1_max_iter: int = 1000,
    workers: int = 1,
) -> JprEstimate:
    """Fit the two-stage estimator.

    Parameters
    ----------
    X : DataMatrix or array of shape (n, p)
        Observations. Columns are mean-centered by default (``center=False``
        opts out); ``standardize=True`` additionally scales columns to unit
        standard deviation.
    rule : LambdaRule
        Penalty selection rule; default LambdaRule.theory(c=1.0).
    config : SolverConfig
        Joint-stage settings; default SolverConfig() (automatic step sizes).
    workers : int
        Thread count for the independent per-feature regressions.

    Returns
    -------
    JprEstimate

    Example
    -------
    >>> est = fit(x, rule=LambdaRule.cv(folds=5, seed=0))
    >>> est.q_hat[0, 1]   # partial correlation between features 0 and 1
    """
    if rule is None:
        rule = LambdaRule.theory(1.0)
    if config is None:
        config = SolverConfig()
    X = _prepare(X, center, standardize)

    stage1 = fit_all_features(X, rule, tol=stage1_tol, max_iter=stage1_max_iter, workers=workers)
    tau_sq = np.array([f.tau_sq for f in stage1])
    bad = np.flatnonzero(tau_sq <= 0)
    if bad.size:
        raise DegenerateVarianceError(
            f"feature {bad[0]}: residual variance is zero (exact collinearity)"
        )
    lambdas = np.array([f.lam for f in stage1])
    cfg = replace(config, lambdas=lambdas)

    omega0 = init_omega(stage1, cfg.alpha, cfg.beta)
    result = solve_jpr(X, tau_sq, cfg, omega0=omega0)

    # Off-diagonal from the proximal output keeps thresholded zeros exact;
    # symmetrize and pin the diagonal to exactly 1/tau^2.
    P = result.prox_omega
    omega_hat = 0.5 * (P + P.T)
    np.fill_diagonal(omega_hat, 1.0 / tau_sq)

    tau = np.sqrt(tau_sq)
    q_hat = partial_correlation_from(omega_hat, tau)
    np.fill_diagonal(q_hat, -1.0)

    diag = SolveDiagnostics(
        iterations=result.iterations,
        residual=result.residual,
        converged=result.converged,
        diag_deviation=result.diag_deviation,
        residual_history=result.residual_history,
    )
    return JprEstimate(omega_hat, q_hat, tau, lambdas, stage1, diag)


def naive_symmetrized(
    X,
    rule: LambdaRule | None = None,
    center: bool = True,
    tol: float = 1e-6,
    max_iter: int = 1000,
    workers: int = 1,
) -> np.ndarray:
    """Baseline: symmetrize the stage-1 matrix by averaging, (M + M^T)/2.

    No projection and no joint stage; the result need not be positive
    semidefinite.
    """
    if rule is None:
        rule = LambdaRule.theory(1.0)
    X = _prepare(X, center, False)
    stage1 = fit_all_features(X, rule, tol=tol, max_iter=max_iter, workers=workers)
    M = _stage1_matrix(stage1)
    return 0.5 * (M + M.T)


def edges(q_hat, threshold: float = 0.0) -> list[tuple[int, int, float]]:
    """Off-diagonal entries with |Q_jk| > threshold as (j, k, weight), j < k.

    Indices are 0-based. Sorted by descending |weight|; ties break on the
    (j, k) pair lexicographically. The default threshold 0 keeps exactly the
    nonzero entries (the estimator's zeros are exact soft-threshold zeros).
    """
    q_hat = np.asarray(q_hat, dtype=float)
    if q_hat.ndim != 2 or q_hat.shape[0] != q_hat.shape[1]:
        raise ShapeError("q_hat must be square")
    ju, ku = np.triu_indices(q_hat.shape[0], k=1)
    w = q_hat[ju, ku]
    mask = np.abs(w) > threshold
    items = [(int(j), int(k), float(v)) for j, k, v in zip(ju[mask], ku[mask], w[mask])]
    items.sort(key=lambda e: (-abs(e[2]), e[0], e[1]))
    return items
