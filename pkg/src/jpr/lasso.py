"""First stage: per-feature lasso regressions solved with FISTA.

Each feature j is regressed on the remaining p-1 features,

    theta_j = argmin_theta (1/2n) ||X_j - X_rest theta||^2 + lambda ||theta||_1,

and the residual variance tau_j^2 = (1/n) ||X_j - X_rest theta_j||^2 feeds the
joint second stage. Entry k of theta_j corresponds to original feature k when
k < j and to feature k+1 otherwise.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .data import DataMatrix
from .errors import (
    ConfigError,
    DegenerateFeatureError,
    EmptyGridError,
    JprError,
    NonFiniteError,
    ShapeError,
)

# Selection-grade accuracy for fold fits inside lambda selection; the final
# per-feature fit runs at the caller's tolerance.
_SELECT_TOL = 1e-4
_SELECT_MAX_ITER = 500


@dataclass(frozen=True)
class LassoFit:
    """Result of one per-feature lasso regression.

    Attributes
    ----------
    theta : ndarray of shape (p-1,)
        Fitted coefficients in deleted-column order.
    tau_sq : float
        Residual variance (1/n)||y - X_rest theta||^2.
    lam : float
        Penalty level used for the fit.
    iterations : int
        FISTA iterations performed.
    converged : bool
        Whether the iterate-change criterion met the tolerance.
    """

    theta: np.ndarray
    tau_sq: float
    lam: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class LambdaRule:
    """How the per-feature penalty level is chosen.

    Use the constructors: ``LambdaRule.fixed(0.1)``, ``LambdaRule.theory(c=1.0)``,
    ``LambdaRule.cv(folds=5, seed=0)``, ``LambdaRule.ic(criterion="bic")``.
    ``grid=None`` means the per-feature default grid: 16 log-spaced points
    spanning [0.01, 1] * ||X_rest^T y / n||_inf.
    """

    kind: str
    value: float = 0.0
    c: float = 1.0
    grid: np.ndarray | None = None
    folds: int = 5
    criterion: str = "bic"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("fixed", "theory", "cv", "ic"):
            raise ConfigError(f"unknown lambda rule {self.kind!r}")
        if self.kind == "fixed" and self.value < 0:
            raise ConfigError("fixed lambda must be nonnegative")
        if self.kind == "cv" and self.folds < 2:
            raise ConfigError("cv needs at least 2 folds")
        if self.kind == "ic" and self.criterion not in ("aic", "bic"):
            raise ConfigError(f"unknown information criterion {self.criterion!r}")
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=float)
            if grid.size == 0:
                raise EmptyGridError("candidate grid is empty")
            if np.any(grid < 0):
                raise ConfigError("candidate lambdas must be nonnegative")
            grid = np.sort(grid)
            grid.setflags(write=False)
            object.__setattr__(self, "grid", grid)

    @classmethod
    def fixed(cls, value: float) -> "LambdaRule":
        return cls(kind="fixed", value=value)

    @classmethod
    def theory(cls, c: float = 1.0) -> "LambdaRule":
        return cls(kind="theory", c=c)

    @classmethod
    def cv(cls, grid=None, folds: int = 5, seed: int = 0) -> "LambdaRule":
        return cls(kind="cv", grid=grid, folds=folds, seed=seed)

    @classmethod
    def ic(cls, grid=None, criterion: str = "bic") -> "LambdaRule":
        return cls(kind="ic", grid=grid, criterion=criterion)


def theory_lambda(c: float, p: float, n: float) -> float:
    """Rate-motivated level c * sqrt(log(p) / n)."""
    return c * math.sqrt(math.log(p) / n)


def soft_threshold(z, t):
    """Elementwise sign(z) * max(|z| - t, 0)."""
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def top_eigenvalue(sym) -> float:
    """Largest eigenvalue of a small dense symmetric matrix."""
    sym = np.asarray(sym, dtype=float)
    m = sym.shape[0]
    if m == 1:
        return float(sym[0, 0])
    vals = scipy.linalg.eigh(sym, eigvals_only=True, subset_by_index=[m - 1, m - 1])
    return float(vals[0])


def residual_variance(y, X_rest, theta) -> float:
    """(1/n) || y - X_rest theta ||^2."""
    y = np.asarray(y, dtype=float)
    r = y - np.asarray(X_rest, dtype=float) @ np.asarray(theta, dtype=float)
    return float(r @ r) / y.shape[0]


def fista_lasso(
    X_rest,
    y,
    lam: float,
    tol: float = 1e-6,
    max_iter: int = 1000,
    gram=None,
    xty=None,
    lipschitz=None,
) -> LassoFit:
    """Solve one lasso problem with FISTA.

    Minimizes (1/2n)||y - X_rest theta||^2 + lam * ||theta||_1 starting from
    theta = 0, step size 1/L with L = lambda_max(X_rest^T X_rest)/n, momentum
    t_{k+1} = (1 + sqrt(1 + 4 t_k^2))/2. Convergence is declared when
    ||theta_{k+1} - theta_k||_2 <= tol; hitting max_iter returns the last
    iterate with converged=False.

    ``gram`` (X_rest^T X_rest), ``xty`` (X_rest^T y) and ``lipschitz`` may be
    supplied to avoid recomputation; the iteration is identical.
    """
    A = np.asarray(X_rest, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if lam < 0:
        raise ConfigError("lambda must be nonnegative")
    if gram is None:
        gram = A.T @ A
    if xty is None:
        xty = A.T @ y
    if lipschitz is None:
        lipschitz = top_eigenvalue(gram) / n

    m = A.shape[1]
    theta = np.zeros(m)
    if lipschitz <= 0.0:
        # Zero design: objective is constant in theta, 0 is optimal.
        return LassoFit(theta, residual_variance(y, A, theta), lam, 0, True)

    step = 1.0 / lipschitz
    z = theta
    t = 1.0
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        grad = (gram @ z - xty) / n
        theta_new = soft_threshold(z - step * grad, lam * step)
        if not np.all(np.isfinite(theta_new)):
            raise NonFiniteError("lasso iterate diverged to non-finite values")
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        z = theta_new + ((t - 1.0) / t_new) * (theta_new - theta)
        diff = float(np.linalg.norm(theta_new - theta))
        theta = theta_new
        t = t_new
        if diff <= tol:
            converged = True
            break

    return LassoFit(theta, residual_variance(y, A, theta), lam, iterations, converged)


def _default_grid(xty, n: int) -> np.ndarray:
    """16 log-spaced candidates spanning [0.01, 1] * ||X_rest^T y / n||_inf."""
    lam_max = float(np.max(np.abs(xty))) / n
    if lam_max <= 0.0:
        return np.array([0.0])
    return np.geomspace(0.01 * lam_max, lam_max, 16)


def _pick_min_prefer_larger(grid, scores):
    """Index of the minimal score; exact ties resolve to the larger lambda."""
    best = 0
    for i in range(1, len(grid)):
        if scores[i] < scores[best] or (scores[i] == scores[best] and grid[i] > grid[best]):
            best = i
    return best


def select_lambda(X: DataMatrix, j: int, rule: LambdaRule) -> float:
    """Choose the penalty level for feature j under the given rule.

    fixed   : the stated value.
    theory  : c * sqrt(log(p)/n).
    cv      : K-fold cross validation over the grid. Rows are shuffled with the
              rule's seed, folds are contiguous blocks of the shuffle; the
              score is the mean over folds of mean squared prediction error,
              ties resolve toward the larger lambda. Fold fits use
              selection-grade accuracy (tol 1e-4, 500 iterations).
    ic      : n*log(tau_sq(lam)) + penalty*card(theta(lam)) on the full data,
              penalty 2 for aic and log(n) for bic; ties toward larger lambda.
    """
    values = X.values
    n, p = values.shape
    if not 0 <= j < p:
        raise ShapeError(f"feature index {j} out of range for p={p}")
    y = values[:, j]
    if np.all(y == y[0]):
        raise DegenerateFeatureError(f"feature {j}: zero variance")

    if rule.kind == "fixed":
        return float(rule.value)
    if rule.kind == "theory":
        return theory_lambda(rule.c, p, n)

    A = np.delete(values, j, axis=1)
    if rule.grid is not None:
        grid = np.asarray(rule.grid, dtype=float)
    else:
        grid = _default_grid(A.T @ y, n)

    if rule.kind == "cv":
        folds = rule.folds
        if n < folds:
            raise ConfigError(f"{folds} folds need at least {folds} rows, got {n}")
        perm = np.random.default_rng(rule.seed).permutation(n)
        blocks = np.array_split(perm, folds)
        fold_mse = np.empty((folds, grid.size))
        for f, test_idx in enumerate(blocks):
            train_idx = np.concatenate([b for g, b in enumerate(blocks) if g != f])
            A_tr, y_tr = A[train_idx], y[train_idx]
            A_te, y_te = A[test_idx], y[test_idx]
            gram = A_tr.T @ A_tr
            xty = A_tr.T @ y_tr
            lip = top_eigenvalue(gram) / y_tr.shape[0]
            for g, lam in enumerate(grid):
                fit = fista_lasso(
                    A_tr, y_tr, lam, tol=_SELECT_TOL, max_iter=_SELECT_MAX_ITER,
                    gram=gram, xty=xty, lipschitz=lip,
                )
                resid = y_te - A_te @ fit.theta
                fold_mse[f, g] = float(resid @ resid) / y_te.shape[0]
        scores = fold_mse.mean(axis=0)
        return float(grid[_pick_min_prefer_larger(grid, scores)])

    # ic
    gram = A.T @ A
    xty = A.T @ y
    lip = top_eigenvalue(gram) / n
    penalty = 2.0 if rule.criterion == "aic" else math.log(n)
    scores = np.empty(grid.size)
    for g, lam in enumerate(grid):
        fit = fista_lasso(
            A, y, lam, tol=_SELECT_TOL, max_iter=_SELECT_MAX_ITER,
            gram=gram, xty=xty, lipschitz=lip,
        )
        tau_sq = max(fit.tau_sq, np.finfo(float).tiny)
        scores[g] = n * math.log(tau_sq) + penalty * int(np.count_nonzero(fit.theta))
    return float(grid[_pick_min_prefer_larger(grid, scores)])


def _fit_one(values, gram_full, j, rule, tol, max_iter, X):
    y = values[:, j]
    lam = select_lambda(X, j, rule)
    A = np.delete(values, j, axis=1)
    keep = np.arange(values.shape[1]) != j
    gram = gram_full[np.ix_(keep, keep)]
    xty = gram_full[keep, j]
    lip = top_eigenvalue(gram) / values.shape[0]
    return fista_lasso(A, y, lam, tol=tol, max_iter=max_iter, gram=gram, xty=xty, lipschitz=lip)


def fit_all_features(
    X: DataMatrix,
    rule: LambdaRule,
    tol: float = 1e-6,
    max_iter: int = 1000,
    workers: int = 1,
) -> list[LassoFit]:
    """Run the per-feature lasso stage for every column of X.

    X should be centered. Returns one LassoFit per feature, in column order.
    The p regressions are independent; ``workers`` > 1 runs them on a thread
    pool (the heavy kernels release the interpreter lock inside BLAS).
    """
    values = X.values
    p = values.shape[1]
    std = values.std(axis=0)
    zero = np.flatnonzero(std == 0.0)
    if zero.size:
        raise DegenerateFeatureError(f"feature {zero[0]}: zero variance")
    gram_full = values.T @ values

    def run(j):
        try:
            return _fit_one(values, gram_full, j, rule, tol, max_iter, X)
        except JprError as exc:
            if not str(exc).startswith("feature "):
                exc.args = (f"feature {j}: {exc}",)
            raise

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, range(p)))
    return [run(j) for j in range(p)]
