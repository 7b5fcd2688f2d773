"""
Inside the joint solver
=======================

The second stage runs a primal-dual splitting loop with one gradient
evaluation and one eigendecomposition per iteration. This script watches
the residual fall and shows what the step sizes and the spectral box do.
"""

import numpy as np

from jpr import (
    LambdaRule,
    PrecisionModelSpec,
    SolverConfig,
    fit_all_features,
    lipschitz_constant,
    make_ground_truth,
    sample_gaussian,
    solve_jpr,
)
from jpr.data import center_columns

truth = make_ground_truth(PrecisionModelSpec(kind="ar1", p=15, seed=5))
data = center_columns(sample_gaussian(truth.sigma_star, n=250, seed=9))

# The solver consumes the residual variances from the first stage.
stage1 = fit_all_features(data, LambdaRule.theory(1.0))
tau_sq = np.array([f.tau_sq for f in stage1])

# Automatic step sizes are gamma = 1/L and eta = 1/gamma, where L bounds the
# curvature of the smooth term.
L = lipschitz_constant(data.values, tau_sq)
print(f"gradient Lipschitz constant L = {L:.3f}, so gamma = {1.0 / L:.3f}")

result = solve_jpr(data.values, tau_sq, SolverConfig(lambdas=0.1, tol=1e-10,
                                                     max_iter=50_000),
                   keep_history=True)
print(f"converged in {result.iterations} iterations")
print("residual every 25 iterations:")
for i in range(0, result.iterations, 25):
    print(f"  iter {i + 1:4d}: {result.residual_history[i]:.3e}")

# A smaller gamma still converges (the condition is gamma < 2/L), just slower.
slow = solve_jpr(data.values, tau_sq,
                 SolverConfig(lambdas=0.1, gamma=0.2 / L, eta=L / 0.2,
                              tol=1e-10, max_iter=50_000))
print(f"with gamma = 0.2/L: {slow.iterations} iterations to the same tolerance")

# The box constraint clips the spectrum. An upper bound beta below the
# unconstrained top eigenvalue becomes active at the solution.
w_free = np.linalg.eigvalsh(result.omega)
beta = 0.8 * w_free.max()
boxed = solve_jpr(data.values, tau_sq,
                  SolverConfig(lambdas=0.1, beta=beta, tol=1e-10, max_iter=50_000))
w_boxed = np.linalg.eigvalsh(boxed.omega)
print(f"unconstrained spectrum: [{w_free.min():.3f}, {w_free.max():.3f}]")
print(f"with beta = {beta:.3f}:   [{w_boxed.min():.3f}, {w_boxed.max():.3f}]")
