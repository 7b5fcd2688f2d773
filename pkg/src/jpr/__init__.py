"""Sparse precision and partial-correlation estimation by joint partial regression.

Two stages: (1) each feature is lasso-regressed on the others with FISTA,
giving coefficients and residual variances; (2) a single convex program ties
the per-feature estimates into one symmetric precision matrix inside a
spectral box, solved by primal-dual proximal splitting. The partial
correlation matrix is Q = -T Omega T with T = diag(tau).
"""

from .bench import BenchRecord, run_benchmark, write_bench_csv, write_bench_jsonl
from .data import (
    DataMatrix,
    center_columns,
    check_symmetric,
    load_csv,
    load_matrix_csv,
    standardize_columns,
    write_csv,
    write_matrix_csv,
)
from .errors import (
    ConfigError,
    DegenerateFeatureError,
    DegenerateVarianceError,
    EigenFailureError,
    EmptyGridError,
    InfeasibleDegreeError,
    InputIOError,
    JprError,
    NonFiniteError,
    NotPositiveDefiniteError,
    ParseError,
    ShapeError,
)
from .estimator import (
    JprEstimate,
    SolveDiagnostics,
    edges,
    fit,
    init_omega,
    naive_symmetrized,
    partial_correlation_from,
)
from .lasso import (
    LambdaRule,
    LassoFit,
    fista_lasso,
    fit_all_features,
    residual_variance,
    select_lambda,
    soft_threshold,
    theory_lambda,
    top_eigenvalue,
)
from .metrics import frobenius_error, operator2_error, support_metrics
from .solver import (
    JprSolveResult,
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
from .synthetic import (
    GroundTruth,
    PrecisionModelSpec,
    adjacency_to_precision,
    gen_adjacency,
    make_ground_truth,
    sample_gaussian,
)

__version__ = "0.1.0"
