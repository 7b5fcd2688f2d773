"""Command line interface.

Subcommands: estimate, bench, network, sample. Exit codes: 0 success,
1 input/config error, 2 solver non-convergence (outputs are still written).
Messages on stderr are prefixed "error: <category>:" or "warning:".
All outputs are deterministic given the flags and --seed; timing columns are
the exception. The JPR_THREADS environment variable caps thread parallelism
for the per-feature regressions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .bench import ESTIMATORS, run_benchmark, write_bench_csv, write_bench_jsonl
from .data import (
    FLOAT_FORMAT,
    DataMatrix,
    load_csv,
    load_matrix_csv,
    write_matrix_csv,
    check_symmetric,
)
from .errors import ConfigError, InputIOError, JprError, ShapeError
from .estimator import edges, fit
from .lasso import LambdaRule
from .solver import SolverConfig
from .synthetic import (
    MODEL_KINDS,
    PrecisionModelSpec,
    adjacency_to_precision,
    gen_adjacency,
    sample_gaussian,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags by default; 2 is reserved for
    non-convergence, so downgrade usage errors to exit code 1."""

    def error(self, message):
        self.exit(1, f"error: config: {message}\n")


def _workers() -> int:
    raw = os.environ.get("JPR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"JPR_THREADS={raw!r} is not an integer") from None


def _add_rule_flags(sub):
    sub.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="penalty level (rule fixed) or constant c (rule theory)")
    sub.add_argument("--lambda-rule", choices=["fixed", "theory", "cv", "ic"], default=None,
                     help="penalty selection rule; default: fixed when --lambda is given, else theory")
    sub.add_argument("--cv-folds", type=int, default=5, help="folds for the cv rule")
    sub.add_argument("--ic-criterion", choices=["aic", "bic"], default="bic",
                     help="criterion for the ic rule")


def _add_solver_flags(sub):
    sub.add_argument("--loss", choices=["quadratic", "huber"], default="quadratic")
    sub.add_argument("--huber-rho", type=float, default=None,
                     help="Huber threshold (requires --loss huber); default 1.345")
    sub.add_argument("--alpha", type=float, default=0.0, help="spectral lower bound")
    sub.add_argument("--beta", type=float, default=float("inf"), help="spectral upper bound")
    sub.add_argument("--tol", type=float, default=1e-6, help="solver stopping tolerance")
    sub.add_argument("--max-iter", type=int, default=10000, help="solver iteration cap")


def _rule_from(args) -> LambdaRule:
    kind = args.lambda_rule
    if kind is None:
        kind = "fixed" if args.lam is not None else "theory"
    if kind == "fixed":
        if args.lam is None:
            raise ConfigError("--lambda is required with --lambda-rule fixed")
        return LambdaRule.fixed(args.lam)
    if kind == "theory":
        return LambdaRule.theory(args.lam if args.lam is not None else 1.0)
    if kind == "cv":
        return LambdaRule.cv(folds=args.cv_folds, seed=args.seed)
    return LambdaRule.ic(criterion=args.ic_criterion)


def _config_from(args) -> SolverConfig:
    if args.huber_rho is not None and args.loss != "huber":
        raise ConfigError("--huber-rho requires --loss huber")
    return SolverConfig(
        loss=args.loss,
        huber_rho=args.huber_rho if args.huber_rho is not None else 1.345,
        alpha=args.alpha,
        beta=args.beta,
        tol=args.tol,
        max_iter=args.max_iter,
    )


def _write_diag(path, data: DataMatrix, est, standardized: bool) -> None:
    diag = {
        "n": data.n,
        "p": data.p,
        "feature_names": data.feature_names,
        "tau": [float(v) for v in est.tau],
        "lambdas": [float(v) for v in est.lambdas],
        "iterations": est.solve_diag.iterations,
        "residual": est.solve_diag.residual,
        "converged": est.solve_diag.converged,
        "diag_deviation": est.solve_diag.diag_deviation,
        "standardized": standardized,
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(diag, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc}") from exc


def _write_edges(path, q_hat, names, threshold: float) -> None:
    rows = edges(q_hat, threshold=threshold)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("name_j\tname_k\tweight\n")
            for j, k, w in rows:
                a = names[j] if names else str(j + 1)
                b = names[k] if names else str(k + 1)
                fh.write(f"{a}\t{b}\t{format(w, FLOAT_FORMAT)}\n")
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc}") from exc


def cmd_estimate(args) -> int:
    rule = _rule_from(args)
    config = _config_from(args)
    data = load_csv(args.input)
    est = fit(
        data, rule=rule, config=config,
        center=not args.no_center, standardize=args.standardize,
        workers=_workers(),
    )
    out = args.output
    if args.format == "matrix-csv":
        write_matrix_csv(est.omega_hat, f"{out}.omega.csv")
        write_matrix_csv(est.q_hat, f"{out}.q.csv")
    elif args.format == "json":
        payload = {"omega": est.omega_hat.tolist(), "q": est.q_hat.tolist()}
        try:
            with open(f"{out}.json", "w", encoding="utf-8") as fh:
                json.dump(payload, fh)
                fh.write("\n")
        except OSError as exc:
            raise InputIOError(f"cannot write {out}.json: {exc}") from exc
    else:  # edge-tsv: the edge list cannot carry omega, write it alongside
        _write_edges(f"{out}.edges.tsv", est.q_hat, data.feature_names, args.threshold)
        write_matrix_csv(est.omega_hat, f"{out}.omega.csv")
    _write_diag(f"{out}.diag.json", data, est, args.standardize)
    if not est.solve_diag.converged:
        print(
            f"warning: solver stopped at {est.solve_diag.iterations} iterations "
            f"with residual {est.solve_diag.residual:.3e} above tol {args.tol:.3e}",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_network(args) -> int:
    if args.matrix:
        q = load_matrix_csv(args.input)
        if not check_symmetric(q, tol=1e-8):
            raise ShapeError(f"{args.input}: matrix is not symmetric")
        _write_edges(args.output, q, None, args.threshold)
        return 0
    rule = _rule_from(args)
    config = _config_from(args)
    data = load_csv(args.input)
    est = fit(data, rule=rule, config=config, center=not args.no_center, workers=_workers())
    _write_edges(args.output, est.q_hat, data.feature_names, args.threshold)
    if not est.solve_diag.converged:
        print(
            f"warning: solver stopped at {est.solve_diag.iterations} iterations "
            f"with residual {est.solve_diag.residual:.3e} above tol {args.tol:.3e}",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_bench(args) -> int:
    kinds = args.model or ["er"]
    models = [
        PrecisionModelSpec(kind=k, p=args.p, seed=args.seed, edge_prob=args.edge_prob)
        for k in kinds
    ]
    estimators = [e.strip() for e in args.estimators.split(",") if e.strip()]
    for e in estimators:
        if e not in ESTIMATORS:
            raise ConfigError(f"unknown estimator {e!r}; choose from {', '.join(ESTIMATORS)}")
    rule = _rule_from(args)
    config = _config_from(args)
    if args.fixed_iters is not None:
        # Positive-but-unreachable tolerance: exactly fixed_iters iterations run.
        config = replace(config, tol=1e-300, max_iter=args.fixed_iters)
    records = run_benchmark(models, n=args.n, reps=args.reps,
                            estimators=estimators, rule=rule, config=config)
    if args.format == "jsonl":
        write_bench_jsonl(records, args.output)
    else:
        write_bench_csv(records, args.output)
    failures = [r for r in records if r.error]
    for r in failures:
        print(f"warning: {r.estimator} on {r.model} seed {r.seed}: {r.error}", file=sys.stderr)
    return 0


def cmd_sample(args) -> int:
    spec = PrecisionModelSpec(kind=args.model_kind, p=args.p, seed=args.seed,
                              edge_prob=args.edge_prob)
    truth = adjacency_to_precision(
        gen_adjacency(spec), seed=np.random.SeedSequence((args.seed, 1))
    )
    data = sample_gaussian(truth.sigma_star, args.n,
                           seed=np.random.SeedSequence((args.seed, 2)))
    write_matrix_csv(data.values, f"{args.output}.data.csv")
    write_matrix_csv(truth.omega_star, f"{args.output}.omega_star.csv")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="jpr", description="Sparse precision and partial-correlation estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="fit the estimator on a CSV data file")
    est.add_argument("--input", required=True, help="CSV data file (optional header row)")
    est.add_argument("--output", required=True, help="output path prefix")
    _add_rule_flags(est)
    _add_solver_flags(est)
    est.add_argument("--seed", type=int, default=0, help="seed for the cv rule's fold shuffle")
    est.add_argument("--threshold", type=float, default=0.0,
                     help="|Q| cutoff for edge-tsv output")
    est.add_argument("--format", choices=["matrix-csv", "json", "edge-tsv"],
                     default="matrix-csv")
    est.add_argument("--no-center", action="store_true", help="skip column mean-centering")
    est.add_argument("--standardize", action="store_true",
                     help="scale columns to unit standard deviation")

    net = sub.add_parser("network", help="export the partial-correlation edge list")
    net.add_argument("--input", required=True,
                     help="CSV data file, or a Q matrix file with --matrix")
    net.add_argument("--output", required=True, help="edge TSV path")
    net.add_argument("--matrix", action="store_true",
                     help="input is an already-computed partial-correlation matrix")
    _add_rule_flags(net)
    _add_solver_flags(net)
    net.add_argument("--seed", type=int, default=0)
    net.add_argument("--threshold", type=float, default=0.0, help="|Q| cutoff for edges")
    net.add_argument("--no-center", action="store_true")

    ben = sub.add_parser("bench", help="run synthetic benchmarks")
    ben.add_argument("--model", action="append", choices=list(MODEL_KINDS),
                     help="model kind; repeat the flag for several")
    ben.add_argument("--p", type=int, required=True, help="number of features")
    ben.add_argument("--n", type=int, required=True, help="rows per draw")
    ben.add_argument("--reps", type=int, default=1, help="independent repetitions")
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--edge-prob", type=float, default=0.05, help="er edge probability")
    ben.add_argument("--estimators", default=",".join(ESTIMATORS),
                     help="comma-separated subset of: " + ", ".join(ESTIMATORS))
    _add_rule_flags(ben)
    _add_solver_flags(ben)
    ben.add_argument("--fixed-iters", type=int, default=None,
                     help="run exactly this many solver iterations (timing protocol)")
    ben.add_argument("--output", required=True, help="records file")
    ben.add_argument("--format", choices=["csv", "jsonl"], default="csv")

    sam = sub.add_parser("sample", help="draw synthetic data and its true precision")
    sam.add_argument("--model", dest="model_kind", choices=list(MODEL_KINDS), default="er")
    sam.add_argument("--p", type=int, required=True)
    sam.add_argument("--n", type=int, required=True)
    sam.add_argument("--seed", type=int, default=0)
    sam.add_argument("--edge-prob", type=float, default=0.05)
    sam.add_argument("--output", required=True, help="output path prefix")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "estimate": cmd_estimate,
        "network": cmd_network,
        "bench": cmd_bench,
        "sample": cmd_sample,
    }
    try:
        return handlers[args.command](args)
    except JprError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
