"""Benchmark harness: repeated fits on synthetic models, one record per fit.

Estimators:
  jpr            the two-stage estimator
  naive          averaged symmetrization of the first stage, no joint solve
  sample-inverse inverse sample covariance (only when n > p)

Support thresholds: 0 for jpr and naive (their zeros are exact
soft-threshold zeros); 1e-8 for the dense sample inverse.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, replace

import numpy as np

from .data import center_columns
from .errors import ConfigError, InputIOError, JprError, NotPositiveDefiniteError
from .estimator import fit, naive_symmetrized, partial_correlation_from
from .lasso import LambdaRule
from .metrics import frobenius_error, operator2_error, support_metrics
from .solver import SolverConfig
from .synthetic import GroundTruth, PrecisionModelSpec, adjacency_to_precision, gen_adjacency, sample_gaussian

ESTIMATORS = ("jpr", "naive", "sample-inverse")
_DENSE_THRESHOLD = 1e-8


@dataclass(frozen=True)
class BenchRecord:
    """One (model, repetition, estimator) result row."""

    model: str
    p: int
    n: int
    seed: int
    estimator: str
    frobenius_err: float
    operator2_err: float
    q_frobenius_err: float
    support_precision: float
    support_recall: float
    wall_time_s: float
    iterations: int
    mean_lambda: float
    error: str = ""


def _rep_seeds(model_seed: int, rep: int) -> tuple[int, int, int]:
    """Deterministic (adjacency, signs, data) seeds for one repetition."""
    ss = np.random.SeedSequence((model_seed, rep))
    a, s, d = (int(x) for x in ss.generate_state(3, np.uint64))
    return a, s, d


def _q_from(omega, shrink_floor: float = 0.0) -> np.ndarray:
    d = np.diag(omega).copy()
    d[d <= shrink_floor] = np.nan
    tau = 1.0 / np.sqrt(d)
    q = partial_correlation_from(omega, tau)
    np.fill_diagonal(q, -1.0)
    return q


def _one_estimate(name, data, truth: GroundTruth, rule, config):
    """Returns (omega, q, iterations, mean_lambda, threshold)."""
    if name == "jpr":
        est = fit(data, rule=rule, config=config)
        return est.omega_hat, est.q_hat, est.solve_diag.iterations, float(np.mean(est.lambdas)), 0.0
    if name == "naive":
        omega = naive_symmetrized(data, rule=rule)
        return omega, _q_from(omega), 0, float("nan"), 0.0
    if name == "sample-inverse":
        Xc = center_columns(data).values
        n = Xc.shape[0]
        sigma_hat = Xc.T @ Xc / n
        try:
            omega = np.linalg.solve(sigma_hat, np.eye(sigma_hat.shape[0]))
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError(f"sample covariance is singular: {exc}") from exc
        omega = 0.5 * (omega + omega.T)
        return omega, _q_from(omega), 0, float("nan"), _DENSE_THRESHOLD
    raise ConfigError(f"unknown estimator {name!r}")


def run_benchmark(
    models,
    n: int,
    reps: int,
    estimators=ESTIMATORS,
    rule: LambdaRule | None = None,
    config: SolverConfig | None = None,
) -> list[BenchRecord]:
    """Fit each requested estimator on reps independent draws of each model.

    Repetition streams derive from SeedSequence((model.seed, rep)); the
    record's seed column stores the data-draw seed. Failures are captured in
    the record's error field with NaN metrics, never aborting the run.
    The sample inverse is skipped when n <= p.
    """
    if rule is None:
        rule = LambdaRule.theory(1.0)
    if config is None:
        config = SolverConfig()
    for name in estimators:
        if name not in ESTIMATORS:
            raise ConfigError(f"unknown estimator {name!r}")
    records = []
    for model in models:
        for rep in range(reps):
            seed_adj, seed_sign, seed_data = _rep_seeds(model.seed, rep)
            truth = adjacency_to_precision(
                gen_adjacency(replace(model, seed=seed_adj)), seed_sign
            )
            data = sample_gaussian(truth.sigma_star, n, seed_data)
            for name in estimators:
                if name == "sample-inverse" and n <= model.p:
                    continue
                start = time.perf_counter()
                try:
                    omega, q, iters, mean_lambda, thr = _one_estimate(
                        name, data, truth, rule, config
                    )
                    wall = time.perf_counter() - start
                    prec, rec = support_metrics(omega, truth.adjacency, thr)
                    rec_row = BenchRecord(
                        model=model.kind, p=model.p, n=n, seed=seed_data, estimator=name,
                        frobenius_err=frobenius_error(omega, truth.omega_star),
                        operator2_err=operator2_error(omega, truth.omega_star),
                        q_frobenius_err=frobenius_error(q, truth.q_star),
                        support_precision=prec, support_recall=rec,
                        wall_time_s=wall, iterations=iters, mean_lambda=mean_lambda,
                    )
                except JprError as exc:
                    wall = time.perf_counter() - start
                    nan = float("nan")
                    rec_row = BenchRecord(
                        model=model.kind, p=model.p, n=n, seed=seed_data, estimator=name,
                        frobenius_err=nan, operator2_err=nan, q_frobenius_err=nan,
                        support_precision=nan, support_recall=nan,
                        wall_time_s=wall, iterations=0, mean_lambda=nan,
                        error=f"{exc.category}: {exc}",
                    )
                records.append(rec_row)
    return records


def _field_names():
    return [f.name for f in dataclasses.fields(BenchRecord)]


def write_bench_csv(records, path) -> None:
    """CSV with a header row matching the BenchRecord field names."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(_field_names()) + "\n")
            for r in records:
                row = [str(getattr(r, name)) for name in _field_names()]
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc}") from exc


def write_bench_jsonl(records, path) -> None:
    """One JSON object per line, same fields as the CSV."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(dataclasses.asdict(r)) + "\n")
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc}") from exc
