/**
 * Node client for the jpr estimator.
 *
 * Array-in, array-out: matrices cross the process boundary as CSV and
 * JSON written by the CLI itself, so every number returned here is the
 * estimator's own output, not a reimplementation. Each call runs in a
 * fresh scratch directory; no state survives between calls.
 *
 * @example
 * const { data } = sampleSynthetic({ model: "ar1", p: 6, n: 400, seed: 5 });
 * const result = fit(data, { lambda: 0.15 });
 * result.qHat[0][0];   // exactly -1
 */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { parseCsv, writeCsv } from "./csv.js";
import { NonFiniteError, ShapeError } from "./errors.js";
import { runCli, withTempDir } from "./runner.js";

export { formatNumber, parseCsv, writeCsv } from "./csv.js";
export {
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
  errorByCategory,
} from "./errors.js";
export { pythonExecutable } from "./runner.js";

export interface FitOptions {
  /** Penalty level (rule "fixed") or the constant for rule "theory". */
  lambda?: number;
  /** Defaults to "fixed" when lambda is given, "theory" otherwise. */
  lambdaRule?: "fixed" | "theory" | "cv" | "ic";
  cvFolds?: number;
  icCriterion?: "aic" | "bic";
  loss?: "quadratic" | "huber";
  huberRho?: number;
  /** Spectral lower bound for the joint solve. */
  alpha?: number;
  /** Spectral upper bound for the joint solve. */
  beta?: number;
  tol?: number;
  maxIter?: number;
  /** Seed for the cv rule's fold shuffle. */
  seed?: number;
  /** Column mean-centering, on unless disabled. */
  center?: boolean;
  standardize?: boolean;
}

export interface FitResult {
  omegaHat: number[][];
  qHat: number[][];
  tau: number[];
  lambdas: number[];
  iterations: number;
  converged: boolean;
}

export interface SampleOptions {
  model?: "er" | "ar1" | "hub";
  p: number;
  n: number;
  seed?: number;
  edgeProb?: number;
}

export interface SyntheticSample {
  data: number[][];
  omegaStar: number[][];
}

function validateData(data: number[][]): void {
  if (!Array.isArray(data) || data.length < 2) {
    throw new ShapeError(`need at least 2 rows, got ${Array.isArray(data) ? data.length : 0}`);
  }
  if (!Array.isArray(data[0]) || data[0].length < 2) {
    throw new ShapeError(`need at least 2 columns, got ${Array.isArray(data[0]) ? data[0].length : 0}`);
  }
  const p = data[0].length;
  for (let i = 0; i < data.length; i++) {
    if (!Array.isArray(data[i]) || data[i].length !== p) {
      throw new ShapeError(`row ${i + 1} has ${Array.isArray(data[i]) ? data[i].length : 0} fields, expected ${p}`);
    }
    for (let j = 0; j < p; j++) {
      if (!Number.isFinite(data[i][j])) {
        throw new NonFiniteError(`row ${i + 1}, column ${j + 1}: ${data[i][j]}`);
      }
    }
  }
}

function fitArgs(options: FitOptions): string[] {
  const args: string[] = [];
  if (options.lambda !== undefined) args.push("--lambda", String(options.lambda));
  if (options.lambdaRule !== undefined) args.push("--lambda-rule", options.lambdaRule);
  if (options.cvFolds !== undefined) args.push("--cv-folds", String(options.cvFolds));
  if (options.icCriterion !== undefined) args.push("--ic-criterion", options.icCriterion);
  if (options.loss !== undefined) args.push("--loss", options.loss);
  if (options.huberRho !== undefined) args.push("--huber-rho", String(options.huberRho));
  if (options.alpha !== undefined) args.push("--alpha", String(options.alpha));
  if (options.beta !== undefined) args.push("--beta", String(options.beta));
  if (options.tol !== undefined) args.push("--tol", String(options.tol));
  if (options.maxIter !== undefined) args.push("--max-iter", String(options.maxIter));
  if (options.seed !== undefined) args.push("--seed", String(options.seed));
  if (options.center === false) args.push("--no-center");
  if (options.standardize) args.push("--standardize");
  return args;
}

/**
 * Estimate sparse precision and partial-correlation matrices.
 *
 * Delegates to `estimate` on the CLI; the returned matrices are parsed
 * from its JSON output and match a direct CLI run on the same input
 * exactly. Failures raise the typed error for the CLI's category; a fit
 * that hits the iteration cap still returns, with `converged` false.
 */
export function fit(data: number[][], options: FitOptions = {}): FitResult {
  validateData(data);
  return withTempDir((dir) => {
    writeFileSync(join(dir, "in.csv"), writeCsv(data));
    runCli(["estimate", "--input", "in.csv", "--output", "out", "--format", "json", ...fitArgs(options)], dir);
    const body = JSON.parse(readFileSync(join(dir, "out.json"), "utf8"));
    const diag = JSON.parse(readFileSync(join(dir, "out.diag.json"), "utf8"));
    return {
      omegaHat: body.omega,
      qHat: body.q,
      tau: diag.tau,
      lambdas: diag.lambdas,
      iterations: diag.iterations,
      converged: diag.converged,
    };
  });
}

/**
 * Draw a synthetic dataset and its ground-truth precision matrix.
 * Deterministic per seed: identical options give identical arrays.
 */
export function sampleSynthetic(options: SampleOptions): SyntheticSample {
  return withTempDir((dir) => {
    const args = ["sample", "--p", String(options.p), "--n", String(options.n), "--output", "out"];
    if (options.model !== undefined) args.push("--model", options.model);
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    if (options.edgeProb !== undefined) args.push("--edge-prob", String(options.edgeProb));
    runCli(args, dir);
    return {
      data: parseCsv(readFileSync(join(dir, "out.data.csv"), "utf8")),
      omegaStar: parseCsv(readFileSync(join(dir, "out.omega_star.csv"), "utf8")),
    };
  });
}
