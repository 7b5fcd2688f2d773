import { describe, expect, it } from "vitest";

import {
  ConfigError,
  DegenerateFeatureError,
  NonFiniteError,
  ShapeError,
  fit,
  sampleSynthetic,
} from "../src/index.js";

/** Invert a small symmetric matrix by Gauss-Jordan with partial pivoting. */
function invert(m: number[][]): number[][] {
  const p = m.length;
  const a = m.map((row, i) => [...row, ...row.map((_, j) => (i === j ? 1 : 0))]);
  for (let col = 0; col < p; col++) {
    let pivot = col;
    for (let r = col + 1; r < p; r++) {
      if (Math.abs(a[r][col]) > Math.abs(a[pivot][col])) pivot = r;
    }
    [a[col], a[pivot]] = [a[pivot], a[col]];
    const d = a[col][col];
    for (let j = 0; j < 2 * p; j++) a[col][j] /= d;
    for (let r = 0; r < p; r++) {
      if (r === col) continue;
      const f = a[r][col];
      for (let j = 0; j < 2 * p; j++) a[r][j] -= f * a[col][j];
    }
  }
  return a.map((row) => row.slice(p));
}

/** Centered sample covariance with 1/n normalization, matching the estimator. */
function sampleCovariance(data: number[][]): number[][] {
  const n = data.length;
  const p = data[0].length;
  const mean = new Array(p).fill(0);
  for (const row of data) for (let j = 0; j < p; j++) mean[j] += row[j] / n;
  const s: number[][] = Array.from({ length: p }, () => new Array(p).fill(0));
  for (const row of data) {
    for (let j = 0; j < p; j++) {
      for (let k = 0; k < p; k++) {
        s[j][k] += ((row[j] - mean[j]) * (row[k] - mean[k])) / n;
      }
    }
  }
  return s;
}

function frobenius(m: number[][]): number {
  let sum = 0;
  for (const row of m) for (const v of row) sum += v * v;
  return Math.sqrt(sum);
}

describe("fit", () => {
  it("independent features with a huge penalty give a diagonal omega and qHat = -I", () => {
    const { data } = sampleSynthetic({ model: "er", p: 6, n: 300, seed: 4, edgeProb: 0 });
    const result = fit(data, { lambda: 10 });
    for (let i = 0; i < 6; i++) {
      for (let j = 0; j < 6; j++) {
        if (i === j) {
          expect(result.omegaHat[i][j]).toBeGreaterThan(0);
          expect(result.qHat[i][j]).toBe(-1);
        } else {
          expect(Math.abs(result.omegaHat[i][j])).toBe(0);
          expect(Math.abs(result.qHat[i][j])).toBe(0);
        }
      }
    }
    expect(result.converged).toBe(true);
  });

  it("with zero penalty recovers the inverse sample covariance", () => {
    const { data } = sampleSynthetic({ model: "er", p: 10, n: 200, seed: 7, edgeProb: 0.2 });
    const result = fit(data, { lambda: 0, tol: 1e-10, maxIter: 5000 });
    const target = invert(sampleCovariance(data));
    const diff = result.omegaHat.map((row, i) => row.map((v, j) => v - target[i][j]));
    expect(frobenius(diff) / frobenius(target)).toBeLessThan(1e-3);
  });

  it("returns converged=false at a tiny iteration cap instead of throwing", () => {
    const { data } = sampleSynthetic({ model: "ar1", p: 5, n: 100, seed: 1 });
    const result = fit(data, { lambda: 0.1, maxIter: 2 });
    expect(result.converged).toBe(false);
    expect(result.iterations).toBe(2);
    expect(result.omegaHat.length).toBe(5);
  });

  it("tau and lambdas come back with one entry per feature", () => {
    const { data } = sampleSynthetic({ model: "ar1", p: 4, n: 120, seed: 9 });
    const result = fit(data, { lambdaRule: "theory" });
    expect(result.tau.length).toBe(4);
    expect(result.lambdas.length).toBe(4);
    for (const t of result.tau) expect(t).toBeGreaterThan(0);
  });

  it("rejects bad shapes before spawning", () => {
    expect(() => fit([[1, 2]])).toThrowError(ShapeError);
    expect(() => fit([[1], [2]])).toThrowError(ShapeError);
    expect(() => fit([[1, 2], [3]])).toThrowError(ShapeError);
    expect(() => fit([1, 2] as unknown as number[][])).toThrowError(ShapeError);
  });

  it("rejects non-finite input before spawning", () => {
    expect(() => fit([[1, 2], [3, Number.NaN]])).toThrowError(NonFiniteError);
    expect(() => fit([[1, Infinity], [3, 4]])).toThrowError(NonFiniteError);
  });

  it("maps a constant column to the degenerate-feature category", () => {
    const rows = Array.from({ length: 20 }, (_, i) => [Math.sin(i + 1), 2.5]);
    expect(() => fit(rows, { lambda: 0.1 })).toThrowError(DegenerateFeatureError);
  });

  it("maps impossible fold counts to the config category", () => {
    const { data } = sampleSynthetic({ model: "er", p: 4, n: 40, seed: 3, edgeProb: 0.2 });
    expect(() => fit(data, { lambdaRule: "cv", cvFolds: 80 })).toThrowError(ConfigError);
  });
});
