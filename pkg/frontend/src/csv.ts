/**
 * CSV serialization for the numeric matrices exchanged with the CLI.
 *
 * Numbers are written in JavaScript's shortest round-trip decimal form,
 * which any correct float64 parser (including Python's) reads back to
 * the identical bit pattern. Matrix files on both sides are headerless.
 */

import { ParseError, ShapeError } from "./errors.js";

/** Shortest decimal that round-trips the exact float64 value. */
export function formatNumber(v: number): string {
  // String(-0) drops the sign; the estimator preserves it, so we do too.
  if (Object.is(v, -0)) {
    return "-0";
  }
  return String(v);
}

export function writeCsv(rows: number[][]): string {
  return rows.map((row) => row.map(formatNumber).join(",")).join("\n") + "\n";
}

/** Parse a headerless numeric CSV. Row/column positions in errors are 1-based. */
export function parseCsv(text: string): number[][] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new ParseError("empty input");
  }
  const rows: number[][] = [];
  for (let i = 0; i < lines.length; i++) {
    const cells = lines[i].split(",");
    const row: number[] = [];
    for (let j = 0; j < cells.length; j++) {
      const v = Number(cells[j]);
      if (cells[j].trim() === "" || Number.isNaN(v)) {
        throw new ParseError(`row ${i + 1}, column ${j + 1}: '${cells[j]}' is not a number`);
      }
      row.push(v);
    }
    if (rows.length > 0 && row.length !== rows[0].length) {
      throw new ShapeError(`row ${i + 1} has ${row.length} fields, expected ${rows[0].length}`);
    }
    rows.push(row);
  }
  return rows;
}
