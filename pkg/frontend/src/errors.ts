/**
 * Error hierarchy mirroring the estimator CLI's stderr categories.
 *
 * The CLI reports failures as `error: <category>: <message>` on stderr.
 * Each category token maps to exactly one class here, so callers can
 * catch by type instead of string-matching subprocess output.
 */

export class JprError extends Error {
  readonly category: string = "error";

  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class InputIOError extends JprError {
  override readonly category = "io";
}

export class ParseError extends JprError {
  override readonly category = "parse";
}

export class ShapeError extends JprError {
  override readonly category = "shape";
}

export class NonFiniteError extends JprError {
  override readonly category = "non-finite";
}

export class DegenerateFeatureError extends JprError {
  override readonly category = "degenerate-feature";
}

export class DegenerateVarianceError extends JprError {
  override readonly category = "degenerate-variance";
}

export class EmptyGridError extends JprError {
  override readonly category = "empty-grid";
}

export class EigenFailureError extends JprError {
  override readonly category = "eigen-failure";
}

export class NotPositiveDefiniteError extends JprError {
  override readonly category = "not-positive-definite";
}

export class InfeasibleDegreeError extends JprError {
  override readonly category = "infeasible-degree";
}

export class ConfigError extends JprError {
  override readonly category = "config";
}

export const errorByCategory: Readonly<Record<string, new (message: string) => JprError>> = {
  io: InputIOError,
  parse: ParseError,
  shape: ShapeError,
  "non-finite": NonFiniteError,
  "degenerate-feature": DegenerateFeatureError,
  "degenerate-variance": DegenerateVarianceError,
  "empty-grid": EmptyGridError,
  "eigen-failure": EigenFailureError,
  "not-positive-definite": NotPositiveDefiniteError,
  "infeasible-degree": InfeasibleDegreeError,
  config: ConfigError,
};

/** Throw the typed error for a stderr category token. */
export function raiseForCategory(category: string, message: string): never {
  const cls = errorByCategory[category];
  if (cls) {
    throw new cls(message);
  }
  throw new JprError(`${category}: ${message}`);
}
