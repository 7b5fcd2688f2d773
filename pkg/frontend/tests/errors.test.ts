import { describe, expect, it } from "vitest";

import { JprError, errorByCategory } from "../src/index.js";

const CATEGORIES = [
  "io",
  "parse",
  "shape",
  "non-finite",
  "degenerate-feature",
  "degenerate-variance",
  "empty-grid",
  "eigen-failure",
  "not-positive-definite",
  "infeasible-degree",
  "config",
];

describe("error category map", () => {
  it("covers every CLI category exactly once", () => {
    expect(Object.keys(errorByCategory).sort()).toEqual([...CATEGORIES].sort());
  });

  it("instances carry their category and a class name", () => {
    for (const category of CATEGORIES) {
      const err = new errorByCategory[category]("boom");
      expect(err).toBeInstanceOf(JprError);
      expect(err.category).toBe(category);
      expect(err.name.endsWith("Error")).toBe(true);
      expect(err.message).toBe("boom");
    }
  });
});
