/**
 * Subprocess plumbing. Every call gets a throwaway working directory,
 * runs the CLI synchronously, and maps a failing exit back to the typed
 * error for the category on stderr. Exit status 2 (solver stopped at the
 * iteration cap) is not a failure: outputs are still written and the
 * caller reads the converged flag from the diagnostics.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { JprError, raiseForCategory } from "./errors.js";

const ERROR_LINE = /^error: ([a-z-]+): ?(.*)$/m;

export function pythonExecutable(): string {
  return process.env.JPR_PYTHON ?? "python3";
}

export function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "jpr-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

export interface CliRun {
  status: number;
  stderr: string;
}

export function runCli(args: string[], cwd: string): CliRun {
  const python = pythonExecutable();
  const proc = spawnSync(python, ["-m", "jpr", ...args], { cwd, encoding: "utf8" });
  if (proc.error) {
    throw new JprError(`failed to launch ${python}: ${proc.error.message}`);
  }
  const status = proc.status ?? -1;
  const stderr = proc.stderr ?? "";
  if (status !== 0 && status !== 2) {
    const match = ERROR_LINE.exec(stderr);
    if (match) {
      raiseForCategory(match[1], match[2]);
    }
    throw new JprError(`estimator exited with status ${status}: ${stderr.trim()}`);
  }
  return { status, stderr };
}
