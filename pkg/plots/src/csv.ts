/**
 * Typed reader for the benchmark trial CSV.
 *
 * The producing side freezes the column set, so the header line doubles as
 * the schema version: anything else is rejected up front instead of being
 * guessed at.
 */

import Papa from "papaparse";

export const BENCH_COLUMNS = [
  "experiment",
  "method",
  "N",
  "n",
  "k",
  "p",
  "trial",
  "seed",
  "exact",
  "rel_err",
  "mse",
  "outer_iters",
  "wall_ms",
] as const;

export type BenchColumn = (typeof BENCH_COLUMNS)[number];

export interface TrialRow {
  experiment: "sparse-grid" | "compressible";
  method: string;
  N: number;
  n: number;
  /** sparsity level; absent for compressible trials */
  k: number | null;
  /** decay exponent; absent for sparse-grid trials */
  p: number | null;
  trial: number;
  /** 64-bit value, kept verbatim: it can exceed Number.MAX_SAFE_INTEGER */
  seed: string;
  exact: 0 | 1;
  rel_err: number;
  mse: number;
  outer_iters: number;
  wall_ms: number | null;
}

export class SchemaError extends Error {}

function requiredNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new SchemaError(`line ${line}: ${column} is not a number: "${raw}"`);
  }
  return value;
}

function optionalNumber(raw: string, column: string, line: number): number | null {
  return raw === "" ? null : requiredNumber(raw, column, line);
}

/**
 * Parse CSV text into trial rows.
 *
 * Throws SchemaError when the header differs from the benchmark schema in
 * any way, when a row has the wrong shape, or when there are no data rows
 * at all (an empty experiment is always a caller mistake).
 */
export function parseBenchCsv(text: string): TrialRow[] {
  const parsed = Papa.parse<string[]>(text, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new SchemaError(`malformed CSV: ${first.message}`);
  }
  const lines = parsed.data;
  const header = lines[0];
  if (header === undefined || header.join(",") !== BENCH_COLUMNS.join(",")) {
    throw new SchemaError(
      `header mismatch: expected "${BENCH_COLUMNS.join(",")}", ` +
        `got "${(header ?? []).join(",")}"`
    );
  }
  if (lines.length < 2) {
    throw new SchemaError("no data rows");
  }

  const rows: TrialRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!;
    const line = i + 1;
    if (cells.length !== BENCH_COLUMNS.length) {
      throw new SchemaError(
        `line ${line}: expected ${BENCH_COLUMNS.length} fields, got ${cells.length}`
      );
    }
    const [experiment, method, N, n, k, p, trial, seed, exact, relErr, mse, outerIters, wallMs] =
      cells as [string, ...string[]] & { length: 13 };
    if (experiment !== "sparse-grid" && experiment !== "compressible") {
      throw new SchemaError(`line ${line}: unknown experiment "${experiment}"`);
    }
    const exactNum = requiredNumber(exact!, "exact", line);
    if (exactNum !== 0 && exactNum !== 1) {
      throw new SchemaError(`line ${line}: exact must be 0 or 1, got "${exact}"`);
    }
    rows.push({
      experiment,
      method: method!,
      N: requiredNumber(N!, "N", line),
      n: requiredNumber(n!, "n", line),
      k: optionalNumber(k!, "k", line),
      p: optionalNumber(p!, "p", line),
      trial: requiredNumber(trial!, "trial", line),
      seed: seed!,
      exact: exactNum,
      rel_err: requiredNumber(relErr!, "rel_err", line),
      mse: requiredNumber(mse!, "mse", line),
      outer_iters: requiredNumber(outerIters!, "outer_iters", line),
      wall_ms: optionalNumber(wallMs!, "wall_ms", line),
    });
  }
  return rows;
}
