#!/usr/bin/env node
/**
 * Render a figure from a benchmark CSV.
 *
 * Usage:
 *   sdrl1-plots --input results/sparse_grid.csv --kind recovery_curves --out fig1.png
 *   sdrl1-plots --input results/compressible.csv --kind mse_ratio_hist --out fig2.png
 *
 * Exit code 0 on success, 1 on any error; nothing is written on error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { parseBenchCsv } from "./csv.js";
import { renderMseHist, renderRecoveryCurves } from "./figures.js";
import type { Raster } from "./raster.js";

export const FIGURE_KINDS = ["recovery_curves", "mse_ratio_hist"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotJob {
  input: string;
  kind: FigureKind;
  out: string;
}

const USAGE =
  "usage: sdrl1-plots --input <bench.csv> --kind recovery_curves|mse_ratio_hist --out <figure.png>";

/** Parse argv into a job; throws on unknown flags, missing flags, bad kind. */
export function parseJob(argv: string[]): PlotJob {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      kind: { type: "string" },
      out: { type: "string" },
    },
    strict: true,
  });
  const { input, kind, out } = values;
  if (input === undefined || kind === undefined || out === undefined) {
    throw new Error(`--input, --kind and --out are all required\n${USAGE}`);
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown figure kind "${kind}"\n${USAGE}`);
  }
  return { input, kind: kind as FigureKind, out };
}

export function runJob(job: PlotJob): void {
  const text = readFileSync(job.input, "utf8");
  const rows = parseBenchCsv(text);
  const figure: Raster =
    job.kind === "recovery_curves" ? renderRecoveryCurves(rows) : renderMseHist(rows);
  writeFileSync(job.out, figure.toPng());
}

export function main(argv: string[]): number {
  try {
    const job = parseJob(argv);
    runJob(job);
    console.log(`wrote ${job.out}`);
    return 0;
  } catch (err) {
    if (err instanceof Error) {
      console.error(`sdrl1-plots: error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const entry = process.argv[1];
if (entry !== undefined && fileURLToPath(import.meta.url) === resolve(entry)) {
  process.exit(main(process.argv.slice(2)));
}
