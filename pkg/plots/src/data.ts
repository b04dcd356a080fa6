/**
 * Shaping of trial rows into figure-ready series.
 *
 * Nothing here re-derives a metric: the CSV values are rendered as-is, and
 * the only arithmetic is means/counts of provided columns plus the
 * per-trial ratio that the histogram figure is defined as showing.
 */

import type { TrialRow } from "./csv.js";

/** Preferred drawing order; unknown methods follow alphabetically. */
export const METHOD_ORDER = ["l1", "irl1", "sdrl1"];

export interface CurvePoint {
  kOverN: number;
  /** exact-recovery percentage, the mean of the 0/1 exact column times 100 */
  pct: number;
  trials: number;
}

export interface RecoveryPanel {
  n: number;
  N: number;
  /** method name -> points sorted by k/n */
  series: Map<string, CurvePoint[]>;
}

export interface RatioPanel {
  p: number;
  /** per-trial MSE(sdrl1)/MSE(irl1), order not meaningful */
  ratios: number[];
  /** trials dropped for a zero denominator */
  undefinedCount: number;
}

export interface Histogram {
  /** bin edges, ascending; counts[i] covers [edges[i], edges[i+1]) */
  edges: number[];
  counts: number[];
}

function methodRank(method: string): [number, string] {
  const at = METHOD_ORDER.indexOf(method);
  return [at === -1 ? METHOD_ORDER.length : at, method];
}

export function sortMethods(methods: Iterable<string>): string[] {
  return [...methods].sort((a, b) => {
    const [ra, na] = methodRank(a);
    const [rb, nb] = methodRank(b);
    return ra - rb || na.localeCompare(nb);
  });
}

/** Group sparse-grid rows into one panel per n with one curve per method. */
export function recoveryPanels(rows: TrialRow[]): RecoveryPanel[] {
  const groups = new Map<number, TrialRow[]>();
  for (const row of rows) {
    if (row.experiment !== "sparse-grid" || row.k === null) continue;
    const bucket = groups.get(row.n);
    if (bucket === undefined) groups.set(row.n, [row]);
    else bucket.push(row);
  }

  const panels: RecoveryPanel[] = [];
  for (const n of [...groups.keys()].sort((a, b) => a - b)) {
    const bucket = groups.get(n)!;
    const byMethodK = new Map<string, Map<number, TrialRow[]>>();
    for (const row of bucket) {
      let perK = byMethodK.get(row.method);
      if (perK === undefined) byMethodK.set(row.method, (perK = new Map()));
      const cell = perK.get(row.k!);
      if (cell === undefined) perK.set(row.k!, [row]);
      else cell.push(row);
    }
    const series = new Map<string, CurvePoint[]>();
    for (const method of sortMethods(byMethodK.keys())) {
      const perK = byMethodK.get(method)!;
      const points = [...perK.entries()]
        .map(([k, trials]) => ({
          kOverN: k / n,
          pct: (100 * trials.reduce((acc, t) => acc + t.exact, 0)) / trials.length,
          trials: trials.length,
        }))
        .sort((a, b) => a.kOverN - b.kOverN);
      series.set(method, points);
    }
    panels.push({ n, N: bucket[0]!.N, series });
  }
  return panels;
}

/** Pair compressible trials into per-p ratio collections. */
export function ratioPanels(
  rows: TrialRow[],
  numerator = "sdrl1",
  denominator = "irl1"
): RatioPanel[] {
  const num = new Map<string, number>();
  const den = new Map<string, number>();
  const pByKey = new Map<string, number>();
  for (const row of rows) {
    if (row.experiment !== "compressible" || row.p === null) continue;
    const key = `${row.p}|${row.trial}`;
    pByKey.set(key, row.p);
    if (row.method === numerator) num.set(key, row.mse);
    if (row.method === denominator) den.set(key, row.mse);
  }

  const panels = new Map<number, RatioPanel>();
  for (const [key, numerMse] of num) {
    const denomMse = den.get(key);
    if (denomMse === undefined) continue; // unpaired trial, nothing to show
    const p = pByKey.get(key)!;
    let panel = panels.get(p);
    if (panel === undefined) {
      panels.set(p, (panel = { p, ratios: [], undefinedCount: 0 }));
    }
    if (denomMse === 0) panel.undefinedCount += 1;
    else panel.ratios.push(numerMse / denomMse);
  }
  return [...panels.values()].sort((a, b) => a.p - b.p);
}

/**
 * Uniform-width histogram with a Sturges bin count. A constant sample
 * collapses to a single bin around the shared value, so a degenerate
 * figure still reads correctly.
 */
export function histogram(values: number[], maxBins = 30): Histogram {
  if (values.length === 0) return { edges: [0, 1], counts: [0] };
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  if (lo === hi) {
    const pad = Math.max(Math.abs(lo) * 0.05, 0.05);
    return { edges: [lo - pad, lo + pad], counts: [values.length] };
  }
  const bins = Math.min(maxBins, Math.max(1, Math.ceil(Math.log2(values.length)) + 1));
  const width = (hi - lo) / bins;
  const edges = Array.from({ length: bins + 1 }, (_, i) => lo + i * width);
  edges[bins] = hi; // guard the top edge against accumulated roundoff
  const counts = new Array<number>(bins).fill(0);
  for (const v of values) {
    const at = v === hi ? bins - 1 : Math.floor((v - lo) / width);
    const clamped = Math.min(Math.max(at, 0), bins - 1);
    counts[clamped] = (counts[clamped] ?? 0) + 1;
  }
  return { edges, counts };
}
