/**
 * The two figure builders.
 *
 * Recovery curves: one panel per measurement count n, exact-recovery
 * percentage against k/n, one line per method.
 *
 * MSE-ratio histograms: one panel per decay exponent p, per-trial
 * MSE(sdrl1)/MSE(irl1) with a vertical reference at ratio 1 and the
 * count of excluded (zero-denominator) trials in the title.
 */

import type { TrialRow } from "./csv.js";
import {
  histogram,
  ratioPanels,
  recoveryPanels,
  sortMethods,
  type RatioPanel,
  type RecoveryPanel,
} from "./data.js";
import {
  BLACK,
  GRAY,
  LIGHT_GRAY,
  Raster,
  textWidth,
  type Rgb,
} from "./raster.js";

export class FigureError extends Error {}

export const METHOD_COLORS: Record<string, Rgb> = {
  l1: [105, 105, 105],
  irl1: [204, 85, 34],
  sdrl1: [41, 98, 181],
};
const FALLBACK_COLORS: Rgb[] = [
  [120, 94, 170],
  [64, 145, 108],
  [178, 34, 110],
];

export function methodColor(method: string, index: number): Rgb {
  return METHOD_COLORS[method] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length]!;
}

// panel geometry, in pixels at 150 dpi
const PLOT_W = 300;
const PLOT_H = 200;
const MARGIN_LEFT = 52;
const MARGIN_RIGHT = 16;
const MARGIN_TOP = 30;
const MARGIN_BOTTOM = 44;
const CELL_W = MARGIN_LEFT + PLOT_W + MARGIN_RIGHT;
const CELL_H = MARGIN_TOP + PLOT_H + MARGIN_BOTTOM;
const FIGURE_PAD = 8;
const LEGEND_H = 18;

export interface PanelBox {
  /** top-left corner of the plotting area */
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface FigureLayout {
  width: number;
  height: number;
  panels: PanelBox[];
}

/** Side-by-side panels, one per facet value, plus a legend strip on top. */
export function layoutFigure(panelCount: number, withLegend: boolean): FigureLayout {
  if (panelCount < 1) throw new FigureError("no panels to lay out");
  const legend = withLegend ? LEGEND_H : 0;
  return {
    width: 2 * FIGURE_PAD + panelCount * CELL_W,
    height: 2 * FIGURE_PAD + legend + CELL_H,
    panels: Array.from({ length: panelCount }, (_, i) => ({
      x: FIGURE_PAD + i * CELL_W + MARGIN_LEFT,
      y: FIGURE_PAD + legend + MARGIN_TOP,
      w: PLOT_W,
      h: PLOT_H,
    })),
  };
}

export function recoveryPanelTitle(panel: RecoveryPanel): string {
  return `n = ${panel.n}`;
}

export function ratioPanelTitle(panel: RatioPanel): string {
  return `p = ${panel.p} (${panel.undefinedCount} undefined)`;
}

function formatTick(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return String(rounded);
}

function drawFrame(img: Raster, box: PanelBox, title: string): void {
  img.line(box.x, box.y, box.x, box.y + box.h, BLACK);
  img.line(box.x, box.y + box.h, box.x + box.w, box.y + box.h, BLACK);
  img.line(box.x + box.w, box.y, box.x + box.w, box.y + box.h, GRAY);
  img.line(box.x, box.y, box.x + box.w, box.y, GRAY);
  img.text(box.x + Math.max(0, (box.w - textWidth(title, 2)) / 2), box.y - 24, title, BLACK, 2);
}

function drawXTick(img: Raster, box: PanelBox, px: number, label: string): void {
  img.line(px, box.y + box.h, px, box.y + box.h + 4, BLACK);
  img.text(px - textWidth(label) / 2, box.y + box.h + 8, label, BLACK);
}

function drawYTick(img: Raster, box: PanelBox, py: number, label: string): void {
  img.line(box.x - 4, py, box.x, py, BLACK);
  img.text(box.x - 8 - textWidth(label), py - 3, label, BLACK);
}

function drawXLabel(img: Raster, box: PanelBox, label: string): void {
  img.text(box.x + (box.w - textWidth(label)) / 2, box.y + box.h + 24, label, BLACK);
}

function drawLegend(img: Raster, methods: string[]): void {
  let penX = FIGURE_PAD + MARGIN_LEFT;
  const penY = FIGURE_PAD + 4;
  methods.forEach((method, i) => {
    img.fillRect(penX, penY, 10, 10, methodColor(method, i));
    img.text(penX + 14, penY + 2, method, BLACK);
    penX += 14 + textWidth(method) + 24;
  });
}

/** Build the recovery-percentage figure; throws when no sparse-grid rows. */
export function renderRecoveryCurves(rows: TrialRow[]): Raster {
  const panels = recoveryPanels(rows);
  if (panels.length === 0) {
    throw new FigureError("no sparse-grid records in the input CSV");
  }
  const methods = sortMethods(
    new Set(panels.flatMap((panel) => [...panel.series.keys()]))
  );
  const layout = layoutFigure(panels.length, true);
  const img = new Raster(layout.width, layout.height);
  drawLegend(img, methods);

  panels.forEach((panel, at) => {
    const box = layout.panels[at]!;
    drawFrame(img, box, recoveryPanelTitle(panel));

    const ratios = [...panel.series.values()].flat().map((pt) => pt.kOverN);
    const xMax = Math.max(...ratios) * 1.08;
    const toX = (v: number) => box.x + (v / xMax) * box.w;
    const toY = (pct: number) => box.y + box.h - (pct / 100) * box.h;

    for (let pct = 0; pct <= 100; pct += 25) {
      const py = toY(pct);
      if (pct > 0 && pct < 100) img.line(box.x, py, box.x + box.w, py, LIGHT_GRAY);
      drawYTick(img, box, py, String(pct));
    }
    for (const v of ratios.filter((v, i, arr) => arr.indexOf(v) === i)) {
      drawXTick(img, box, toX(v), formatTick(v));
    }
    drawXLabel(img, box, "k/n");
    img.text(box.x - MARGIN_LEFT + 4, box.y - 10, "recovery %", BLACK);

    methods.forEach((method, mi) => {
      const points = panel.series.get(method);
      if (points === undefined) return;
      const color = methodColor(method, mi);
      const path = points.map(
        (pt) => [toX(pt.kOverN), toY(pt.pct)] as readonly [number, number]
      );
      img.polyline(path, color, 2);
      for (const [px, py] of path) img.marker(px, py, color);
    });
  });
  return img;
}

/** Build the MSE-ratio histogram figure; throws when no paired trials. */
export function renderMseHist(rows: TrialRow[]): Raster {
  const panels = ratioPanels(rows);
  if (panels.length === 0) {
    throw new FigureError(
      "no compressible records with both methods in the input CSV"
    );
  }
  const layout = layoutFigure(panels.length, false);
  const img = new Raster(layout.width, layout.height);

  panels.forEach((panel, at) => {
    const box = layout.panels[at]!;
    drawFrame(img, box, ratioPanelTitle(panel));

    const hist = histogram(panel.ratios);
    const edges = hist.edges;
    // keep the reference ratio inside the axis span
    const lo = Math.min(edges[0]!, 0.9);
    const hi = Math.max(edges[edges.length - 1]!, 1.1);
    const span = hi - lo;
    const toX = (v: number) => box.x + ((v - lo) / span) * box.w;
    const maxCount = Math.max(1, ...hist.counts);
    const toY = (count: number) => box.y + box.h - (count / maxCount) * (box.h - 12);

    hist.counts.forEach((count, bin) => {
      if (count === 0) return;
      const x0 = toX(edges[bin]!);
      const x1 = toX(edges[bin + 1]!);
      img.fillRect(x0, toY(count), Math.max(1, x1 - x0 - 1), box.y + box.h - toY(count), [
        41, 98, 181,
      ]);
    });

    const refX = toX(1);
    img.line(refX, box.y, refX, box.y + box.h, [204, 85, 34], 2);

    drawYTick(img, box, toY(maxCount), String(maxCount));
    drawYTick(img, box, box.y + box.h, "0");
    for (const v of [lo, 1, hi]) drawXTick(img, box, toX(v), formatTick(v));
    drawXLabel(img, box, "mse ratio sdrl1/irl1");
    img.text(box.x - MARGIN_LEFT + 4, box.y - 10, "trials", BLACK);
  });
  return img;
}
