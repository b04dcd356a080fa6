export { BENCH_COLUMNS, parseBenchCsv, SchemaError, type TrialRow } from "./csv.js";
export {
  histogram,
  METHOD_ORDER,
  ratioPanels,
  recoveryPanels,
  sortMethods,
  type CurvePoint,
  type Histogram,
  type RatioPanel,
  type RecoveryPanel,
} from "./data.js";
export {
  FigureError,
  layoutFigure,
  methodColor,
  ratioPanelTitle,
  recoveryPanelTitle,
  renderMseHist,
  renderRecoveryCurves,
  type FigureLayout,
  type PanelBox,
} from "./figures.js";
export { FIGURE_KINDS, main, parseJob, runJob, type FigureKind, type PlotJob } from "./cli.js";
export {
  PIXELS_PER_METER,
  PNG_SIGNATURE,
  Raster,
  RASTER_DPI,
  textWidth,
} from "./raster.js";
