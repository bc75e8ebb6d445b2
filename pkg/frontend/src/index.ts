export { MAP_BOUNDS, STANDARD_PARALLEL, projectWinkelTripel } from "./winkel.js";
export type { ProjectedPoint } from "./winkel.js";
export { parseCsv, requireColumns } from "./csv.js";
export type { Table } from "./csv.js";
export { normalizer, viridis } from "./colormap.js";
export { PLOT_KINDS, render } from "./render.js";
export type { PlotJob, PlotKind } from "./render.js";
export { main, parseArgs } from "./cli.js";
