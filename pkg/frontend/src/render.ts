// Turns the simulator's CSV files into self-contained SVG figures.
// Four plot kinds, one per CSV schema:
//   qmap      qfield.csv  (theta,phi,q)          Winkel tripel heatmap
//   phase     phase.csv   (phi,s)                phase-distribution curve
//   tongue    arnold.csv  (delta,epsilon,s_max)  locking-strength heatmap
//   breakdown breakdown.csv (epsilon,mean_sz,equator_weight) scan curves
// The renderer projects and colors the values as read; rows whose needed
// fields are nan (failed sweep points) are left unpainted. Nothing is
// written unless the whole figure builds, and identical inputs give
// byte-identical output.

import { readFileSync, writeFileSync } from "node:fs";

import { normalizer, viridis } from "./colormap.js";
import { parseCsv, requireColumns, type Table } from "./csv.js";
import { circle, fmt, line, pathFill, polyline, rect, svgDocument, text } from "./svg.js";
import { MAP_BOUNDS, projectWinkelTripel } from "./winkel.js";

export const PLOT_KINDS = ["qmap", "phase", "tongue", "breakdown"] as const;
export type PlotKind = (typeof PLOT_KINDS)[number];

export interface PlotJob {
  kind: PlotKind;
  input: string;
  output: string;
  title?: string;
}

const MARGIN = 46;
const CURVE_COLOR = "#33638d";
const AXIS_COLOR = "#333333";
const GRID_COLOR = "#cccccc";

const TWO_PI = 2 * Math.PI;

const uniqueSorted = (values: number[]): number[] =>
  [...new Set(values)].sort((a, b) => a - b);

const linearScale = (d0: number, d1: number, r0: number, r1: number) => {
  const span = d1 - d0;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
};

const padded = (lo: number, hi: number): [number, number] => {
  if (hi > lo) {
    const pad = 0.08 * (hi - lo);
    return [lo - pad, hi + pad];
  }
  const pad = Math.max(1e-12, Math.abs(lo) * 0.1);
  return [lo - pad, lo + pad];
};

const tickLabel = (v: number): string => {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-3)) {
    return v.toExponential(1);
  }
  return String(Number(v.toPrecision(4)));
};

const cell = (row: number[], at: number): number => row[at] as number;

// ---------------------------------------------------------------- qmap ----

// Midpoint edges along theta (the nodes are non-uniform quadrature points);
// the outermost cells run to the poles.
const thetaEdges = (thetas: number[]): number[] => {
  const edges = [0];
  for (let i = 1; i < thetas.length; i += 1) {
    edges.push(((thetas[i - 1] as number) + (thetas[i] as number)) / 2);
  }
  edges.push(Math.PI);
  return edges;
};

function* edgeSamples(
  th0: number,
  ph0: number,
  th1: number,
  ph1: number,
): Generator<readonly [number, number]> {
  const steps = Math.max(
    1,
    Math.ceil(Math.max(Math.abs(th1 - th0), Math.abs(ph1 - ph0)) / 0.05),
  );
  for (let k = 0; k < steps; k += 1) {
    const t = k / steps;
    yield [th0 + t * (th1 - th0), ph0 + t * (ph1 - ph0)];
  }
}

function qmapSvg(table: Table, title?: string): string {
  const col = requireColumns(table, "qmap", ["theta", "phi", "q"]);
  const thetas = uniqueSorted(table.rows.map((r) => cell(r, col.theta)));
  const phis = uniqueSorted(table.rows.map((r) => cell(r, col.phi)));
  if (thetas.length < 2 || phis.length < 2) {
    throw new Error("qmap needs at least a 2 x 2 (theta, phi) grid");
  }
  const dphi = (phis[1] as number) - (phis[0] as number);
  for (let i = 1; i < phis.length; i += 1) {
    if (Math.abs((phis[i] as number) - (phis[i - 1] as number) - dphi) > 1e-9) {
      throw new Error("qmap phi nodes are not uniformly spaced");
    }
  }

  const thetaAt = new Map(thetas.map((v, i) => [v, i]));
  const phiAt = new Map(phis.map((v, i) => [v, i]));
  const values = new Float64Array(thetas.length * phis.length).fill(Number.NaN);
  for (const row of table.rows) {
    const ti = thetaAt.get(cell(row, col.theta)) as number;
    const pi = phiAt.get(cell(row, col.phi)) as number;
    values[ti * phis.length + pi] = cell(row, col.q);
  }
  if ([...values].some((v) => Number.isNaN(v))) {
    throw new Error("qmap input is not a complete theta x phi grid");
  }

  const scaleX = 800 / (2 * MAP_BOUNDS.xMax);
  const plotW = 800;
  const plotH = scaleX * 2 * MAP_BOUNDS.yMax;
  const width = MARGIN * 2 + plotW + 90;
  const height = MARGIN * 2 + plotH;
  const toPixel = (theta: number, phi: number): readonly [number, number] => {
    const p = projectWinkelTripel(theta, phi);
    return [MARGIN + (p.x + MAP_BOUNDS.xMax) * scaleX, MARGIN + (MAP_BOUNDS.yMax - p.y) * scaleX];
  };

  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const norm = normalizer(lo, hi);

  const body: string[] = [];
  const paintCell = (
    thLo: number,
    thHi: number,
    phLo: number,
    phHi: number,
    fill: string,
  ): void => {
    const ring: Array<readonly [number, number]> = [];
    for (const p of edgeSamples(thLo, phLo, thLo, phHi)) ring.push(p);
    for (const p of edgeSamples(thLo, phHi, thHi, phHi)) ring.push(p);
    for (const p of edgeSamples(thHi, phHi, thHi, phLo)) ring.push(p);
    for (const p of edgeSamples(thHi, phLo, thLo, phLo)) ring.push(p);
    body.push(pathFill(ring.map(([th, ph]) => toPixel(th, ph)), fill));
  };

  const edgesTheta = thetaEdges(thetas);
  for (let ti = 0; ti < thetas.length; ti += 1) {
    const thLo = edgesTheta[ti] as number;
    const thHi = edgesTheta[ti + 1] as number;
    for (let pi = 0; pi < phis.length; pi += 1) {
      const fill = viridis(norm(values[ti * phis.length + pi] as number));
      // cells are centered on their phi node; the first and last ones wrap
      // across phi = 0, so they are painted in two pieces
      const phLo = (phis[pi] as number) - dphi / 2;
      const phHi = (phis[pi] as number) + dphi / 2;
      if (phLo < 0) {
        paintCell(thLo, thHi, 0, phHi, fill);
        paintCell(thLo, thHi, phLo + TWO_PI, TWO_PI, fill);
      } else if (phHi > TWO_PI) {
        paintCell(thLo, thHi, phLo, TWO_PI, fill);
        paintCell(thLo, thHi, 0, phHi - TWO_PI, fill);
      } else {
        paintCell(thLo, thHi, phLo, phHi, fill);
      }
    }
  }

  // sphere outline: pole edges plus the phi = 0 / 2pi boundary meridians
  const outline: Array<readonly [number, number]> = [];
  for (const p of edgeSamples(0, 0, 0, TWO_PI)) outline.push(p);
  for (const p of edgeSamples(0, TWO_PI, Math.PI, TWO_PI)) outline.push(p);
  for (const p of edgeSamples(Math.PI, TWO_PI, Math.PI, 0)) outline.push(p);
  for (const p of edgeSamples(Math.PI, 0, 0, 0)) outline.push(p);
  outline.push([0, 0]);
  body.push(polyline(outline.map(([th, ph]) => toPixel(th, ph)), AXIS_COLOR, 1));

  // colorbar
  const barX = MARGIN + plotW + 26;
  const stops = 64;
  for (let i = 0; i < stops; i += 1) {
    const y = MARGIN + (plotH * i) / stops;
    body.push(rect(barX, y, 16, plotH / stops, viridis(1 - i / (stops - 1))));
  }
  body.push(text(barX + 22, MARGIN + 10, tickLabel(hi), "start"));
  body.push(text(barX + 22, MARGIN + plotH, tickLabel(lo), "start"));
  body.push(text(barX + 8, MARGIN - 10, "Q", "middle", 12));

  if (title) {
    body.push(text(width / 2, 24, title, "middle", 14));
  }
  return svgDocument(width, Math.ceil(height), body);
}

// --------------------------------------------------------------- phase ----

function phaseSvg(table: Table, title?: string): string {
  const col = requireColumns(table, "phase", ["phi", "s"]);
  const points = table.rows
    .map((r) => [cell(r, col.phi), cell(r, col.s)] as const)
    .filter(([p, s]) => Number.isFinite(p) && Number.isFinite(s))
    .sort((a, b) => a[0] - b[0]);
  if (points.length === 0) {
    throw new Error("phase input has no finite rows");
  }

  const plotW = 760;
  const plotH = 420;
  const width = MARGIN * 2 + plotW;
  const height = MARGIN * 2 + plotH;
  const [yLo, yHi] = padded(
    Math.min(...points.map(([, s]) => s)),
    Math.max(...points.map(([, s]) => s)),
  );
  const sx = linearScale(0, TWO_PI, MARGIN, MARGIN + plotW);
  const sy = linearScale(yLo, yHi, MARGIN + plotH, MARGIN);

  const body: string[] = [];
  if (yLo < 0 && yHi > 0) {
    body.push(line(MARGIN, sy(0), MARGIN + plotW, sy(0), GRID_COLOR, 1));
  }
  body.push(polyline(points.map(([p, s]) => [sx(p), sy(s)]), CURVE_COLOR, 1.8));

  // axes
  body.push(line(MARGIN, MARGIN + plotH, MARGIN + plotW, MARGIN + plotH, AXIS_COLOR));
  body.push(line(MARGIN, MARGIN, MARGIN, MARGIN + plotH, AXIS_COLOR));
  const xTicks: Array<[number, string]> = [
    [0, "0"],
    [Math.PI / 2, "pi/2"],
    [Math.PI, "pi"],
    [(3 * Math.PI) / 2, "3pi/2"],
    [TWO_PI, "2pi"],
  ];
  for (const [value, label] of xTicks) {
    const x = sx(value);
    body.push(line(x, MARGIN + plotH, x, MARGIN + plotH + 5, AXIS_COLOR));
    body.push(text(x, MARGIN + plotH + 18, label));
  }
  for (let i = 0; i <= 4; i += 1) {
    const value = yLo + ((yHi - yLo) * i) / 4;
    const y = sy(value);
    body.push(line(MARGIN - 5, y, MARGIN, y, AXIS_COLOR));
    body.push(text(MARGIN - 8, y + 4, tickLabel(value), "end"));
  }
  body.push(text(MARGIN + plotW / 2, height - 8, "phi"));
  body.push(text(MARGIN, MARGIN - 12, "S(phi)", "start", 12));
  if (title) {
    body.push(text(width / 2, 24, title, "middle", 14));
  }
  return svgDocument(width, height, body);
}

// -------------------------------------------------------------- tongue ----

// Cell edges at midpoints between consecutive axis values; the end cells
// keep their inner half-width on the outside too.
const midpointEdges = (values: number[]): number[] => {
  if (values.length === 1) {
    const v = values[0] as number;
    return [v - 0.5, v + 0.5];
  }
  const edges: number[] = [];
  const first = values[0] as number;
  const second = values[1] as number;
  edges.push(first - (second - first) / 2);
  for (let i = 1; i < values.length; i += 1) {
    edges.push(((values[i - 1] as number) + (values[i] as number)) / 2);
  }
  const last = values[values.length - 1] as number;
  const prev = values[values.length - 2] as number;
  edges.push(last + (last - prev) / 2);
  return edges;
};

const tickStep = (count: number): number => Math.max(1, Math.ceil(count / 8));

function tongueSvg(table: Table, title?: string): string {
  const col = requireColumns(table, "tongue", ["delta", "epsilon", "s_max"]);
  const deltas = uniqueSorted(table.rows.map((r) => cell(r, col.delta)));
  const epsilons = uniqueSorted(table.rows.map((r) => cell(r, col.epsilon)));
  const finite = table.rows.filter((r) => Number.isFinite(cell(r, col.s_max)));
  if (finite.length === 0) {
    throw new Error("tongue input has no finite s_max values");
  }

  const plotW = 640;
  const plotH = 420;
  const width = MARGIN * 2 + plotW + 90;
  const height = MARGIN * 2 + plotH;
  const xEdges = midpointEdges(deltas);
  const yEdges = midpointEdges(epsilons);
  const sx = linearScale(xEdges[0] as number, xEdges[xEdges.length - 1] as number, MARGIN, MARGIN + plotW);
  const sy = linearScale(yEdges[0] as number, yEdges[yEdges.length - 1] as number, MARGIN + plotH, MARGIN);

  const lo = Math.min(...finite.map((r) => cell(r, col.s_max)));
  const hi = Math.max(...finite.map((r) => cell(r, col.s_max)));
  const norm = normalizer(lo, hi);
  const deltaAt = new Map(deltas.map((v, i) => [v, i]));
  const epsilonAt = new Map(epsilons.map((v, i) => [v, i]));

  const body: string[] = [];
  for (const row of finite) {
    const di = deltaAt.get(cell(row, col.delta)) as number;
    const ei = epsilonAt.get(cell(row, col.epsilon)) as number;
    const x0 = sx(xEdges[di] as number);
    const x1 = sx(xEdges[di + 1] as number);
    const y0 = sy(yEdges[ei + 1] as number);
    const y1 = sy(yEdges[ei] as number);
    body.push(rect(x0, y0, x1 - x0, y1 - y0, viridis(norm(cell(row, col.s_max)))));
  }

  body.push(line(MARGIN, MARGIN + plotH, MARGIN + plotW, MARGIN + plotH, AXIS_COLOR));
  body.push(line(MARGIN, MARGIN, MARGIN, MARGIN + plotH, AXIS_COLOR));
  const dStep = tickStep(deltas.length);
  for (let i = 0; i < deltas.length; i += dStep) {
    const x = sx(deltas[i] as number);
    body.push(line(x, MARGIN + plotH, x, MARGIN + plotH + 5, AXIS_COLOR));
    body.push(text(x, MARGIN + plotH + 18, tickLabel(deltas[i] as number)));
  }
  const eStep = tickStep(epsilons.length);
  for (let i = 0; i < epsilons.length; i += eStep) {
    const y = sy(epsilons[i] as number);
    body.push(line(MARGIN - 5, y, MARGIN, y, AXIS_COLOR));
    body.push(text(MARGIN - 8, y + 4, tickLabel(epsilons[i] as number), "end"));
  }
  body.push(text(MARGIN + plotW / 2, height - 8, "delta"));
  body.push(text(MARGIN, MARGIN - 12, "epsilon", "start", 12));

  const barX = MARGIN + plotW + 26;
  const stops = 64;
  for (let i = 0; i < stops; i += 1) {
    const y = MARGIN + (plotH * i) / stops;
    body.push(rect(barX, y, 16, plotH / stops, viridis(1 - i / (stops - 1))));
  }
  body.push(text(barX + 22, MARGIN + 10, tickLabel(hi), "start"));
  body.push(text(barX + 22, MARGIN + plotH, tickLabel(lo), "start"));
  body.push(text(barX + 8, MARGIN - 10, "s_max", "middle", 12));
  if (title) {
    body.push(text(width / 2, 24, title, "middle", 14));
  }
  return svgDocument(width, height, body);
}

// ----------------------------------------------------------- breakdown ----

function breakdownSvg(table: Table, title?: string): string {
  const col = requireColumns(table, "breakdown", ["epsilon", "mean_sz", "equator_weight"]);
  const rows = table.rows
    .map((r) => ({
      epsilon: cell(r, col.epsilon),
      meanSz: cell(r, col.mean_sz),
      equator: cell(r, col.equator_weight),
    }))
    .filter((r) => Number.isFinite(r.epsilon) && Number.isFinite(r.meanSz) && Number.isFinite(r.equator))
    .sort((a, b) => a.epsilon - b.epsilon);
  if (rows.length === 0) {
    throw new Error("breakdown input has no finite rows");
  }

  // log axis when every epsilon is positive (scans usually span decades)
  const logX = rows.every((r) => r.epsilon > 0);
  const xValue = (eps: number): number => (logX ? Math.log10(eps) : eps);
  const xs = rows.map((r) => xValue(r.epsilon));
  const [xLo, xHi] = padded(Math.min(...xs), Math.max(...xs));

  const plotW = 760;
  const panelH = 190;
  const gap = 48;
  const width = MARGIN * 2 + plotW;
  const height = MARGIN * 2 + panelH * 2 + gap;
  const sx = linearScale(xLo, xHi, MARGIN, MARGIN + plotW);

  const body: string[] = [];
  const panel = (
    top: number,
    series: number[],
    label: string,
    withZeroLine: boolean,
  ): void => {
    const [yLo, yHi] = padded(Math.min(...series), Math.max(...series));
    const sy = linearScale(yLo, yHi, top + panelH, top);
    if (withZeroLine && yLo < 0 && yHi > 0) {
      body.push(line(MARGIN, sy(0), MARGIN + plotW, sy(0), GRID_COLOR, 1));
    }
    const pts = rows.map((r, i) => [sx(xs[i] as number), sy(series[i] as number)] as const);
    body.push(polyline(pts, CURVE_COLOR, 1.8));
    for (const [x, y] of pts) {
      body.push(circle(x, y, 2.5, CURVE_COLOR));
    }
    body.push(line(MARGIN, top + panelH, MARGIN + plotW, top + panelH, AXIS_COLOR));
    body.push(line(MARGIN, top, MARGIN, top + panelH, AXIS_COLOR));
    for (let i = 0; i <= 3; i += 1) {
      const value = yLo + ((yHi - yLo) * i) / 3;
      const y = sy(value);
      body.push(line(MARGIN - 5, y, MARGIN, y, AXIS_COLOR));
      body.push(text(MARGIN - 8, y + 4, tickLabel(value), "end"));
    }
    body.push(text(MARGIN, top - 8, label, "start", 12));
  };

  panel(MARGIN, rows.map((r) => r.meanSz), "<Sz>", true);
  panel(MARGIN + panelH + gap, rows.map((r) => r.equator), "equator weight", false);

  // shared x ticks under the lower panel
  const axisY = MARGIN + panelH * 2 + gap;
  const ticks: number[] = [];
  if (logX) {
    for (let k = Math.ceil(xLo); k <= Math.floor(xHi); k += 1) {
      ticks.push(k);
    }
    if (ticks.length === 0) {
      ticks.push(xs[0] as number, xs[xs.length - 1] as number);
    }
  } else {
    for (let i = 0; i <= 4; i += 1) {
      ticks.push(xLo + ((xHi - xLo) * i) / 4);
    }
  }
  for (const t of ticks) {
    const x = sx(t);
    body.push(line(x, axisY, x, axisY + 5, AXIS_COLOR));
    body.push(text(x, axisY + 18, tickLabel(logX ? 10 ** t : t)));
  }
  body.push(text(MARGIN + plotW / 2, height - 8, "epsilon"));
  if (title) {
    body.push(text(width / 2, 24, title, "middle", 14));
  }
  return svgDocument(width, height, body);
}

// -------------------------------------------------------------- driver ----

const BUILDERS: Record<PlotKind, (table: Table, title?: string) => string> = {
  qmap: qmapSvg,
  phase: phaseSvg,
  tongue: tongueSvg,
  breakdown: breakdownSvg,
};

export function render(job: PlotJob): void {
  const builder = BUILDERS[job.kind];
  if (builder === undefined) {
    throw new Error(`unknown plot kind '${job.kind}' (expected one of: ${PLOT_KINDS.join(", ")})`);
  }
  const table = parseCsv(readFileSync(job.input, "utf-8"));
  const svg = builder(table, job.title);
  writeFileSync(job.output, svg);
}
