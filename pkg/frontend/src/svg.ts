// String-assembled SVG primitives. Coordinates are formatted with a fixed
// number of decimals so identical inputs produce byte-identical files.

export const fmt = (value: number): string => {
  const s = value.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
};

const escapeText = (text: string): string =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

export function pathFill(points: ReadonlyArray<readonly [number, number]>, fill: string): string {
  const d = points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join("");
  // stroking with the fill color hides antialiasing seams between cells
  return `<path d="${d}Z" fill="${fill}" stroke="${fill}" stroke-width="0.4"/>`;
}

export function polyline(
  points: ReadonlyArray<readonly [number, number]>,
  stroke: string,
  width = 1.5,
): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  stroke: string,
  width = 1,
): string {
  return (
    `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
    `stroke="${stroke}" stroke-width="${width}"/>`
  );
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  fill: string,
): string {
  return (
    `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
    `fill="${fill}" stroke="${fill}" stroke-width="0.4"/>`
  );
}

export function circle(cx: number, cy: number, r: number, fill: string): string {
  return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`;
}

export type TextAnchor = "start" | "middle" | "end";

export function text(
  x: number,
  y: number,
  content: string,
  anchor: TextAnchor = "middle",
  size = 11,
): string {
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
    `font-size="${size}" fill="#222222">${escapeText(content)}</text>`
  );
}
