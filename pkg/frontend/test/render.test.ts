import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { beforeAll, describe, expect, it } from "vitest";

import { main, parseArgs } from "../src/cli.js";
import { render, type PlotKind } from "../src/render.js";

const fixture = (name: string): string =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

let outDir: string;
beforeAll(() => {
  outDir = mkdtempSync(join(tmpdir(), "spinsync-plots-"));
});

const renderFixture = (kind: PlotKind, input: string, name: string): string => {
  const output = join(outDir, name);
  render({ kind, input: fixture(input), output });
  expect(existsSync(output)).toBe(true);
  const svg = readFileSync(output, "utf-8");
  expect(svg.startsWith("<svg ")).toBe(true);
  expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  expect(svg.length).toBeGreaterThan(1000);
  return svg;
};

describe("render", () => {
  it("draws the projected Q map with one cell per grid node", () => {
    const svg = renderFixture("qmap", "qfield.csv", "qmap.svg");
    const cells = svg.match(/<path /g) ?? [];
    // 16 x 24 grid; the wrapping phi column is painted in two pieces
    expect(cells.length).toBeGreaterThanOrEqual(16 * 24);
    expect(svg).toContain("polyline"); // sphere outline
  });

  it("draws the phase distribution as a line plot", () => {
    const svg = renderFixture("phase", "phase.csv", "phase.svg");
    expect(svg.match(/<polyline /g)?.length).toBeGreaterThanOrEqual(1);
    expect(svg).toContain(">S(phi)<");
    expect(svg).toContain(">2pi<");
  });

  it("draws the locking tongue as a filled value grid", () => {
    const svg = renderFixture("tongue", "arnold.csv", "tongue.svg");
    const rects = svg.match(/<rect /g) ?? [];
    // 5 x 3 sweep cells plus the colorbar stops and background
    expect(rects.length).toBeGreaterThanOrEqual(15 + 64);
    expect(svg).toContain(">epsilon<");
  });

  it("draws the breakdown scan as two stacked panels", () => {
    const svg = renderFixture("breakdown", "breakdown.csv", "breakdown.svg");
    expect(svg.match(/<polyline /g)?.length).toBe(2);
    expect(svg).toContain("&lt;Sz&gt;");
    expect(svg).toContain(">equator weight<");
  });

  it("is byte-identical between repeated runs", () => {
    const a = join(outDir, "det-a.svg");
    const b = join(outDir, "det-b.svg");
    render({ kind: "phase", input: fixture("phase.csv"), output: a, title: "t" });
    render({ kind: "phase", input: fixture("phase.csv"), output: b, title: "t" });
    expect(readFileSync(a, "utf-8")).toBe(readFileSync(b, "utf-8"));
  });

  it("rejects a schema mismatch naming the offending column", () => {
    const output = join(outDir, "mismatch.svg");
    expect(() =>
      render({ kind: "qmap", input: fixture("phase.csv"), output }),
    ).toThrow(/missing column 'theta'/);
    expect(existsSync(output)).toBe(false);
  });

  it("rejects an empty CSV without writing a file", () => {
    const input = join(outDir, "empty.csv");
    writeFileSync(input, "phi,s\n");
    const output = join(outDir, "empty.svg");
    expect(() => render({ kind: "phase", input, output })).toThrow(/no data rows/);
    expect(existsSync(output)).toBe(false);
  });

  it("rejects an incomplete q grid", () => {
    const input = join(outDir, "holes.csv");
    writeFileSync(input, "theta,phi,q\n0.5,0,0.1\n0.5,1,0.1\n1.5,0,0.1\n");
    const output = join(outDir, "holes.svg");
    expect(() => render({ kind: "qmap", input, output })).toThrow(/complete/);
    expect(existsSync(output)).toBe(false);
  });
});

describe("cli", () => {
  it("parses the full flag set", () => {
    const job = parseArgs([
      "--kind", "tongue",
      "--input", "in.csv",
      "--output", "out.svg",
      "--title", "sweep",
    ]);
    expect(job).toEqual({ kind: "tongue", input: "in.csv", output: "out.svg", title: "sweep" });
  });

  it("renders end to end and returns 0", () => {
    const output = join(outDir, "cli.svg");
    const code = main(["--kind", "phase", "--input", fixture("phase.csv"), "--output", output]);
    expect(code).toBe(0);
    expect(existsSync(output)).toBe(true);
  });

  it("returns 1 on bad flags, bad kind and bad input", () => {
    expect(main(["--bogus"])).toBe(1);
    expect(main(["--kind", "pie", "--input", "a", "--output", "b"])).toBe(1);
    const output = join(outDir, "never.svg");
    expect(main(["--kind", "phase", "--input", fixture("nothere.csv"), "--output", output])).toBe(1);
    expect(existsSync(output)).toBe(false);
  });

  it("requires kind, input and output", () => {
    expect(() => parseArgs(["--kind", "phase"])).toThrow(/required/);
    expect(() => parseArgs(["--kind"])).toThrow(/needs a value/);
  });
});
