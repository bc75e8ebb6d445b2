// Thin flag wrapper around render():
//   spinsync-plots --kind qmap --input out/qfield.csv --output qmap.svg
// Optional: --title "text". Exits 1 with a message on any problem; the
// output file is written only when the whole figure built.

import { pathToFileURL } from "node:url";

import { PLOT_KINDS, render, type PlotJob, type PlotKind } from "./render.js";

const USAGE = `usage: spinsync-plots --kind <${PLOT_KINDS.join("|")}> --input <csv> --output <svg> [--title <text>]`;

export function parseArgs(argv: string[]): PlotJob {
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  let title: string | undefined;

  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i] as string;
    const value = argv[i + 1];
    if (flag === "--kind" || flag === "--input" || flag === "--output" || flag === "--title") {
      if (value === undefined) {
        throw new Error(`${flag} needs a value\n${USAGE}`);
      }
      if (flag === "--kind") kind = value;
      else if (flag === "--input") input = value;
      else if (flag === "--output") output = value;
      else title = value;
      i += 1;
    } else {
      throw new Error(`unknown argument '${flag}'\n${USAGE}`);
    }
  }

  if (kind === undefined || input === undefined || output === undefined) {
    throw new Error(`--kind, --input and --output are all required\n${USAGE}`);
  }
  if (!(PLOT_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown plot kind '${kind}' (expected one of: ${PLOT_KINDS.join(", ")})`);
  }
  const job: PlotJob = { kind: kind as PlotKind, input, output };
  if (title !== undefined) {
    job.title = title;
  }
  return job;
}

export function main(argv: string[]): number {
  try {
    render(parseArgs(argv));
    return 0;
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    console.error(`spinsync-plots: ${message}`);
    return 1;
  }
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
