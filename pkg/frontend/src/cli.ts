/**
 * Standalone figure renderer.
 *
 * Usage: node dist/cli.js <panel-spec.json>
 *
 * The panel-spec JSON lists 1-4 benchmark CSVs and the output image path:
 * {
 *   "output": "figure.svg",
 *   "panels": [
 *     {"csv": "headline_n500.csv", "x_label": "n", "title": "n = 500",
 *      "log_x": false, "log_y": false}
 *   ]
 * }
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { parseSweepCsv, toSeries } from "./csv.js";
import { PanelData, renderFigure } from "./render.js";

interface PanelSpecEntry {
  csv: string;
  x_label?: string;
  title?: string;
  log_x?: boolean;
  log_y?: boolean;
}

interface PanelSpec {
  output: string;
  panels: PanelSpecEntry[];
  y_label?: string;
}

export function loadPanelSpec(path: string): PanelSpec {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  if (!raw || typeof raw !== "object") {
    throw new Error(`${path}: panel spec must be a JSON object`);
  }
  if (typeof raw.output !== "string" || raw.output.length === 0) {
    throw new Error(`${path}: missing "output" path`);
  }
  if (!Array.isArray(raw.panels) || raw.panels.length < 1 || raw.panels.length > 4) {
    throw new Error(`${path}: "panels" must list 1 to 4 entries`);
  }
  for (const panel of raw.panels) {
    if (typeof panel.csv !== "string") {
      throw new Error(`${path}: every panel needs a "csv" path`);
    }
  }
  return raw as PanelSpec;
}

export function renderFromSpec(specPath: string): string {
  const spec = loadPanelSpec(specPath);
  const base = dirname(resolve(specPath));
  const panels: PanelData[] = spec.panels.map((entry) => {
    const csvPath = resolve(base, entry.csv);
    const rows = parseSweepCsv(readFileSync(csvPath, "utf-8"), csvPath);
    return {
      series: toSeries(rows),
      xLabel: entry.x_label ?? rows[0].sweepVar,
      title: entry.title,
      logX: entry.log_x,
      logY: entry.log_y,
    };
  });
  const svg = renderFigure(panels, { yLabel: spec.y_label });
  const outPath = resolve(base, spec.output);
  writeFileSync(outPath, svg, "utf-8");
  return outPath;
}

export function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error("usage: render <panel-spec.json>");
    return 2;
  }
  try {
    const outPath = renderFromSpec(argv[0]);
    console.error(`wrote ${outPath}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
