/**
 * Strict reader for benchmark sweep CSVs.
 *
 * Expected schema (exact column names, any order):
 *   sweep_var,value,estimator,mean_error,std_error,mean_runtime_s
 */

export interface SweepRow {
  sweepVar: string;
  value: number;
  estimator: string;
  meanError: number;
  stdError: number;
  meanRuntimeS: number;
}

export interface EstimatorSeries {
  name: string;
  points: { x: number; mean: number; std: number }[];
}

export const REQUIRED_COLUMNS = [
  "sweep_var",
  "value",
  "estimator",
  "mean_error",
  "std_error",
  "mean_runtime_s",
] as const;

export class SchemaError extends Error {}

export function parseSweepCsv(text: string, source = "<csv>"): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: file is empty`);
  }
  const header = lines[0].split(",").map((c) => c.trim());
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${source}: missing column${missing.length > 1 ? "s" : ""}: ${missing.join(", ")}`,
    );
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const rows: SweepRow[] = [];
  for (let lineno = 1; lineno < lines.length; lineno++) {
    const cells = lines[lineno].split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${source}: line ${lineno + 1}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    const num = (column: string): number => {
      const raw = cells[index.get(column)!];
      const value = Number(raw);
      if (!Number.isFinite(value)) {
        throw new SchemaError(
          `${source}: line ${lineno + 1}: non-numeric ${column}: ${raw}`,
        );
      }
      return value;
    };
    rows.push({
      sweepVar: cells[index.get("sweep_var")!],
      value: num("value"),
      estimator: cells[index.get("estimator")!],
      meanError: num("mean_error"),
      stdError: num("std_error"),
      meanRuntimeS: num("mean_runtime_s"),
    });
  }
  if (rows.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return rows;
}

/** Group rows into one x-sorted series per estimator, in first-seen order. */
export function toSeries(rows: SweepRow[]): EstimatorSeries[] {
  const byName = new Map<string, EstimatorSeries>();
  for (const row of rows) {
    let series = byName.get(row.estimator);
    if (!series) {
      series = { name: row.estimator, points: [] };
      byName.set(row.estimator, series);
    }
    series.points.push({ x: row.value, mean: row.meanError, std: row.stdError });
  }
  for (const series of byName.values()) {
    series.points.sort((a, b) => a.x - b.x);
  }
  return [...byName.values()];
}
