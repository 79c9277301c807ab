/**
 * SVG renderer for benchmark error curves.
 *
 * Each panel draws, per estimator, a mean-error line with a shaded band
 * of one standard deviation, plus a legend sorted by final error
 * (largest first) so the visual stacking order is readable at a glance.
 * The good_sample_mean baseline is drawn as a dashed dark line.
 */

import { EstimatorSeries } from "./csv.js";
import { formatTick, makeScale } from "./scale.js";
import { BASELINE_NAME, colorFor, dashFor } from "./style.js";

export interface PanelData {
  series: EstimatorSeries[];
  xLabel: string;
  title?: string;
  logX?: boolean;
  logY?: boolean;
}

export interface FigureOptions {
  panelWidth?: number;
  panelHeight?: number;
  yLabel?: string;
}

const MARGIN = { top: 34, right: 16, bottom: 42, left: 56 };

function fmt(value: number): string {
  return Number(value.toFixed(2)).toString();
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Legend order: largest final mean error first (baseline drawn last). */
export function legendOrder(series: EstimatorSeries[]): string[] {
  const finalError = (s: EstimatorSeries) =>
    s.points.length > 0 ? s.points[s.points.length - 1].mean : 0;
  return [...series]
    .sort((a, b) => finalError(b) - finalError(a))
    .map((s) => s.name);
}

export function renderPanel(
  panel: PanelData,
  width: number,
  height: number,
  yLabel: string,
): string {
  if (panel.series.length === 0) {
    throw new Error("panel has no series to draw");
  }
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = panel.series.flatMap((s) => s.points.map((p) => p.x));
  const yLo = panel.series.flatMap((s) =>
    s.points.map((p) => p.mean - p.std),
  );
  const yHi = panel.series.flatMap((s) =>
    s.points.map((p) => p.mean + p.std),
  );
  const xScale = makeScale(
    Math.min(...xs),
    Math.max(...xs),
    0,
    plotW,
    panel.logX ?? false,
  );
  const yMin = panel.logY ? Math.min(...yLo.filter((v) => v > 0), 1) : Math.min(...yLo, 0);
  const yScale = makeScale(
    yMin,
    Math.max(...yHi),
    plotH,
    0,
    panel.logY ?? false,
  );

  const parts: string[] = [];
  parts.push(`<g class="panel">`);

  // frame and ticks
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#888"/>`,
  );
  for (const tick of xScale.ticks) {
    const x = MARGIN.left + xScale.map(tick);
    if (x < MARGIN.left - 0.5 || x > MARGIN.left + plotW + 0.5) continue;
    parts.push(
      `<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 4}" stroke="#444"/>`,
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 16}" font-size="10" text-anchor="middle">${formatTick(tick)}</text>`,
    );
  }
  for (const tick of yScale.ticks) {
    const y = MARGIN.top + yScale.map(tick);
    if (y < MARGIN.top - 0.5 || y > MARGIN.top + plotH + 0.5) continue;
    parts.push(
      `<line x1="${MARGIN.left - 4}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#444"/>`,
      `<text x="${MARGIN.left - 7}" y="${fmt(y + 3)}" font-size="10" text-anchor="end">${formatTick(tick)}</text>`,
    );
  }

  // axis labels and title
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 8}" font-size="12" text-anchor="middle">${escapeXml(panel.xLabel)}</text>`,
    `<text x="14" y="${MARGIN.top + plotH / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 ${MARGIN.top + plotH / 2})">${escapeXml(yLabel)}</text>`,
  );
  if (panel.title) {
    parts.push(
      `<text x="${MARGIN.left + plotW / 2}" y="${MARGIN.top - 12}" font-size="13" font-weight="bold" text-anchor="middle">${escapeXml(panel.title)}</text>`,
    );
  }

  // draw baseline last so it stays visible
  const drawOrder = [...panel.series].sort((a, b) =>
    a.name === BASELINE_NAME ? 1 : b.name === BASELINE_NAME ? -1 : 0,
  );
  for (const series of drawOrder) {
    const color = colorFor(series.name);
    const px = (p: { x: number }) => MARGIN.left + xScale.map(p.x);
    const py = (v: number) => MARGIN.top + yScale.map(v);

    const upper = series.points.map((p) => `${fmt(px(p))},${fmt(py(p.mean + p.std))}`);
    const lower = [...series.points]
      .reverse()
      .map((p) => `${fmt(px(p))},${fmt(py(p.mean - p.std))}`);
    parts.push(
      `<polygon class="band" data-estimator="${escapeXml(series.name)}" points="${[...upper, ...lower].join(" ")}" fill="${color}" fill-opacity="0.15" stroke="none"/>`,
    );

    const line = series.points
      .map((p) => `${fmt(px(p))},${fmt(py(p.mean))}`)
      .join(" ");
    const dash = dashFor(series.name);
    parts.push(
      `<polyline class="mean" data-estimator="${escapeXml(series.name)}" points="${line}" fill="none" stroke="${color}" stroke-width="1.6"${dash ? ` stroke-dasharray="${dash}"` : ""}/>`,
    );
    for (const p of series.points) {
      parts.push(
        `<circle class="marker" data-estimator="${escapeXml(series.name)}" cx="${fmt(px(p))}" cy="${fmt(py(p.mean))}" r="2.4" fill="${color}"/>`,
      );
    }
  }

  // legend, largest final error first
  const names = legendOrder(panel.series);
  const legendX = MARGIN.left + plotW - 158;
  let legendY = MARGIN.top + 8;
  parts.push(
    `<rect x="${legendX - 6}" y="${legendY - 4}" width="160" height="${names.length * 14 + 8}" fill="white" fill-opacity="0.85" stroke="#bbb"/>`,
  );
  for (const name of names) {
    const color = colorFor(name);
    const dash = dashFor(name);
    parts.push(
      `<line x1="${legendX}" y1="${legendY + 5}" x2="${legendX + 18}" y2="${legendY + 5}" stroke="${color}" stroke-width="2"${dash ? ` stroke-dasharray="${dash}"` : ""}/>`,
      `<text class="legend-entry" x="${legendX + 23}" y="${legendY + 8}" font-size="10">${escapeXml(name)}</text>`,
    );
    legendY += 14;
  }

  parts.push(`</g>`);
  return parts.join("\n");
}

/** Compose up to four panels into one figure (two-column grid). */
export function renderFigure(
  panels: PanelData[],
  options: FigureOptions = {},
): string {
  if (panels.length < 1 || panels.length > 4) {
    throw new Error(`expected 1 to 4 panels, got ${panels.length}`);
  }
  const panelWidth = options.panelWidth ?? 560;
  const panelHeight = options.panelHeight ?? 360;
  const yLabel = options.yLabel ?? "error";
  const cols = panels.length === 1 ? 1 : 2;
  const rows = Math.ceil(panels.length / cols);
  const width = cols * panelWidth;
  const height = rows * panelHeight;

  const body = panels
    .map((panel, i) => {
      const tx = (i % cols) * panelWidth;
      const ty = Math.floor(i / cols) * panelHeight;
      return `<g transform="translate(${tx} ${ty})">\n${renderPanel(panel, panelWidth, panelHeight, yLabel)}\n</g>`;
    })
    .join("\n");

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
