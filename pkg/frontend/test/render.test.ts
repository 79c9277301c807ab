import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import { describe, expect, it } from "vitest";

import { parseSweepCsv, toSeries } from "../src/csv";
import { legendOrder, PanelData, renderFigure, renderPanel } from "../src/render";
import { BASELINE_NAME, colorFor, nameHash } from "../src/style";

const FIXTURES = resolve(__dirname, "..", "fixtures");

function panelFromFixture(name: string, xLabel: string): PanelData {
  const rows = parseSweepCsv(
    readFileSync(resolve(FIXTURES, name), "utf-8"),
    name,
  );
  return { series: toSeries(rows), xLabel, title: name };
}

const HEADLINE_PANELS = [
  panelFromFixture("headline_n500.csv", "n"),
  panelFromFixture("headline_n200.csv", "n"),
  panelFromFixture("d_sweep.csv", "d"),
  panelFromFixture("eta_sweep.csv", "eta"),
];

describe("style", () => {
  it("hash is stable and colors are deterministic", () => {
    expect(nameHash("que_low_n")).toBe(nameHash("que_low_n"));
    expect(colorFor("que_low_n")).toBe(colorFor("que_low_n"));
    expect(colorFor("que_low_n")).not.toBe(colorFor("lrv"));
  });

  it("baseline gets the reserved dark color", () => {
    expect(colorFor(BASELINE_NAME)).toBe("#222222");
  });
});

describe("renderPanel", () => {
  it("draws one band and one mean line per estimator", () => {
    const panel = HEADLINE_PANELS[3]; // eta sweep, multi-point series
    const svg = renderPanel(panel, 560, 360, "error");
    for (const series of panel.series) {
      const bandTag = `<polygon class="band" data-estimator="${series.name}"`;
      const meanTag = `<polyline class="mean" data-estimator="${series.name}"`;
      expect(svg).toContain(bandTag);
      expect(svg).toContain(meanTag);
    }
  });

  it("renders single-value sweeps as markers with a collapsed band", () => {
    const panel = HEADLINE_PANELS[0];
    const svg = renderPanel(panel, 560, 360, "error");
    expect(svg).toContain('<circle class="marker"');
    expect(svg).toContain('<polygon class="band"');
  });

  it("draws the baseline dashed", () => {
    const svg = renderPanel(HEADLINE_PANELS[3], 560, 360, "error");
    const baselineLine = svg
      .split("\n")
      .find(
        (line) =>
          line.includes('class="mean"') && line.includes(BASELINE_NAME),
      );
    expect(baselineLine).toBeDefined();
    expect(baselineLine).toContain("stroke-dasharray");
  });

  it("orders the legend by final error, worst first", () => {
    const names = legendOrder(HEADLINE_PANELS[0].series);
    expect(names[0]).toBe("ev_filtering_legacy");
    // robust estimators sit below the contaminated sample mean
    const pos = (name: string) => names.indexOf(name);
    for (const robust of ["lrv", "pgd", "ev_filtering_low_n", "que_low_n"]) {
      expect(pos(robust)).toBeGreaterThan(pos("sample_mean"));
    }
    expect(pos("sample_mean")).toBeGreaterThan(pos("que_legacy"));
  });
});

describe("renderFigure", () => {
  it("composes a four-panel figure with the baseline everywhere", () => {
    const svg = renderFigure(HEADLINE_PANELS);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.match(/class="panel"/g)?.length).toBe(4);
    const baselineLines = svg
      .split("\n")
      .filter(
        (line) =>
          line.includes('class="mean"') && line.includes(BASELINE_NAME),
      );
    expect(baselineLines.length).toBe(4);
  });

  it("is deterministic", () => {
    const a = renderFigure(HEADLINE_PANELS);
    const b = renderFigure(HEADLINE_PANELS);
    expect(a).toBe(b);
  });

  it("rejects more than four panels", () => {
    const five = [...HEADLINE_PANELS, HEADLINE_PANELS[0]];
    expect(() => renderFigure(five)).toThrowError(/1 to 4/);
  });

  it("supports log axes without breaking", () => {
    const panel = { ...HEADLINE_PANELS[2], logY: true };
    const svg = renderFigure([panel]);
    expect(svg).toContain('class="panel"');
  });
});
