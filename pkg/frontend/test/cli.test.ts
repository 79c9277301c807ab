import { cpSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { describe, expect, it } from "vitest";

import { loadPanelSpec, main, renderFromSpec } from "../src/cli";

const FIXTURES = resolve(__dirname, "..", "fixtures");

function workspace(): string {
  const dir = mkdtempSync(join(tmpdir(), "figures-"));
  for (const name of [
    "headline_n500.csv",
    "headline_n200.csv",
    "d_sweep.csv",
    "eta_sweep.csv",
  ]) {
    cpSync(resolve(FIXTURES, name), join(dir, name));
  }
  return dir;
}

function writeSpec(dir: string, spec: unknown): string {
  const path = join(dir, "spec.json");
  writeFileSync(path, JSON.stringify(spec));
  return path;
}

const FOUR_PANELS = {
  output: "figure.svg",
  panels: [
    { csv: "headline_n500.csv", x_label: "n", title: "n = 500" },
    { csv: "headline_n200.csv", x_label: "n", title: "n = 200" },
    { csv: "d_sweep.csv", x_label: "d", title: "vs dimension" },
    { csv: "eta_sweep.csv", x_label: "eta", title: "vs corruption" },
  ],
};

describe("panel specs", () => {
  it("accepts a valid four-panel spec", () => {
    const dir = workspace();
    const spec = loadPanelSpec(writeSpec(dir, FOUR_PANELS));
    expect(spec.panels.length).toBe(4);
  });

  it("rejects specs without output or with too many panels", () => {
    const dir = workspace();
    expect(() =>
      loadPanelSpec(writeSpec(dir, { panels: FOUR_PANELS.panels })),
    ).toThrowError(/output/);
    expect(() =>
      loadPanelSpec(
        writeSpec(dir, {
          output: "x.svg",
          panels: [...FOUR_PANELS.panels, ...FOUR_PANELS.panels],
        }),
      ),
    ).toThrowError(/1 to 4/);
  });
});

describe("renderFromSpec", () => {
  it("writes the four-panel figure next to the panel spec", () => {
    const dir = workspace();
    const out = renderFromSpec(writeSpec(dir, FOUR_PANELS));
    const svg = readFileSync(out, "utf-8");
    expect(out.endsWith("figure.svg")).toBe(true);
    expect(svg.match(/class="panel"/g)?.length).toBe(4);
    expect(svg).toContain("good_sample_mean");
  });

  it("propagates schema errors from broken CSVs", () => {
    const dir = workspace();
    const broken = readFileSync(join(dir, "eta_sweep.csv"), "utf-8")
      .split("\n")
      .map((line) => line.split(",").slice(0, 4).join(","))
      .join("\n");
    writeFileSync(join(dir, "eta_sweep.csv"), broken);
    expect(() =>
      renderFromSpec(
        writeSpec(dir, {
          output: "x.svg",
          panels: [{ csv: "eta_sweep.csv" }],
        }),
      ),
    ).toThrowError(/std_error/);
  });
});

describe("main", () => {
  it("returns 0 on success and writes the file", () => {
    const dir = workspace();
    const spec = writeSpec(dir, FOUR_PANELS);
    expect(main([spec])).toBe(0);
    expect(readFileSync(join(dir, "figure.svg"), "utf-8")).toContain("<svg");
  });

  it("returns 2 on usage errors and 1 on bad input", () => {
    expect(main([])).toBe(2);
    expect(main(["/nonexistent/spec.json"])).toBe(1);
  });
});
