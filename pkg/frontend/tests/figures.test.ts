import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

import { fitLogLog } from "../src/fit.js";
import { render } from "../src/figures.js";
import { SchemaMismatch, parseCsv } from "../src/csv.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const GOLDENS = join(HERE, "..", "..", "goldens");

function golden(...parts: string[]): string {
  return readFileSync(join(GOLDENS, ...parts), "ascii");
}

describe("fitLogLog", () => {
  it("recovers an exact power law", () => {
    const x = [4, 8, 16, 32];
    const y = x.map((v) => 3 / v);
    const fit = fitLogLog(x, y);
    expect(fit.slope).toBeCloseTo(-1.0, 12);
    expect(fit.r2).toBeCloseTo(1.0, 12);
  });

  it("rejects bad input", () => {
    expect(() => fitLogLog([1], [1])).toThrow();
    expect(() => fitLogLog([1, 2], [1, -1])).toThrow();
  });
});

describe("synthetic acceptance inputs", () => {
  it("exact N^-1 drift prints slope -1.000000", () => {
    const csv =
      "n,s,t_loc,dt,drift_sup\n" +
      [4, 8, 16, 32].map((n) => `${n},0.85,0.5,0.0001,${1 / n}`).join("\n") +
      "\n";
    const out = render({ kind: "drift_slope", csvText: csv });
    expect(out.summary[0]).toBe("slope = -1.000000");
  });

  it("two-point order check with drift(dt) = 4 drift(dt/2) prints order 2.000000", () => {
    const csv = "dt,drift_sup\n0.002,0.0004\n0.001,0.0001\n";
    const out = render({ kind: "order_check", csvText: csv });
    expect(out.summary[0]).toBe("order = 2.000000");
  });
});

describe("golden renders", () => {
  it("drift_slope renders and matches the primary-reported slope to 1e-6", () => {
    const out = render({ kind: "drift_slope", csvText: golden("drift", "drift.csv") });
    expect(out.svg).toContain("<svg");
    expect(out.svg).toContain('class="fit"');
    const report = JSON.parse(golden("drift", "report.json"));
    expect(Math.abs(out.fit!.slope - report.fits.drift_vs_n.slope)).toBeLessThan(1e-6);
  });

  it("order_check renders and matches the primary-reported order to 1e-6", () => {
    const out = render({ kind: "order_check", csvText: golden("order", "order.csv") });
    expect(out.svg).toContain('class="fit"');
    const report = JSON.parse(golden("order", "report.json"));
    expect(Math.abs(out.fit!.slope - report.fits.order.slope)).toBeLessThan(1e-6);
  });

  it("bilinear_overlay renders ratio and bound curves", () => {
    const out = render({ kind: "bilinear_overlay", csvText: golden("bilinear", "bilinear.csv") });
    expect(out.svg).toContain('class="ratio"');
    expect(out.svg).toContain('class="bound_d3"');
    expect(out.svg).toContain('class="bound_n2sqrt"');
  });

  it("growth_envelope renders the H2 series and envelope", () => {
    const out = render({ kind: "growth_envelope", csvText: golden("growth", "growth.csv") });
    expect(out.svg).toContain('class="h2"');
    expect(out.svg).toContain('class="envelope"');
  });

  it("rendering is deterministic", () => {
    const csv = golden("drift", "drift.csv");
    const a = render({ kind: "drift_slope", csvText: csv });
    const b = render({ kind: "drift_slope", csvText: csv });
    expect(a.svg).toBe(b.svg);
  });
});

describe("schema validation", () => {
  it("rejects mismatched headers", () => {
    expect(() =>
      render({ kind: "drift_slope", csvText: "a,b\n1,2\n" }),
    ).toThrow(SchemaMismatch);
  });

  it("rejects empty input", () => {
    expect(() => render({ kind: "order_check", csvText: "dt,drift_sup\n" })).toThrow();
  });

  it("parses the documented schemas strictly", () => {
    const t = parseCsv("dt,drift_sup\n1,2\n", ["dt", "drift_sup"]);
    expect(t.rows.length).toBe(1);
  });
});
