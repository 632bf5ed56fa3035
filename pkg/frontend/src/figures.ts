/** The four figure kinds over the simulator's CSV schemas. Rendering never
 * recomputes physics: it reads rows, fits log-log slopes with the shared
 * OLS contract, and draws. */

import { numericColumn, parseCsv, SchemaMismatch, Table } from "./csv.js";
import { fitLogLog, FitResult } from "./fit.js";
import { linearScale, linTicks, logScale, logTicks, plotArea, SvgChart } from "./svg.js";

export type FigureKind = "drift_slope" | "bilinear_overlay" | "growth_envelope" | "order_check";

export interface FigureRequest {
  kind: FigureKind;
  csvText: string;
  csvText2?: string;
  fitRange?: [number, number];
}

export interface FigureResult {
  svg: string;
  summary: string[];
  fit?: FitResult;
}

const SCHEMAS: Record<FigureKind, string[]> = {
  drift_slope: ["n", "s", "t_loc", "dt", "drift_sup"],
  bilinear_overlay: [
    "d",
    "lambda",
    "n1",
    "n2",
    "trial",
    "ratio",
    "bound_d3",
    "bound_n2sqrt",
    "ratio_over_d3",
    "ratio_over_n2sqrt",
  ],
  growth_envelope: ["t", "h1", "h2", "envelope_ratio"],
  order_check: ["dt", "drift_sup"],
};

export function render(req: FigureRequest): FigureResult {
  const table = parseCsv(req.csvText, SCHEMAS[req.kind]);
  switch (req.kind) {
    case "drift_slope":
      return renderSlope(table, req.fitRange, "n", "drift sup", "drift vs N", "slope");
    case "order_check":
      return renderSlope(table, req.fitRange, "dt", "drift sup", "drift vs dt", "order");
    case "bilinear_overlay":
      return renderBilinear(table);
    case "growth_envelope":
      return renderGrowth(table);
  }
}

function inRange(v: number, range?: [number, number]): boolean {
  return !range || (v >= range[0] && v <= range[1]);
}

function renderSlope(
  table: Table,
  fitRange: [number, number] | undefined,
  xCol: string,
  yLabel: string,
  title: string,
  slopeWord: string,
): FigureResult {
  const xAll = numericColumn(table, xCol);
  const yAll = numericColumn(table, "drift_sup");
  const keep = xAll.map((v) => inRange(v, fitRange));
  const x = xAll.filter((_, i) => keep[i]);
  const y = yAll.filter((_, i) => keep[i]);
  const fit = fitLogLog(x, y);

  const a = plotArea();
  const sx = logScale(Math.min(...xAll), Math.max(...xAll), a.x0, a.x1);
  const sy = logScale(Math.min(...yAll), Math.max(...yAll), a.y0, a.y1);
  const chart = new SvgChart(title);
  chart.axes(
    sx,
    sy,
    logTicks(Math.min(...xAll), Math.max(...xAll)),
    logTicks(Math.min(...yAll), Math.max(...yAll)),
    xCol,
    yLabel,
  );
  chart.dots(xAll, yAll, sx, sy, "#1f5fa8", "data");
  const xf = [Math.min(...x), Math.max(...x)];
  const yf = xf.map((v) => Math.exp(fit.intercept + fit.slope * Math.log(v)));
  chart.polyline(xf, yf, sx, sy, "#c23b22", "fit", "6 3");
  chart.annotation(`${slopeWord} = ${fit.slope.toFixed(6)}`, 0);
  chart.annotation(`R^2 = ${fit.r2.toFixed(6)}`, 1);
  return {
    svg: chart.render(),
    summary: [
      `${slopeWord} = ${fit.slope.toFixed(6)}`,
      `r2 = ${fit.r2.toFixed(6)}`,
      `n_points = ${fit.n}`,
    ],
    fit,
  };
}

function renderBilinear(table: Table): FigureResult {
  const n1 = numericColumn(table, "n1");
  const ratio = numericColumn(table, "ratio");
  const boundD = numericColumn(table, "bound_d3");
  const boundS = numericColumn(table, "bound_n2sqrt");

  const levels = [...new Set(n1)].sort((p, q) => p - q);
  const meanAt = (xs: number[]) =>
    levels.map((lv) => {
      const vals = xs.filter((_, i) => n1[i] === lv);
      return vals.reduce((p, q) => p + q, 0) / vals.length;
    });
  const meanRatio = meanAt(ratio);
  const dBound = levels.map((lv) => boundD[n1.indexOf(lv)]);
  const sBound = levels.map((lv) => boundS[n1.indexOf(lv)]);

  const ymin = Math.min(...ratio, ...dBound, ...sBound);
  const ymax = Math.max(...ratio, ...dBound, ...sBound);
  const a = plotArea();
  const sx = logScale(levels[0], levels[levels.length - 1], a.x0, a.x1);
  const sy = logScale(ymin, ymax, a.y0, a.y1);
  const chart = new SvgChart("bilinear ratio vs N1 with bound overlays");
  chart.axes(sx, sy, logTicks(levels[0], levels[levels.length - 1]), logTicks(ymin, ymax), "N1", "ratio");
  chart.dots(n1, ratio, sx, sy, "#777777", "trials", 2.5);
  chart.polyline(levels, meanRatio, sx, sy, "#1f5fa8", "ratio");
  chart.polyline(levels, dBound, sx, sy, "#c23b22", "bound_d3", "6 3");
  chart.polyline(levels, sBound, sx, sy, "#2e8b57", "bound_n2sqrt", "2 3");
  chart.legend([
    ["mean measured ratio", "#1f5fa8"],
    ["dimension-dependent bound", "#c23b22"],
    ["sqrt(N2) reference", "#2e8b57"],
  ]);
  const worst = Math.max(...ratio.map((r, i) => r / boundD[i]));
  return {
    svg: chart.render(),
    summary: [`max ratio/bound = ${worst.toFixed(6)}`, `n1_levels = ${levels.join(" ")}`],
  };
}

function renderGrowth(table: Table): FigureResult {
  const t = numericColumn(table, "t");
  const h2 = numericColumn(table, "h2");
  const er = numericColumn(table, "envelope_ratio");
  const envelope = h2.map((v, i) => v / er[i]);

  const ymax = Math.max(...h2, ...envelope);
  const a = plotArea();
  const sx = linearScale(Math.min(...t), Math.max(...t), a.x0, a.x1);
  const sy = linearScale(0, ymax * 1.05, a.y0, a.y1);
  const chart = new SvgChart("H2 growth against the envelope");
  chart.axes(
    sx,
    sy,
    linTicks(Math.min(...t), Math.max(...t)),
    linTicks(0, ymax * 1.05),
    "t",
    "H2 norm",
  );
  chart.polyline(t, h2, sx, sy, "#1f5fa8", "h2");
  chart.polyline(t, envelope, sx, sy, "#c23b22", "envelope", "6 3");
  chart.legend([
    ["measured H2", "#1f5fa8"],
    ["A + (1+t)^(1+delta)", "#c23b22"],
  ]);
  const supRatio = Math.max(...er);
  return {
    svg: chart.render(),
    summary: [`sup envelope ratio = ${supRatio.toFixed(6)}`],
  };
}

export { SchemaMismatch };
