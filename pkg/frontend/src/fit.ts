/** Ordinary least squares on log-log data.
 *
 * This mirrors the simulator's fitting contract operation for operation
 * (means, S_xx, S_xy, R^2 = 1 - SS_res/SS_tot, residual = sqrt(SS_res/n))
 * so slopes agree with primary-reported values to well under 1e-6.
 */

export interface FitResult {
  slope: number;
  intercept: number;
  r2: number;
  residual: number;
  n: number;
}

export function fitLogLog(x: number[], y: number[]): FitResult {
  if (x.length !== y.length || x.length < 2) {
    throw new Error("need at least two (x, y) pairs");
  }
  if (x.some((v) => v <= 0) || y.some((v) => v <= 0)) {
    throw new Error("log-log fit needs positive data");
  }
  const lx = x.map(Math.log);
  const ly = y.map(Math.log);
  const mx = lx.reduce((a, b) => a + b, 0) / lx.length;
  const my = ly.reduce((a, b) => a + b, 0) / ly.length;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < lx.length; i++) {
    sxx += (lx[i] - mx) ** 2;
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx === 0) {
    throw new Error("x values are all equal");
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let ssRes = 0;
  let ssTot = 0;
  for (let i = 0; i < lx.length; i++) {
    ssRes += (ly[i] - (intercept + slope * lx[i])) ** 2;
    ssTot += (ly[i] - my) ** 2;
  }
  const r2 = ssTot === 0 ? 1.0 : 1.0 - ssRes / ssTot;
  return {
    slope,
    intercept,
    r2,
    residual: Math.sqrt(ssRes / lx.length),
    n: lx.length,
  };
}
