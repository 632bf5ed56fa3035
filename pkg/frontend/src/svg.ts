/** Minimal deterministic SVG chart builder: fixed canvas, no timestamps,
 * numbers serialized with a fixed precision so identical inputs give
 * byte-identical files. */

export const WIDTH = 800;
export const HEIGHT = 560;
const MARGIN = { left: 80, right: 30, top: 40, bottom: 60 };

export type Scale = (v: number) => number;

export function num(v: number): string {
  return Number(v.toPrecision(8)).toString();
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  return (v) => outLo + ((v - lo) / span) * (outHi - outLo);
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const span = Math.log10(hi) - llo || 1;
  return (v) => outLo + ((Math.log10(v) - llo) / span) * (outHi - outLo);
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const v = 10 ** e;
    if (v >= lo / 1.0001 && v <= hi * 1.0001) ticks.push(v);
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

export function linTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo || 1;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const mult = [1, 2, 5, 10].find((m) => span / (step * m) <= count) ?? 10;
  const s = step * mult;
  const start = Math.ceil(lo / s) * s;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += s) out.push(Number(v.toPrecision(12)));
  return out;
}

export class SvgChart {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">${escapeXml(title)}</text>`,
    );
  }

  axes(
    sx: Scale,
    sy: Scale,
    xTicks: number[],
    yTicks: number[],
    xLabel: string,
    yLabel: string,
    fmt: (v: number) => string = (v) => formatTick(v),
  ): void {
    const a = plotArea();
    this.parts.push(
      `<line x1="${a.x0}" y1="${a.y0}" x2="${a.x1}" y2="${a.y0}" stroke="black"/>`,
      `<line x1="${a.x0}" y1="${a.y0}" x2="${a.x0}" y2="${a.y1}" stroke="black"/>`,
    );
    for (const t of xTicks) {
      const x = num(sx(t));
      this.parts.push(
        `<line x1="${x}" y1="${a.y0}" x2="${x}" y2="${a.y0 + 5}" stroke="black"/>`,
        `<text x="${x}" y="${a.y0 + 20}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmt(t)}</text>`,
      );
    }
    for (const t of yTicks) {
      const y = num(sy(t));
      this.parts.push(
        `<line x1="${a.x0 - 5}" y1="${y}" x2="${a.x0}" y2="${y}" stroke="black"/>`,
        `<text x="${a.x0 - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" font-family="sans-serif" font-size="11">${fmt(t)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${(a.x0 + a.x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-family="sans-serif" font-size="13">${escapeXml(xLabel)}</text>`,
      `<text x="20" y="${(a.y0 + a.y1) / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 ${(a.y0 + a.y1) / 2})">${escapeXml(yLabel)}</text>`,
    );
  }

  polyline(xs: number[], ys: number[], sx: Scale, sy: Scale, color: string, cls: string, dash = ""): void {
    const pts = xs.map((x, i) => `${num(sx(x))},${num(sy(ys[i]))}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline class="${cls}" points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"${dashAttr}/>`,
    );
  }

  dots(xs: number[], ys: number[], sx: Scale, sy: Scale, color: string, cls: string, r = 3.5): void {
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle class="${cls}" cx="${num(sx(xs[i]))}" cy="${num(sy(ys[i]))}" r="${r}" fill="${color}"/>`,
      );
    }
  }

  annotation(text: string, line: number): void {
    const a = plotArea();
    this.parts.push(
      `<text x="${a.x1 - 8}" y="${a.y1 + 16 + 18 * line}" text-anchor="end" font-family="monospace" font-size="13">${escapeXml(text)}</text>`,
    );
  }

  legend(entries: Array<[string, string]>): void {
    const a = plotArea();
    entries.forEach(([label, color], i) => {
      const y = a.y1 + 16 + 18 * i;
      this.parts.push(
        `<line x1="${a.x0 + 10}" y1="${y - 4}" x2="${a.x0 + 34}" y2="${y - 4}" stroke="${color}" stroke-width="2"/>`,
        `<text x="${a.x0 + 40}" y="${y}" font-family="sans-serif" font-size="12">${escapeXml(label)}</text>`,
      );
    });
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0);
  }
  return Number(v.toPrecision(6)).toString();
}
