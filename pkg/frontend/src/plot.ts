/** Panel scaffolding: scales, axes, framed plot areas inside an SVG. */

import { Svg, fmt } from "./svg.js";

export interface Scale {
  (value: number): number;
  readonly min: number;
  readonly max: number;
  readonly log: boolean;
}

export function linearScale(min: number, max: number, outMin: number, outMax: number): Scale {
  const span = max - min || 1;
  const f = (v: number) => outMin + ((v - min) / span) * (outMax - outMin);
  return Object.assign(f, { min, max, log: false as const });
}

export function logScale(min: number, max: number, outMin: number, outMax: number): Scale {
  if (min <= 0 || max <= 0) throw new Error("log scale needs positive bounds");
  const lo = Math.log10(min);
  const span = Math.log10(max) - lo || 1;
  const f = (v: number) => outMin + ((Math.log10(v) - lo) / span) * (outMax - outMin);
  return Object.assign(f, { min, max, log: true as const });
}

export interface Panel {
  x: number;
  y: number;
  width: number;
  height: number;
  sx: Scale;
  sy: Scale;
}

export function extent(values: number[], padFraction = 0.05): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

function tickValues(scale: Scale, count = 5): number[] {
  if (scale.log) {
    const lo = Math.ceil(Math.log10(scale.min));
    const hi = Math.floor(Math.log10(scale.max));
    const ticks: number[] = [];
    for (let d = lo; d <= hi; d++) ticks.push(10 ** d);
    return ticks.length >= 2 ? ticks : [scale.min, scale.max];
  }
  const step = (scale.max - scale.min) / (count - 1);
  return Array.from({ length: count }, (_, i) => scale.min + i * step);
}

function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) return v.toExponential(0);
  const s = v.toFixed(2);
  return s.replace(/\.?0+$/, "") || "0";
}

export function drawPanel(
  svg: Svg,
  panel: Panel,
  title: string,
  xLabel: string,
  yLabel: string,
): void {
  const { x, y, width, height, sx, sy } = panel;
  svg.rect(x, y, width, height, "#fafafa");
  for (const v of tickValues(sx)) {
    const px = sx(v);
    svg.line(px, y + height, px, y + height + 4, "#444444");
    svg.line(px, y, px, y + height, "#e0e0e0", 0.5);
    svg.text(px, y + height + 15, tickLabel(v), 9, "middle", "#444444");
  }
  for (const v of tickValues(sy)) {
    const py = sy(v);
    svg.line(x - 4, py, x, py, "#444444");
    svg.line(x, py, x + width, py, "#e0e0e0", 0.5);
    svg.text(x - 6, py + 3, tickLabel(v), 9, "end", "#444444");
  }
  svg.line(x, y, x, y + height, "#444444");
  svg.line(x, y + height, x + width, y + height, "#444444");
  svg.text(x + width / 2, y - 6, title, 11, "middle");
  svg.text(x + width / 2, y + height + 28, xLabel, 10, "middle", "#444444");
  svg.text(x - 34, y - 6, yLabel, 10, "start", "#444444");
}

export function legend(
  svg: Svg,
  x: number,
  y: number,
  entries: Array<[string, string, string]>,
): void {
  entries.forEach(([label, color, dash], i) => {
    const py = y + i * 14;
    svg.line(x, py, x + 18, py, color, 1.5, dash);
    svg.text(x + 23, py + 3, label, 9);
  });
}

/** Clip a polyline to finite panel coordinates (drops non-finite points). */
export function toPoints(
  xs: number[],
  ys: number[],
  sx: Scale,
  sy: Scale,
): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i++) {
    const px = sx(xs[i]);
    const py = sy(ys[i]);
    if (Number.isFinite(px) && Number.isFinite(py)) pts.push([px, py]);
  }
  return pts;
}

export { fmt };
