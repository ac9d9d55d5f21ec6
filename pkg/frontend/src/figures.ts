/** One renderer per figure id, reading the experiment's CSV tables.
 *
 * Each figure declares which tables and columns it needs; the renderer
 * validates them up front so a missing column fails with its name before
 * anything is drawn.
 */

import {
  Cell,
  Table,
  TableError,
  cellOf,
  distinct,
  filterRows,
  numericColumn,
  requireColumns,
} from "./csv.js";
import { PALETTE, Svg, heatColor } from "./svg.js";
import { Panel, drawPanel, extent, legend, linearScale, logScale, toPoints } from "./plot.js";

export interface FigureSpec {
  id: string;
  /** table file stems consumed by the renderer, in order */
  tables: string[];
  /** columns required per table stem */
  columns: Record<string, string[]>;
  render: (tables: Table[], meta: Record<string, unknown>) => string;
}

const MARGIN = { left: 56, right: 16, top: 36, bottom: 44 };
const PANEL_W = 240;
const PANEL_H = 180;

function panelGrid(count: number, perRow: number): { width: number; height: number; at: (i: number) => { x: number; y: number } } {
  const rows = Math.ceil(count / perRow);
  const width = MARGIN.left + perRow * (PANEL_W + MARGIN.left) ;
  const height = MARGIN.top + rows * (PANEL_H + MARGIN.bottom + MARGIN.top);
  return {
    width,
    height,
    at: (i: number) => ({
      x: MARGIN.left + (i % perRow) * (PANEL_W + MARGIN.left),
      y: MARGIN.top + Math.floor(i / perRow) * (PANEL_H + MARGIN.bottom + MARGIN.top),
    }),
  };
}

function groupRows(table: Table, key: string): Map<Cell, Table> {
  const groups = new Map<Cell, Table>();
  for (const value of distinct(table.rows.map((r) => cellOf(table, r, key)))) {
    groups.set(value, filterRows(table, (r) => cellOf(table, r, key) === value));
  }
  return groups;
}

function configNumber(meta: Record<string, unknown>, key: string): number {
  const cfg = meta["config"];
  if (cfg && typeof cfg === "object" && key in (cfg as Record<string, unknown>)) {
    const v = (cfg as Record<string, unknown>)[key];
    if (typeof v === "number") return v;
  }
  throw new TableError(`metadata is missing config value ${JSON.stringify(key)}`);
}

function renderTrotterCurves(tables: Table[], meta: Record<string, unknown>): string {
  const [table] = tables;
  const eps = configNumber(meta, "eps");
  const gamma = configNumber(meta, "gamma");
  const omega = Math.sqrt((gamma * gamma) / 4 + eps * eps);
  const groups = groupRows(table, "m");
  const grid = panelGrid(groups.size, 3);
  const svg = new Svg(grid.width, grid.height);
  let i = 0;
  for (const [m, rows] of groups) {
    const ts = numericColumn(rows, "t");
    const { x, y } = grid.at(i++);
    const sx = linearScale(Math.min(...ts), Math.max(...ts), x, x + PANEL_W);
    const sy = linearScale(0, 1, y + PANEL_H, y);
    const panel: Panel = { x, y, width: PANEL_W, height: PANEL_H, sx, sy };
    drawPanel(svg, panel, `M = ${m}`, "step time t", "probability");
    // vertical dotted markers at the k-th off-resonant oscillation up to M
    for (let k = 1; k <= Number(m); k++) {
      const tk = (k * Math.PI) / omega;
      if (tk <= sx.max) svg.line(sx(tk), y, sx(tk), y + PANEL_H, "#999999", 0.8, "2,3");
    }
    svg.polyline(toPoints(ts, numericColumn(rows, "p_cool"), sx, sy), PALETTE[0]);
    svg.polyline(toPoints(ts, numericColumn(rows, "p_reheat"), sx, sy), PALETTE[1]);
    svg.polyline(toPoints(ts, numericColumn(rows, "p_reheat_exact"), sx, sy), "#333333", 1.0, "4,3");
    legend(svg, x + 6, y + 12, [
      ["cooling (split)", PALETTE[0], ""],
      ["reheating (split)", PALETTE[1], ""],
      ["reheating (exact)", "#333333", "4,3"],
    ]);
  }
  return svg.render();
}

function renderDetuningCurves(tables: Table[]): string {
  const [table] = tables;
  const bangbang = filterRows(table, (r) => cellOf(table, r, "mode") === "bangbang");
  const weak = filterRows(table, (r) => cellOf(table, r, "mode") === "weak");
  const grid = panelGrid(2, 2);
  const svg = new Svg(grid.width, grid.height);
  const panels: Array<[string, Table]> = [
    ["single-split coupling", bangbang],
    ["weak coupling", weak],
  ];
  panels.forEach(([title, part], i) => {
    if (part.rows.length === 0) throw new TableError(`table ${table.name} has no ${title} rows`);
    const { x, y } = grid.at(i);
    const deltas = numericColumn(part, "delta");
    const sx = linearScale(Math.min(...deltas), Math.max(...deltas), x, x + PANEL_W);
    const sy = linearScale(0, 1, y + PANEL_H, y);
    drawPanel(svg, { x, y, width: PANEL_W, height: PANEL_H, sx, sy }, title, "detuning", "probability");
    const entries: Array<[string, string, string]> = [];
    let c = 0;
    for (const [gamma, rows] of groupRows(part, "gamma")) {
      const color = PALETTE[c++ % PALETTE.length];
      const d = numericColumn(rows, "delta");
      svg.polyline(toPoints(d, numericColumn(rows, "p_cool"), sx, sy), color);
      svg.polyline(toPoints(d, numericColumn(rows, "p_reheat"), sx, sy), color, 1.5, "4,3");
      entries.push([`gamma = ${Number(gamma).toFixed(3)}`, color, ""]);
    }
    legend(svg, x + 6, y + 12, entries);
  });
  return svg.render();
}

function renderSphereScan(tables: Table[]): string {
  const [main, summary] = tables;
  const groups = groupRows(main, "sequence");
  const grid = panelGrid(groups.size, 3);
  const svg = new Svg(grid.width, grid.height);
  const stats = new Map<Cell, { mean: number; std: number; min: number }>();
  for (const row of summary.rows) {
    stats.set(cellOf(summary, row, "sequence"), {
      mean: Number(cellOf(summary, row, "mean")),
      std: Number(cellOf(summary, row, "std")),
      min: Number(cellOf(summary, row, "min")),
    });
  }
  let i = 0;
  for (const [seq, rows] of groups) {
    const { x, y } = grid.at(i++);
    // equirectangular projection: azimuth vs polar angle, one cell per point
    const sx = linearScale(-Math.PI, Math.PI, x, x + PANEL_W);
    const sy = linearScale(0, Math.PI, y, y + PANEL_H);
    const nx = numericColumn(rows, "nx");
    const ny = numericColumn(rows, "ny");
    const nz = numericColumn(rows, "nz");
    const p = numericColumn(rows, "p_final");
    const cellW = PANEL_W / Math.sqrt(rows.rows.length) / 1.2;
    for (let k = 0; k < p.length; k++) {
      const az = Math.atan2(ny[k], nx[k]);
      const pol = Math.acos(Math.min(Math.max(nz[k], -1), 1));
      svg.rect(sx(az) - cellW, sy(pol) - cellW, 2 * cellW, 2 * cellW, heatColor(p[k]));
    }
    svg.rect(x, y, PANEL_W, 2, "#ffffff");
    const st = stats.get(seq);
    if (!st) throw new TableError(`summary table has no row for sequence ${String(seq)}`);
    const label = `${String(seq)}  mean ${st.mean.toFixed(3)}  std ${st.std.toFixed(3)}  min ${st.min.toFixed(3)}`;
    svg.text(x + PANEL_W / 2, y - 6, label, 10, "middle");
    svg.text(x + PANEL_W / 2, y + PANEL_H + 16, "azimuth", 10, "middle", "#444444");
    svg.text(x - 34, y - 18, "polar angle", 10, "start", "#444444");
    svg.line(x, y, x, y + PANEL_H, "#444444");
    svg.line(x, y + PANEL_H, x + PANEL_W, y + PANEL_H, "#444444");
  }
  return svg.render();
}

function renderEnergySweep(tables: Table[]): string {
  const [table] = tables;
  const groups = groupRows(table, "j_over_b");
  const grid = panelGrid(groups.size, 3);
  const svg = new Svg(grid.width, grid.height);
  let i = 0;
  for (const [ratio, rows] of groups) {
    const { x, y } = grid.at(i++);
    const eps = numericColumn(rows, "eps");
    const de = numericColumn(rows, "delta_e");
    const [lo, hi] = extent(de);
    const sx = linearScale(Math.min(...eps), Math.max(...eps), x, x + PANEL_W);
    const sy = linearScale(Math.min(lo, 0), Math.max(hi, 0), y + PANEL_H, y);
    drawPanel(
      svg,
      { x, y, width: PANEL_W, height: PANEL_H, sx, sy },
      `J/B = ${ratio}`,
      "fridge energy",
      "energy change",
    );
    svg.line(x, sy(0), x + PANEL_W, sy(0), "#999999", 0.8);
    const star = Number(cellOf(rows, rows.rows[0], "eps_star"));
    svg.line(sx(star), y, sx(star), y + PANEL_H, "#333333", 1.0, "3,3");
    svg.polyline(toPoints(eps, de, sx, sy), PALETTE[0]);
    legend(svg, x + 6, y + 12, [["commutator estimate", "#333333", "3,3"]]);
  }
  return svg.render();
}

function renderBangBangTfim(tables: Table[]): string {
  const [traj, final] = tables;
  const phases = groupRows(traj, "j_over_b");
  const grid = panelGrid(phases.size + 1, 2);
  const svg = new Svg(grid.width, grid.height);
  let i = 0;
  for (const [ratio, rows] of phases) {
    const { x, y } = grid.at(i++);
    const steps = numericColumn(rows, "step");
    const sx = linearScale(0, Math.max(...steps), x, x + PANEL_W);
    const sy = linearScale(0, 1, y + PANEL_H, y);
    drawPanel(
      svg,
      { x, y, width: PANEL_W, height: PANEL_H, sx, sy },
      `J/B = ${ratio}`,
      "cooling step",
      "ground-manifold fidelity",
    );
    const entries: Array<[string, string, string]> = [];
    let c = 0;
    for (const [n, perSize] of groupRows(rows, "n")) {
      const color = PALETTE[c++ % PALETTE.length];
      for (const [tag, run] of groupRows(perSize, "initial_state")) {
        const dash = tag === "ground" ? "4,3" : "";
        svg.polyline(
          toPoints(numericColumn(run, "step"), numericColumn(run, "fidelity"), sx, sy),
          color,
          1.5,
          dash,
        );
      }
      entries.push([`N = ${n}`, color, ""]);
    }
    entries.push(["ground start", "#555555", "4,3"]);
    legend(svg, x + PANEL_W - 80, y + PANEL_H - 14 * entries.length, entries);
  }
  {
    const { x, y } = grid.at(i);
    const ns = numericColumn(final, "n");
    const sx = linearScale(Math.min(...ns) - 0.5, Math.max(...ns) + 0.5, x, x + PANEL_W);
    const sy = linearScale(0, 1, y + PANEL_H, y);
    drawPanel(
      svg,
      { x, y, width: PANEL_W, height: PANEL_H, sx, sy },
      "final fidelity",
      "chain length N",
      "ground-manifold fidelity",
    );
    let c = 0;
    const entries: Array<[string, string, string]> = [];
    for (const [ratio, rows] of groupRows(final, "j_over_b")) {
      const color = PALETTE[c++ % PALETTE.length];
      const pts = toPoints(numericColumn(rows, "n"), numericColumn(rows, "f_final"), sx, sy);
      svg.polyline(pts, color);
      for (const [px, py] of pts) svg.circle(px, py, 2.4, color);
      entries.push([`J/B = ${ratio}`, color, ""]);
    }
    legend(svg, x + 6, y + 12, entries);
  }
  return svg.render();
}

function renderLogSweep1p1(tables: Table[]): string {
  const [steps, final] = tables;
  const grid = panelGrid(1, 1);
  // widened canvas: the panel is 1.5x wide and the legend sits to its right
  const svg = new Svg(grid.width + PANEL_W, grid.height);
  const { x, y } = grid.at(0);
  const gaps = numericColumn(final, "delta_sys");
  const sx = linearScale(Math.min(...gaps), Math.max(...gaps), x, x + PANEL_W * 1.5);
  const sy = linearScale(0, 1.08, y + PANEL_H, y);
  drawPanel(
    svg,
    { x, y, width: PANEL_W * 1.5, height: PANEL_H, sx, sy },
    "sweep against an unknown gap",
    "system gap",
    "probability",
  );
  const entries: Array<[string, string, string]> = [];
  let c = 0;
  for (const [j, rows] of groupRows(steps, "j")) {
    const color = PALETTE[c++ % PALETTE.length];
    const d = numericColumn(rows, "delta_sys");
    svg.polyline(toPoints(d, numericColumn(rows, "p_cool_step"), sx, sy), color, 1.2, "4,3");
    svg.polyline(toPoints(d, numericColumn(rows, "p_reheat_step"), sx, sy), color, 1.2);
    // band tile eps_j +- linewidth_j drawn at the top of the panel
    const epsJ = Number(cellOf(rows, rows.rows[0], "eps_j"));
    const lw = Number(cellOf(rows, rows.rows[0], "linewidth_j"));
    const yBar = y + 8 + (c - 1) * 4;
    if (epsJ - lw < sx.max && epsJ + lw > sx.min) {
      svg.line(sx(Math.max(epsJ - lw, sx.min)), yBar, sx(Math.min(epsJ + lw, sx.max)), yBar, color, 2.5);
    }
    entries.push([`step ${j}`, color, ""]);
  }
  svg.polyline(toPoints(gaps, numericColumn(final, "p_final"), sx, sy), "#000000", 2.0, "6,3");
  entries.push(["sequential final", "#000000", "6,3"]);
  legend(svg, x + PANEL_W * 1.5 + 10, y + 12, entries);
  return svg.render();
}

function renderLogSweepTfim(tables: Table[]): string {
  const [table] = tables;
  const ns = numericColumn(table, "n");
  const ks = numericColumn(table, "k");
  // the K sweep lives at the size with the most distinct k values, and the
  // size sweep at the k with the most distinct sizes
  const kCount = new Map<number, Set<number>>();
  const nCount = new Map<number, Set<number>>();
  for (let i = 0; i < ns.length; i++) {
    if (!kCount.has(ns[i])) kCount.set(ns[i], new Set());
    kCount.get(ns[i])!.add(ks[i]);
    if (!nCount.has(ks[i])) nCount.set(ks[i], new Set());
    nCount.get(ks[i])!.add(ns[i]);
  }
  const nFixed = [...kCount.entries()].sort((a, b) => b[1].size - a[1].size || a[0] - b[0])[0][0];
  const kFixed = [...nCount.entries()].sort((a, b) => b[1].size - a[1].size || a[0] - b[0])[0][0];

  const grid = panelGrid(2, 2);
  const svg = new Svg(grid.width, grid.height);
  {
    const { x, y } = grid.at(0);
    const part = filterRows(table, (r) => cellOf(table, r, "n") === nFixed);
    const kVals = numericColumn(part, "k");
    const err = numericColumn(part, "one_minus_f").map((v) => Math.max(v, 1e-6));
    const sx = logScale(Math.min(...kVals), Math.max(...kVals), x, x + PANEL_W);
    const sy = logScale(Math.min(...err) / 1.5, 1, y + PANEL_H, y);
    drawPanel(
      svg,
      { x, y, width: PANEL_W, height: PANEL_H, sx, sy },
      `error vs sweep count (N = ${nFixed})`,
      "gradation number K",
      "1 - F",
    );
    let c = 0;
    const entries: Array<[string, string, string]> = [];
    for (const [phase, rows] of groupRows(part, "phase")) {
      const color = PALETTE[c++ % PALETTE.length];
      const pts = toPoints(
        numericColumn(rows, "k"),
        numericColumn(rows, "one_minus_f").map((v) => Math.max(v, 1e-6)),
        sx,
        sy,
      );
      svg.polyline(pts, color);
      for (const [px, py] of pts) svg.circle(px, py, 2.4, color);
      entries.push([String(phase), color, ""]);
    }
    legend(svg, x + 6, y + PANEL_H - 14 * entries.length, entries);
  }
  {
    const { x, y } = grid.at(1);
    const part = filterRows(table, (r) => cellOf(table, r, "k") === kFixed);
    const nVals = numericColumn(part, "n");
    const sx = linearScale(Math.min(...nVals) - 0.5, Math.max(...nVals) + 0.5, x, x + PANEL_W);
    const sy = linearScale(0, 1, y + PANEL_H, y);
    drawPanel(
      svg,
      { x, y, width: PANEL_W, height: PANEL_H, sx, sy },
      `fidelity vs size (K = ${kFixed})`,
      "chain length N",
      "fidelity",
    );
    let c = 0;
    const entries: Array<[string, string, string]> = [];
    for (const [phase, rows] of groupRows(part, "phase")) {
      const color = PALETTE[c++ % PALETTE.length];
      const pts = toPoints(numericColumn(rows, "n"), numericColumn(rows, "f_final"), sx, sy);
      svg.polyline(pts, color);
      for (const [px, py] of pts) svg.circle(px, py, 2.4, color);
      entries.push([String(phase), color, ""]);
    }
    legend(svg, x + 6, y + 12, entries);
  }
  return svg.render();
}

export const FIGURES: Record<string, FigureSpec> = {
  "trotter-curves": {
    id: "trotter-curves",
    tables: ["trotter-curves"],
    columns: { "trotter-curves": ["m", "t", "p_cool", "p_reheat", "p_reheat_exact"] },
    render: renderTrotterCurves,
  },
  "detuning-curves": {
    id: "detuning-curves",
    tables: ["detuning-curves"],
    columns: { "detuning-curves": ["mode", "gamma", "delta", "p_cool", "p_reheat"] },
    render: (tables) => renderDetuningCurves(tables),
  },
  "sphere-scan": {
    id: "sphere-scan",
    tables: ["sphere-scan", "sphere-scan-summary"],
    columns: {
      "sphere-scan": ["sequence", "nx", "ny", "nz", "p_final"],
      "sphere-scan-summary": ["sequence", "mean", "std", "min"],
    },
    render: (tables) => renderSphereScan(tables),
  },
  "energy-sweep": {
    id: "energy-sweep",
    tables: ["energy-sweep"],
    columns: { "energy-sweep": ["j_over_b", "eps", "delta_e", "eps_star"] },
    render: (tables) => renderEnergySweep(tables),
  },
  "bangbang-tfim": {
    id: "bangbang-tfim",
    tables: ["bangbang-tfim-trajectories", "bangbang-tfim-final"],
    columns: {
      "bangbang-tfim-trajectories": [
        "n",
        "j_over_b",
        "initial_state",
        "step",
        "fidelity",
        "energy",
        "entropy",
      ],
      "bangbang-tfim-final": ["n", "j_over_b", "f_final"],
    },
    render: (tables) => renderBangBangTfim(tables),
  },
  "logsweep-1p1": {
    id: "logsweep-1p1",
    tables: ["logsweep-1p1-steps", "logsweep-1p1-final"],
    columns: {
      "logsweep-1p1-steps": [
        "j",
        "eps_j",
        "linewidth_j",
        "gamma_j",
        "trotter_m",
        "delta_sys",
        "p_cool_step",
        "p_reheat_step",
      ],
      "logsweep-1p1-final": ["delta_sys", "p_final"],
    },
    render: (tables) => renderLogSweep1p1(tables),
  },
  "logsweep-tfim": {
    id: "logsweep-tfim",
    tables: ["logsweep-tfim"],
    columns: { "logsweep-tfim": ["phase", "n", "k", "f_final", "one_minus_f"] },
    render: (tables) => renderLogSweepTfim(tables),
  },
};

export function renderFigure(
  spec: FigureSpec,
  tables: Table[],
  meta: Record<string, unknown>,
): string {
  tables.forEach((t) => requireColumns(t, spec.columns[t.name] ?? []));
  return spec.render(tables, meta);
}
