/** qdcool-plot --fig <id> --in <dir> --out <dir>
 *
 * Reads an experiment's CSV tables (and metadata sidecar, when the figure
 * needs config values) from the input directory and writes one SVG image
 * per figure id.  Inputs are never modified; rerendering the same inputs
 * produces byte-identical output.
 */

import { readFileSync, writeFileSync, mkdirSync, existsSync } from "node:fs";
import { join } from "node:path";
import { parseCsv, Table, TableError } from "./csv.js";
import { FIGURES, renderFigure } from "./figures.js";

function parseArgs(argv: string[]): { fig: string; inDir: string; outDir: string } {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      throw new UsageError(`unexpected argument ${JSON.stringify(key ?? "")}`);
    }
    args.set(key.slice(2), value);
  }
  const fig = args.get("fig");
  const inDir = args.get("in");
  const outDir = args.get("out");
  if (!fig || !inDir || !outDir) {
    throw new UsageError("required: --fig <id> --in <dir> --out <dir>");
  }
  for (const key of args.keys()) {
    if (!["fig", "in", "out"].includes(key)) {
      throw new UsageError(`unknown flag --${key}`);
    }
  }
  return { fig, inDir, outDir };
}

class UsageError extends Error {}

function usage(): string {
  const ids = Object.keys(FIGURES).join(" | ");
  return `usage: qdcool-plot --fig <id> --in <dir> --out <dir>\n  figure ids: ${ids}`;
}

export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    console.error(usage());
    return 2;
  }
  const spec = FIGURES[parsed.fig];
  if (!spec) {
    console.error(`unknown figure id ${JSON.stringify(parsed.fig)}`);
    console.error(usage());
    return 2;
  }
  try {
    const tables: Table[] = spec.tables.map((stem) => {
      const path = join(parsed.inDir, `${stem}.csv`);
      if (!existsSync(path)) throw new TableError(`input table not found: ${path}`);
      return parseCsv(stem, readFileSync(path, "utf-8"));
    });
    let meta: Record<string, unknown> = {};
    const metaPath = join(parsed.inDir, `${spec.tables[0]}.meta.json`);
    if (existsSync(metaPath)) {
      meta = JSON.parse(readFileSync(metaPath, "utf-8")) as Record<string, unknown>;
    }
    const svg = renderFigure(spec, tables, meta);
    mkdirSync(parsed.outDir, { recursive: true });
    const outPath = join(parsed.outDir, `${spec.id}.svg`);
    writeFileSync(outPath, svg, "utf-8");
    console.log(`wrote ${outPath}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(run(process.argv.slice(2)));
}
