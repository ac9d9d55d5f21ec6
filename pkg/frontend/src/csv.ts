/** RFC 4180 CSV parsing into typed tables (numbers where they parse). */

export type Cell = string | number;

export interface Table {
  name: string;
  columns: string[];
  rows: Cell[][];
}

export class TableError extends Error {}

function splitLine(line: string): string[] {
  const out: string[] = [];
  let cur = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          cur += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      out.push(cur);
      cur = "";
    } else {
      cur += ch;
    }
  }
  out.push(cur);
  return out;
}

function parseCell(text: string): Cell {
  if (text === "") return "";
  const num = Number(text);
  return Number.isNaN(num) ? text : num;
}

export function parseCsv(name: string, text: string): Table {
  const lines = text.split(/\r\n|\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new TableError(`table ${name} is empty`);
  }
  const columns = splitLine(lines[0]);
  const rows = lines.slice(1).map((ln) => {
    const cells = splitLine(ln).map(parseCell);
    if (cells.length !== columns.length) {
      throw new TableError(
        `table ${name}: row of width ${cells.length} does not match header (${columns.length})`,
      );
    }
    return cells;
  });
  if (rows.length === 0) {
    throw new TableError(`table ${name} has a header but no rows`);
  }
  return { name, columns, rows };
}

/** Column values by name; a missing column is a named error. */
export function column(table: Table, name: string): Cell[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new TableError(`table ${table.name} has no column ${JSON.stringify(name)}`);
  }
  return table.rows.map((row) => row[idx]);
}

export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((v, i) => {
    if (typeof v !== "number") {
      throw new TableError(
        `table ${table.name} column ${name}: row ${i} holds ${JSON.stringify(v)}, not a number`,
      );
    }
    return v;
  });
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    column(table, name);
  }
}

/** Unique values in first-appearance order (stable across reruns). */
export function distinct(values: Cell[]): Cell[] {
  const seen = new Set<Cell>();
  const out: Cell[] = [];
  for (const v of values) {
    if (!seen.has(v)) {
      seen.add(v);
      out.push(v);
    }
  }
  return out;
}

export function filterRows(table: Table, pred: (row: Cell[]) => boolean): Table {
  return { name: table.name, columns: table.columns, rows: table.rows.filter(pred) };
}

export function cellOf(table: Table, row: Cell[], name: string): Cell {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new TableError(`table ${table.name} has no column ${JSON.stringify(name)}`);
  }
  return row[idx];
}
