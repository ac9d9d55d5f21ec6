"""Result tables and their on-disk form: RFC-4180 CSV plus a JSON sidecar.

Rows are written with shortest round-trip float formatting so reruns of a
deterministic experiment produce byte-identical CSV files; timestamps live
only in the metadata sidecar.
"""
from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

SCHEMA_VERSION = 1


@dataclass
class ResultTable:
    name: str
    columns: list[str]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row of width {len(row)} does not match {len(self.columns)} columns"
                )

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _format_cell(value) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean cells are not part of any table schema")
    if isinstance(value, str):
        if any(ch in value for ch in (",", '"', "\n", "\r")):
            return '"' + value.replace('"', '""') + '"'
        return value
    if isinstance(value, numbers.Integral):
        return str(int(value))
    return repr(float(value))


def write_csv(table: ResultTable, out_dir: Path) -> Path:
    path = Path(out_dir) / f"{table.name}.csv"
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    data = ("\r\n".join(lines) + "\r\n").encode("utf-8")
    path.write_bytes(data)
    return path


def write_meta(table: ResultTable, out_dir: Path, config: dict, version: str) -> Path:
    path = Path(out_dir) / f"{table.name}.meta.json"
    payload = {
        "schema_version": SCHEMA_VERSION,
        "table": table.name,
        "columns": table.columns,
        "config": config,
        "code_version": version,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    payload.update(table.meta)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_csv(path: Path) -> ResultTable:
    """Minimal reader for round-trip tests; parses numbers where possible."""
    text = Path(path).read_bytes().decode("utf-8")
    lines = [ln for ln in text.split("\r\n") if ln != ""]
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = []
        for cell in _split_csv_line(ln):
            try:
                num = float(cell)
                cells.append(int(num) if num.is_integer() and "." not in cell and "e" not in cell else num)
            except ValueError:
                cells.append(cell)
        rows.append(tuple(cells))
    return ResultTable(name=Path(path).stem, columns=columns, rows=rows)


def _split_csv_line(line: str) -> list[str]:
    out, cur, quoted = [], [], False
    i = 0
    while i < len(line):
        ch = line[i]
        if quoted:
            if ch == '"':
                if i + 1 < len(line) and line[i + 1] == '"':
                    cur.append('"')
                    i += 1
                else:
                    quoted = False
            else:
                cur.append(ch)
        elif ch == '"':
            quoted = True
        elif ch == ",":
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    out.append("".join(cur))
    return out
