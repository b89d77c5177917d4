"""Machine-readable result tables with lossless CSV/JSON round-tripping.

Numbers are written in full round-trip precision (`repr`); infeasible
cells are the literal token ``NA`` in CSV and ``null`` in JSON.  The CSV
flavor carries the schema version, the command echo and any warnings as
leading ``#`` comment lines so both formats hold the same information.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

Cell = float | int | str | None


@dataclass
class Dataset:
    command: str
    columns: list[str]
    rows: list[list[Cell]]
    warnings: list[str] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")


def _format_cell(value: Cell) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(ds: Dataset) -> str:
    lines = [f"# schema={ds.schema_version}", f"# command={ds.command}"]
    lines.extend(f"# warning={w}" for w in ds.warnings)
    lines.append(",".join(ds.columns))
    for row in ds.rows:
        lines.append(",".join(_format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def to_json(ds: Dataset) -> str:
    payload = {
        "schema_version": ds.schema_version,
        "command": ds.command,
        "warnings": ds.warnings,
        "columns": ds.columns,
        "rows": ds.rows,
    }
    return json.dumps(payload, indent=1) + "\n"


def _parse_cell(text: str) -> Cell:
    if text == "NA":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def from_csv(text: str) -> Dataset:
    schema = SCHEMA_VERSION
    command = ""
    warnings: list[str] = []
    columns: list[str] | None = None
    rows: list[list[Cell]] = []
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("schema="):
                schema = int(body[len("schema="):])
            elif body.startswith("command="):
                command = body[len("command="):]
            elif body.startswith("warning="):
                warnings.append(body[len("warning="):])
            continue
        if columns is None:
            columns = line.split(",")
        else:
            rows.append([_parse_cell(c) for c in line.split(",")])
    if columns is None:
        raise ValueError("CSV input carries no header row")
    return Dataset(command=command, columns=columns, rows=rows, warnings=warnings, schema_version=schema)


def from_json(text: str) -> Dataset:
    payload = json.loads(text)
    return Dataset(
        command=payload["command"],
        columns=list(payload["columns"]),
        rows=[list(r) for r in payload["rows"]],
        warnings=list(payload.get("warnings", [])),
        schema_version=int(payload["schema_version"]),
    )
