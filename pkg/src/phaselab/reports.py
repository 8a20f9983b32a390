"""JSON and CSV emission for lab reports.

JSON layout (schema 1)::

    {"schema": 1, "command": str, "config": {...}, "rows": [{...}, ...], "pass": bool}

CSV carries the rows only, with a header line; columns are the row keys in
first-seen order. Output is byte-stable: keys keep insertion order, floats
use ``repr`` and no timestamps or timings are recorded.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "PHASELAB_OUTPUT_DIR"


def _clean(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if hasattr(value, "item"):  # numpy scalars
        return _clean(value.item())
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    return value


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = True

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "config": _clean(self.config),
            "rows": [_clean(r) for r in self.rows],
            "pass": bool(self.passed),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self):
        columns = []
        for row in self.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in self.rows:
            writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
        return buf.getvalue()

    def render(self, fmt):
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


def _csv_cell(value):
    value = _clean(value)
    if isinstance(value, list):
        return json.dumps(value)
    if isinstance(value, float):
        return repr(value)
    return value


def default_path(command, fmt, output=None):
    """Explicit ``output`` wins; otherwise ``$PHASELAB_OUTPUT_DIR`` or the cwd."""
    if output:
        return output
    directory = os.environ.get(OUTPUT_DIR_ENV) or "."
    return os.path.join(directory, f"{command}.{fmt}")


def write(report, fmt, path):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(report.render(fmt))
    return path
