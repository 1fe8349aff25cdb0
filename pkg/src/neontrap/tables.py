"""Deterministic result tables with explicit units.

CSV dialect: comma separated, one `name[unit]` header row, LF endings,
floats printed with 9 significant digits so identical configurations give
byte-identical files.  JSON mirrors the CSV schema under a metadata object.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

FLOAT_FMT = "{:.8e}"  # 9 significant digits

_HEADER_RE = re.compile(r"^(?P<name>[^\[\]]+)\[(?P<unit>[^\[\]]*)\]$")


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return FLOAT_FMT.format(v)
    return str(v)


def parse_quantity(text: str, expected_unit: str | None):
    """Parse a "value unit" pair; emit_quantity round-trips it losslessly.

    Dimensionless quantities (expected_unit None) must be bare numbers.
    "inf" is accepted for lengths (bulk sentinel).
    """
    parts = text.strip().split()
    if expected_unit is None:
        if len(parts) != 1:
            raise ValueError(f"expected a bare number, got {text!r}")
        return float(parts[0])
    if len(parts) == 1 and parts[0] == "inf":
        return math.inf
    if len(parts) != 2:
        raise ValueError(f"expected '<value> {expected_unit}', got {text!r}")
    value, unit = parts
    if unit != expected_unit:
        raise ValueError(f"expected unit {expected_unit!r}, got {unit!r} in {text!r}")
    return float(value)


def emit_quantity(value: float, unit: str | None) -> str:
    if unit is None:
        return format_value(float(value))
    if math.isinf(value):
        return "inf"
    return f"{format_value(float(value))} {unit}"


@dataclass
class ResultTable:
    """Column-schema'd table of numbers with serialization metadata."""

    columns: list  # list of (name, unit) pairs; unit "" for unitless/text
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add_row(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        idx = [c[0] for c in self.columns].index(name)
        return [row[idx] for row in self.rows]

    def to_csv(self) -> str:
        lines = [f"# {k}={v}" for k, v in sorted(self.metadata.items())]
        lines.append(",".join(f"{name}[{unit}]" for name, unit in self.columns))
        for row in self.rows:
            lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def norm(v):
            if isinstance(v, float):
                if math.isnan(v):
                    return None
                return float(FLOAT_FMT.format(v))
            return v
        doc = {
            "metadata": {k: self.metadata[k] for k in sorted(self.metadata)},
            "columns": [{"name": n, "unit": u} for n, u in self.columns],
            "rows": [[norm(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=2) + "\n"

    def write(self, path, fmt: str = "csv"):
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", newline="\n") as fh:
            fh.write(text)

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        metadata = {}
        columns = None
        rows = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                metadata[key] = value
                continue
            cells = line.split(",")
            if columns is None:
                columns = []
                for cell in cells:
                    m = _HEADER_RE.match(cell)
                    if not m:
                        raise ValueError(f"malformed column header {cell!r}")
                    columns.append((m.group("name"), m.group("unit")))
                continue
            parsed = []
            for cell in cells:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    parsed.append(cell)
            rows.append(tuple(parsed))
        if columns is None:
            raise ValueError("no header row found")
        return cls(columns=columns, rows=rows, metadata=metadata)
