"""Tabular output for the command line: CSV and JSON writers with unit conversion.

Values are computed in atomic units; conversion to SI or Gaussian units
happens only here, at the output boundary.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, TextIO

from ..errors import ConfigurationError

# CODATA 2018 atomic units
HARTREE_J = 4.3597447222071e-18
BOHR_M = 5.29177210903e-11
ATOMIC_TIME_S = 2.4188843265857e-17

# (SI factor, SI label, Gaussian factor, Gaussian label, atomic label)
UNIT_TABLE: Dict[str, tuple] = {
    "energy": (HARTREE_J, "J", HARTREE_J * 1e7, "erg", "hartree"),
    "length": (BOHR_M, "m", BOHR_M * 1e2, "cm", "bohr"),
    "area": (BOHR_M ** 2, "m2", (BOHR_M * 1e2) ** 2, "cm2", "bohr2"),
    "time": (ATOMIC_TIME_S, "s", ATOMIC_TIME_S, "s", "au"),
    "frequency": (1.0 / ATOMIC_TIME_S, "rad_per_s", 1.0 / ATOMIC_TIME_S, "rad_per_s", "au"),
}


def convert(value: float, kind: str, units: str) -> float:
    """Convert an atomic-unit value of the given kind to the requested system."""
    if kind not in UNIT_TABLE or units == "atomic":
        return value
    si, _, gaussian, _, _ = UNIT_TABLE[kind]
    if units == "si":
        return value * si
    if units == "gaussian":
        return value * gaussian
    raise ConfigurationError(f"unknown unit system {units!r}")


def unit_label(kind: str, units: str) -> str:
    if kind not in UNIT_TABLE:
        return ""
    _, si, _, gaussian, atomic = UNIT_TABLE[kind]
    return {"atomic": atomic, "si": si, "gaussian": gaussian}[units]


@dataclass(frozen=True)
class Column:
    """Output column; ``kind`` selects the unit conversion ("" for dimensionless)."""

    name: str
    kind: str = ""

    def header(self, units: str) -> str:
        label = unit_label(self.kind, units)
        return f"{self.name}_{label}" if label else self.name


@dataclass
class Table:
    """Named rows of values under typed columns."""

    title: str
    columns: List[Column]
    rows: List[List[Any]] = field(default_factory=list)

    def add_row(self, *values: Any):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def converted_rows(self, units: str) -> List[List[Any]]:
        out = []
        for row in self.rows:
            out.append([
                convert(v, c.kind, units) if isinstance(v, float) else v
                for v, c in zip(row, self.columns)
            ])
        return out

    def column_values(self, name: str) -> List[Any]:
        index = [c.name for c in self.columns].index(name)
        return [row[index] for row in self.rows]


def format_value(value: Any) -> str:
    """Locale-independent text for a table cell; floats keep 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def write_csv(table: Table, stream: TextIO, units: str = "atomic"):
    """Header row followed by one line per row."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([c.header(units) for c in table.columns])
    for row in table.converted_rows(units):
        writer.writerow([format_value(v) for v in row])


def write_json(table: Table, stream: TextIO, units: str = "atomic"):
    """One JSON object with the title, the units and a list of row objects.

    Python's float repr is the shortest exact representation, so the values
    re-parse to the same doubles.
    """
    headers = [c.header(units) for c in table.columns]
    payload = {
        "title": table.title,
        "units": units,
        "columns": headers,
        "rows": [
            {h: _json_value(v) for h, v in zip(headers, row)}
            for row in table.converted_rows(units)
        ],
    }
    stream.write(json.dumps(payload, indent=2))
    stream.write("\n")


WRITERS = {"csv": write_csv, "json": write_json}


def write_table(table: Table, stream: TextIO, fmt: str = "csv", units: str = "atomic"):
    if fmt not in WRITERS:
        raise ConfigurationError(f"unknown output format {fmt!r}")
    WRITERS[fmt](table, stream, units)


def write_tables(tables: Sequence[Table], stream: TextIO, fmt: str = "csv", units: str = "atomic"):
    """Several tables; CSV blocks are separated by a blank line."""
    for i, table in enumerate(tables):
        if i and fmt == "csv":
            stream.write("\n")
        write_table(table, stream, fmt, units)
