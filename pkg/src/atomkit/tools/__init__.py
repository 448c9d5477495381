"""Output tools: tables, figures and field snapshots."""

from .plotter import plot_spectrum, plot_table
from .snapshots import FieldSnapshot, read_snapshot_raw, write_snapshot_csv, write_snapshot_raw
from .tables import Column, Table, convert, write_table, write_tables

__all__ = [
    "Column",
    "Table",
    "convert",
    "write_table",
    "write_tables",
    "plot_table",
    "plot_spectrum",
    "FieldSnapshot",
    "write_snapshot_csv",
    "write_snapshot_raw",
    "read_snapshot_raw",
]
