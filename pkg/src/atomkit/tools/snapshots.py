"""Field snapshot export: CSV samples, or raw little-endian float64 with a JSON header."""

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, TextIO, Tuple

import numpy as np

from ..fields import SpectralGrid
from .tables import format_value

RAW_DTYPE = "<f8"


@dataclass(frozen=True)
class FieldSnapshot:
    """Real field components on a grid at one instant."""

    grid: SpectralGrid
    t: float
    components: Dict[str, np.ndarray]

    def __post_init__(self):
        for name, values in self.components.items():
            if np.shape(values) != self.grid.shape:
                raise ValueError(f"component {name!r} has shape {np.shape(values)}, "
                                 f"expected {self.grid.shape}")
            if np.iscomplexobj(values):
                raise ValueError(f"component {name!r} must be real")

    def header(self) -> dict:
        return {
            "dims": self.grid.dims,
            "N": self.grid.N,
            "L": self.grid.L,
            "t": self.t,
            "components": list(self.components),
            "dtype": RAW_DTYPE,
            "order": "C",
        }


def vector_components(prefix: str, vector: np.ndarray) -> Dict[str, np.ndarray]:
    """Split a (3, ...) array into named components prefix_x, prefix_y, prefix_z."""
    return {f"{prefix}_{axis}": np.asarray(vector[i], dtype=float) for i, axis in enumerate("xyz")}


def write_snapshot_csv(snapshot: FieldSnapshot, stream: TextIO):
    """One row per grid point: coordinates followed by every component."""
    grid = snapshot.grid
    coordinate_names = ["x", "y", "z"][: grid.dims]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(coordinate_names + list(snapshot.components))
    coordinates = [c.ravel() for c in grid.coordinates]
    values = [np.asarray(v).ravel() for v in snapshot.components.values()]
    for i in range(coordinates[0].size):
        writer.writerow([format_value(float(c[i])) for c in coordinates + values])


def write_snapshot_raw(snapshot: FieldSnapshot, base: Path) -> Tuple[Path, Path]:
    """Write base.json (header) and base.bin (components stacked in header order)."""
    base = Path(base)
    base.parent.mkdir(parents=True, exist_ok=True)
    header_path = base.with_suffix(".json")
    data_path = base.with_suffix(".bin")
    header_path.write_text(json.dumps(snapshot.header(), indent=2), encoding="utf-8")
    stacked = np.stack([np.asarray(v, dtype=float) for v in snapshot.components.values()])
    stacked.astype(RAW_DTYPE).tofile(data_path)
    return header_path, data_path


def read_snapshot_raw(base: Path) -> FieldSnapshot:
    """Inverse of write_snapshot_raw."""
    base = Path(base)
    header = json.loads(base.with_suffix(".json").read_text(encoding="utf-8"))
    grid = SpectralGrid(dims=header["dims"], L=header["L"], N=header["N"])
    data = np.fromfile(base.with_suffix(".bin"), dtype=header["dtype"])
    data = data.reshape((len(header["components"]),) + grid.shape)
    components = {name: data[i].astype(float) for i, name in enumerate(header["components"])}
    return FieldSnapshot(grid=grid, t=header["t"], components=components)
