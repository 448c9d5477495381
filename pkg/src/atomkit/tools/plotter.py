"""Static figure export using Matplotlib."""

import logging
import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")  # Non-interactive backend
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .tables import Table  # noqa: E402

logger = logging.getLogger(__name__)


def _numeric(values: Sequence) -> bool:
    return all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool)
               for v in values)


def plot_table(
    table: Table,
    path: str,
    x: Optional[str] = None,
    y: Optional[Sequence[str]] = None,
    units: str = "atomic",
) -> str:
    """
    Save a line plot of a table as PNG.

    Args:
        table: Table to draw
        path: Output file path
        x: Column for the horizontal axis (default: first column)
        y: Columns to draw (default: every other numeric column)
        units: Unit system used for axis labels and values

    Returns:
        Path of the saved figure
    """
    names = [c.name for c in table.columns]
    headers = {c.name: c.header(units) for c in table.columns}
    x = x or names[0]
    rows = table.converted_rows(units)
    columns = {name: [row[i] for row in rows] for i, name in enumerate(names)}
    if not _numeric(columns[x]):
        raise ValueError(f"column {x!r} is not numeric")
    y = list(y) if y else [n for n in names if n != x and _numeric(columns[n])]
    if not y:
        raise ValueError("table has no numeric column to plot")

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    plt.close("all")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in y:
        ax.plot(columns[x], columns[name], marker="o", markersize=3, label=headers[name])
    ax.set_xlabel(headers[x])
    ax.set_title(table.title)
    ax.grid(True, alpha=0.3)
    if len(y) > 1:
        ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight", facecolor="white", edgecolor="none")
    plt.close(fig)
    logger.info("Plot saved successfully: %s", path)
    return path


def plot_spectrum(
    path: str,
    lines: Sequence[float] = (),
    omega: Optional[np.ndarray] = None,
    power: Optional[np.ndarray] = None,
    title: str = "Power spectrum",
    xlabel: str = "omega (a.u.)",
) -> str:
    """
    Save a spectrum as PNG.

    With ``omega`` and ``power`` the curve is drawn on a log scale and
    ``lines`` are marked on it; without them ``lines`` are drawn as sticks.

    Args:
        path: Output file path
        lines: Level energies or line frequencies to mark
        omega: Frequency grid of a sampled power spectrum
        power: Power on ``omega``
        title: Figure title
        xlabel: Horizontal axis label

    Returns:
        Path of the saved figure
    """
    if (omega is None) != (power is None):
        raise ValueError("omega and power must be given together")
    finite = [w for w in lines if np.isfinite(w)]
    if power is None and not finite:
        raise ValueError("spectrum has nothing to plot")

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    plt.close("all")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if power is not None:
        ax.semilogy(omega, power, linewidth=0.8)
        for w in finite:
            ax.axvline(w, color="tab:red", linestyle="--", linewidth=0.6)
        ax.set_ylabel("power")
    else:
        ax.vlines(finite, 0.0, 1.0, color="tab:blue", linewidth=1.0)
        ax.set_ylim(0.0, 1.1)
        ax.set_yticks([])
    ax.set_xlabel(xlabel)
    ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight", facecolor="white", edgecolor="none")
    plt.close(fig)
    logger.info("Plot saved successfully: %s", path)
    return path
