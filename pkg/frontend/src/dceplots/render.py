"""CSV loading and deterministic figure rendering.

The renderer is a pure function of the CSV contents: matplotlib is used
with the Agg backend, the SVG hash salt is pinned, and embedded timestamps
are suppressed, so re-rendering the same CSVs produces byte-identical
vector output.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .figures import FigureSpec  # noqa: E402


class RenderError(Exception):
    """A figure could not be rendered from the given CSVs."""


class MissingColumnError(RenderError):
    """A required column is absent from a CSV header."""

    def __init__(self, column: str, path: Path):
        self.column = column
        self.path = Path(path)
        super().__init__(f"column {column!r} not found in {self.path}")


def load_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Read a CSV into a dict of float columns keyed by header name.

    Raises RenderError for a missing file, a file with no header, or a
    header-only file with no data rows (an empty plot is never produced).
    Non-numeric cells (e.g. empty error fields) become nan.
    """
    path = Path(path)
    if not path.is_file():
        raise RenderError(f"input CSV not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RenderError(f"empty CSV (no header): {path}") from None
        rows = [row for row in reader if row]
    if not rows:
        raise RenderError(f"CSV has no data rows: {path}")

    def cell(value: str) -> float:
        try:
            return float(value)
        except ValueError:
            return float("nan")

    columns = {}
    for j, name in enumerate(header):
        columns[name] = np.array(
            [cell(row[j]) if j < len(row) else float("nan") for row in rows]
        )
    return columns


def _load_inputs(spec: FigureSpec, in_dir: Path) -> dict[str, dict[str, np.ndarray]]:
    tables = {}
    for key, filename in spec.inputs.items():
        path = in_dir / filename
        table = load_csv(path)
        for column in sorted(spec.columns_used(key)):
            if column not in table:
                raise MissingColumnError(column, path)
        tables[key] = table
    return tables


def render(spec: FigureSpec, in_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Render one preset figure to PNG and SVG; return the written paths."""
    in_dir = Path(in_dir)
    out_dir = Path(out_dir)
    tables = _load_inputs(spec, in_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    n_panels = len(spec.panels)
    ncols = min(spec.ncols, n_panels)
    nrows = -(-n_panels // ncols)
    with plt.rc_context({"svg.hashsalt": "dceplots", "figure.dpi": 100}):
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows), squeeze=False
        )
        flat = axes.ravel()
        for ax in flat[n_panels:]:
            ax.set_visible(False)
        for ax, panel in zip(flat, spec.panels):
            for s in panel.series:
                x = tables[s.table][s.x]
                y = tables[s.table][s.y]
                if s.abs_value:
                    y = np.abs(y)
                ax.plot(x, y, s.fmt, label=s.label, markevery=s.markevery,
                        markersize=4)
            ax.set_xlabel(panel.xlabel)
            ax.set_ylabel(panel.ylabel)
            ax.set_yscale(panel.yscale)
            if panel.title:
                ax.set_title(panel.title)
            ax.legend(fontsize=7)
        fig.suptitle(spec.name)
        fig.tight_layout()

        written = []
        for ext in ("png", "svg"):
            out_path = out_dir / f"{spec.name}.{ext}"
            metadata = {"Date": None} if ext == "svg" else {}
            fig.savefig(out_path, metadata=metadata)
            written.append(out_path)
        plt.close(fig)
    return written
