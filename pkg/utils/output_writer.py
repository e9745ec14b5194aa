"""
Output Writer - CSV files with lossless float64 formatting.
"""

import csv
import logging
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.sparse as sp

from utils.errors import ValidationError


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def fmt(value) -> str:
    """17 significant digits, '.' separator; None renders as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _open(path: PathLike):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", newline="")
    except OSError as exc:
        raise ValidationError(
            f"cannot write {path}: {exc}", module="cli", operation="write_output"
        ) from exc


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with _open(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    logger.debug(f"Wrote {path}")
    return Path(path)


def write_matrix_csv(path: PathLike, matrix) -> Path:
    """Nonzero entries as (row, col, value)."""
    coo = sp.coo_matrix(matrix)
    order = np.lexsort((coo.col, coo.row))
    rows = zip(coo.row[order], coo.col[order], coo.data[order])
    return write_rows(path, ("row", "col", "value"), rows)


def write_eigenvalues_csv(path: PathLike, eigenvalues: np.ndarray) -> Path:
    """One eigenvalue per line; complex values get a second column."""
    values = np.asarray(eigenvalues)
    if np.iscomplexobj(values) and np.any(values.imag != 0):
        return write_rows(path, ("real", "imag"), zip(values.real, values.imag))
    return write_rows(path, ("eigenvalue",), ((v,) for v in np.real(values)))


def write_grid_csv(path: PathLike, grid, dump: str = "points") -> Path:
    """Every point set in [panel, j, i] order: positions (points) or J and Q (metric)."""
    if dump not in ("points", "metric"):
        raise ValidationError(
            f"unknown grid dump '{dump}'", module="cli", operation="grid"
        )

    def rows():
        for pointset, points in sorted(grid.points.items()):
            nb, ny, nx = grid.shape(pointset)
            panel, j, i = np.meshgrid(np.arange(nb), np.arange(ny), np.arange(nx), indexing="ij")
            if dump == "points":
                values = [points.xyz[..., k].ravel() for k in range(3)]
            else:
                values = [points.J.ravel(), points.Q11.ravel(), points.Q12.ravel(), points.Q22.ravel()]
            tag = np.full(panel.size, pointset.name)
            yield from zip(panel.ravel(), i.ravel(), j.ravel(), tag, *values)

    tail = ("x", "y", "z") if dump == "points" else ("J", "Q11", "Q12", "Q22")
    return write_rows(path, ("panel", "i", "j", "pointset") + tail, rows())


def write_diagnostics_csv(path: PathLike, series: Sequence) -> Path:
    return write_rows(
        path,
        ("t_seconds", "mass", "energy", "tangential_jump"),
        ((d.t, d.mass, d.energy, d.tangential_jump) for d in series),
    )


def write_rates_csv(path: PathLike, result) -> Path:
    return write_rows(path, ("Nc", "l2", "linf", "rate_l2", "rate_linf"), result.as_rows())
