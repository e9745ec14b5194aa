"""Snapshot - Binary field dumps.

Layout (little-endian): magic ``SBPF``, version u32, Nc u32, point set u8,
panel count u8, then float64 values in [panel, j, i] order.
"""

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from grid.cubed_sphere import PointSet
from utils.errors import ValidationError


MAGIC = b"SBPF"
VERSION = 1
HEADER = struct.Struct("<4sIIBB")


@dataclass(frozen=True)
class Snapshot:
    Nc: int
    pointset: PointSet
    values: np.ndarray


def _expected_shape(Nc: int, pointset: PointSet, nb: int):
    return {
        PointSet.H: (nb, Nc + 1, Nc + 1),
        PointSet.X1: (nb, Nc + 1, Nc),
        PointSet.X2: (nb, Nc, Nc + 1),
        PointSet.ZETA: (nb, Nc, Nc),
    }[pointset]


def write_snapshot(path: Union[str, Path], values: np.ndarray, Nc: int, pointset: PointSet) -> Path:
    """Write one point-set field.

    Raises:
        ValidationError: The array shape does not match the point set.
    """
    pointset = PointSet(pointset)
    nb = values.shape[0]
    if values.shape != _expected_shape(Nc, pointset, nb):
        raise ValidationError(
            f"field of shape {values.shape} does not match point set {pointset.name} at Nc={Nc}",
            module="swe_model",
            operation="write_snapshot",
        )
    path = Path(path)
    with path.open("wb") as handle:
        handle.write(HEADER.pack(MAGIC, VERSION, Nc, int(pointset), nb))
        handle.write(np.ascontiguousarray(values, dtype="<f8").tobytes())
    return path


def read_snapshot(path: Union[str, Path]) -> Snapshot:
    """Read a file written by :func:`write_snapshot`.

    Raises:
        ValidationError: Bad magic, unknown version or point set, or a truncated payload.
    """
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise ValidationError("truncated header", module="swe_model", operation="read_snapshot")
    magic, version, Nc, pointset, nb = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValidationError(f"bad magic {magic!r}", module="swe_model", operation="read_snapshot")
    if version != VERSION:
        raise ValidationError(
            f"unsupported version {version}", module="swe_model", operation="read_snapshot"
        )
    try:
        pointset = PointSet(pointset)
    except ValueError:
        raise ValidationError(
            f"unknown point set {pointset}", module="swe_model", operation="read_snapshot"
        ) from None
    shape = _expected_shape(Nc, pointset, nb)
    payload = len(data) - HEADER.size
    if payload % 8:
        raise ValidationError(
            f"payload of {payload} bytes is not a whole number of float64 values",
            module="swe_model",
            operation="read_snapshot",
        )
    values = np.frombuffer(data, dtype="<f8", offset=HEADER.size)
    if values.size != int(np.prod(shape)):
        raise ValidationError(
            f"expected {int(np.prod(shape))} values, found {values.size}",
            module="swe_model",
            operation="read_snapshot",
        )
    return Snapshot(Nc=Nc, pointset=pointset, values=values.reshape(shape).astype(float))
