"""Fields - Grid functions on the staggered point sets."""

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from grid.cubed_sphere import BlockGrid, PointSet
from utils.errors import BasisMismatchError, NumericalFailure, ValidationError


# h-point fields are plain arrays of shape (nb, Nc+1, Nc+1), indexed [panel, j, i].
ScalarFieldH = np.ndarray


class Basis(Enum):
    COVARIANT = "covariant"
    CONTRAVARIANT = "contravariant"
    MASSFLUX = "massflux"


@dataclass
class VectorFieldV:
    """Velocity-point vector field.

    ``v1`` lives on the x^1 points with shape (nb, Nc+1, Nc) and ``v2`` on the
    x^2 points with shape (nb, Nc, Nc+1).
    """

    v1: np.ndarray
    v2: np.ndarray
    basis: Basis

    @classmethod
    def zeros(cls, grid: BlockGrid, basis: Basis = Basis.COVARIANT) -> "VectorFieldV":
        return cls(
            np.zeros(grid.shape(PointSet.X1)), np.zeros(grid.shape(PointSet.X2)), basis
        )

    @classmethod
    def from_flat(cls, grid: BlockGrid, values: np.ndarray, basis: Basis) -> "VectorFieldV":
        n1 = grid.size(PointSet.X1)
        return cls(
            values[:n1].reshape(grid.shape(PointSet.X1)),
            values[n1:].reshape(grid.shape(PointSet.X2)),
            basis,
        )

    def flat(self) -> np.ndarray:
        return np.concatenate([self.v1.ravel(), self.v2.ravel()])

    def copy(self) -> "VectorFieldV":
        return VectorFieldV(self.v1.copy(), self.v2.copy(), self.basis)

    def require(self, basis: Basis, operation: str) -> None:
        if self.basis is not basis:
            raise BasisMismatchError(
                f"expected a {basis.value} field, got {self.basis.value}",
                module="ops2d",
                operation=operation,
            )

    def _combine(self, other: "VectorFieldV", sign: float) -> "VectorFieldV":
        other.require(self.basis, "vector arithmetic")
        return VectorFieldV(self.v1 + sign * other.v1, self.v2 + sign * other.v2, self.basis)

    def __add__(self, other: "VectorFieldV") -> "VectorFieldV":
        return self._combine(other, 1.0)

    def __sub__(self, other: "VectorFieldV") -> "VectorFieldV":
        return self._combine(other, -1.0)

    def __mul__(self, scalar: Union[float, int]) -> "VectorFieldV":
        return VectorFieldV(scalar * self.v1, scalar * self.v2, self.basis)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.v1)), np.max(np.abs(self.v2))))


def check_scalar_h(grid: BlockGrid, h: np.ndarray, operation: str) -> None:
    if h.shape != grid.shape(PointSet.H):
        raise ValidationError(
            f"h field has shape {h.shape}, expected {grid.shape(PointSet.H)}",
            module="ops2d",
            operation=operation,
        )


def first_non_finite(values: np.ndarray):
    """Index tuple of the first NaN/Inf entry, or None."""
    bad = np.argwhere(~np.isfinite(values))
    return tuple(int(v) for v in bad[0]) if len(bad) else None


def require_finite(values: np.ndarray, module: str, operation: str) -> None:
    index = first_non_finite(values)
    if index is not None:
        raise NumericalFailure(
            "non-finite value", module=module, operation=operation, index=index
        )


def interface_jump(grid: BlockGrid, h: np.ndarray) -> float:
    """Largest difference between paired interface values of an h field."""
    if grid.pairing is None:
        return 0.0
    flat = h.ravel()
    pairs = grid.pairing.h_pairs
    corners = grid.pairing.corner_groups
    jump = np.abs(flat[pairs[:, 0]] - flat[pairs[:, 1]]).max(initial=0.0)
    return float(max(jump, np.ptp(flat[corners], axis=1).max(initial=0.0)))


def is_interface_continuous(grid: BlockGrid, h: np.ndarray, tolerance: float = 1e-12) -> bool:
    scale = max(1.0, float(np.max(np.abs(h))))
    return interface_jump(grid, h) <= tolerance * scale


def tangential_jump(grid: BlockGrid, v: VectorFieldV) -> float:
    """Largest mismatch of covariant tangential components across block edges."""
    if grid.pairing is None:
        return 0.0
    t = grid.pairing.tangent_pairs
    components = (v.v1.ravel(), v.v2.ravel())
    a = np.where(t.comp_a == 0, components[0][np.where(t.comp_a == 0, t.idx_a, 0)],
                 components[1][np.where(t.comp_a == 1, t.idx_a, 0)])
    b = np.where(t.comp_b == 0, components[0][np.where(t.comp_b == 0, t.idx_b, 0)],
                 components[1][np.where(t.comp_b == 1, t.idx_b, 0)])
    return float(np.max(np.abs(a - t.sign * b), initial=0.0))
