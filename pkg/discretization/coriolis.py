"""Coriolis - Energy-neutral Coriolis operators and Coriolis parameter samplers."""

import logging
from enum import Enum
from typing import Tuple

import numpy as np

from discretization.fields import Basis, VectorFieldV
from discretization.operators2d import Discrete2DOperators
from grid.cubed_sphere import BlockGrid, PointSet
from utils.errors import ValidationError


logger = logging.getLogger(__name__)

JACOBIAN_CONTINUITY_TOLERANCE = 1e-12


class CoriolisVariant(Enum):
    BASIC = "basic"
    FULL_CONTINUOUS = "full-continuous"
    SIMPLIFIED_CONTINUOUS = "simplified-continuous"
    MAIN = "main"
    MAIN_DISCONTINUOUS = "main-discontinuous"

    @classmethod
    def from_tag(cls, tag: str) -> "CoriolisVariant":
        for member in cls:
            if member.value == str(tag).strip().lower():
                return member
        raise ValidationError(
            f"unknown Coriolis variant '{tag}'", module="ops2d", operation="coriolis"
        )

    @property
    def needs_continuous_jacobian(self) -> bool:
        return self in (CoriolisVariant.SIMPLIFIED_CONTINUOUS, CoriolisVariant.MAIN)


def coriolis_zero(grid: BlockGrid) -> np.ndarray:
    return np.zeros(grid.shape(PointSet.H))


def coriolis_constant(grid: BlockGrid, f: float) -> np.ndarray:
    return np.full(grid.shape(PointSet.H), float(f))


def pole_vector(lat: float, lon: float) -> np.ndarray:
    return np.array([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)])


def coriolis_spherical(
    grid: BlockGrid, omega: float, pole_lat: float = np.pi / 2, pole_lon: float = 0.0
) -> np.ndarray:
    """f = 2Ω sin φ' where φ' is latitude measured from a (possibly rotated) pole."""
    xyz = grid.points[PointSet.H].xyz
    unit = xyz / np.linalg.norm(xyz, axis=-1, keepdims=True)
    return 2 * omega * (unit @ pole_vector(pole_lat, pole_lon))


class CoriolisOperator:
    """Coriolis tendency F ṽ for one variant.

    Args:
        ops: 2D operators of the grid.
        f: Coriolis parameter at the h points.
        variant: Discretization variant.

    Raises:
        ValidationError: The variant needs a continuous Jacobian and the grid
            does not have one.
    """

    def __init__(self, ops: Discrete2DOperators, f: np.ndarray, variant: CoriolisVariant):
        self.ops = ops
        self.f = f
        self.variant = variant
        if variant.needs_continuous_jacobian:
            jump = ops.grid.jacobian_continuity_error()
            if jump > JACOBIAN_CONTINUITY_TOLERANCE:
                raise ValidationError(
                    f"variant {variant.value} needs an edge-continuous Jacobian "
                    f"(relative jump {jump:.3g})",
                    module="ops2d",
                    operation="coriolis",
                )
        h_points = ops.grid.points[PointSet.H]
        self.e1, self.e2 = h_points.e1, h_points.e2
        self.d1, self.d2 = h_points.d1, h_points.d2

    def _rotate(self, z1: np.ndarray, z2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """C: (z1, z2) → (f z2, −f z1)."""
        return self.f * z2, -self.f * z1

    def _to_h(self, c1: np.ndarray, c2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.ops.P_1h(c1), self.ops.P_2h(c2)

    def _to_v(self, c1: np.ndarray, c2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.ops.P_h1(c1), self.ops.P_h2(c2)

    def _continuous_covariant(self, c1, c2):
        """V: covariant → Cartesian, interface projection, → covariant."""
        cart = self.ops.project_h(c1[..., None] * self.d1 + c2[..., None] * self.d2)
        return np.sum(cart * self.e1, axis=-1), np.sum(cart * self.e2, axis=-1)

    def _continuous_contravariant(self, y1, y2):
        """Ṽ: contravariant → Cartesian, interface projection, → contravariant."""
        cart = self.ops.project_h(y1[..., None] * self.e1 + y2[..., None] * self.e2)
        return np.sum(cart * self.d1, axis=-1), np.sum(cart * self.d2, axis=-1)

    def apply(self, v: VectorFieldV) -> VectorFieldV:
        """Covariant tendency for a contravariant velocity field."""
        v.require(Basis.CONTRAVARIANT, "coriolis")
        ops = self.ops
        J_h = ops.J_h
        variant = self.variant

        if variant is CoriolisVariant.BASIC:
            c = self._rotate(*self._to_h(ops.J_1 * v.v1, ops.J_2 * v.v2))
            t1, t2 = self._to_v(*c)
        elif variant is CoriolisVariant.FULL_CONTINUOUS:
            z1, z2 = self._to_h(ops.J_1 * v.v1, ops.J_2 * v.v2)
            y1, y2 = z1 / J_h, z2 / J_h
            a1, a2 = self._continuous_covariant(*self._rotate(J_h * y1, J_h * y2))
            b1, b2 = self._rotate(*self._continuous_contravariant(y1, y2))
            t1, t2 = self._to_v(0.5 * (a1 + J_h * b1), 0.5 * (a2 + J_h * b2))
        elif variant is CoriolisVariant.SIMPLIFIED_CONTINUOUS:
            c = self._rotate(*self._to_h(ops.J_1 * v.v1, ops.J_2 * v.v2))
            t1, t2 = self._to_v(*self._continuous_covariant(*c))
        else:
            y1, y2 = self._to_h(v.v1, v.v2)
            c1, c2 = self._rotate(J_h ** 2 * y1, J_h ** 2 * y2)
            if variant is CoriolisVariant.MAIN:
                c1, c2 = self._continuous_covariant(c1, c2)
            t1, t2 = self._to_v(c1, c2)
            t1, t2 = t1 / ops.J_1, t2 / ops.J_2
        return VectorFieldV(t1, t2, Basis.COVARIANT)


def coriolis(
    v: VectorFieldV, variant: CoriolisVariant, ops: Discrete2DOperators, f: np.ndarray
) -> VectorFieldV:
    return CoriolisOperator(ops, f, variant).apply(v)
