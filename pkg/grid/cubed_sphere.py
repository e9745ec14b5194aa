"""Cubed Sphere - Equiangular gnomonic multi-block grid and its metric."""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Tuple

import numpy as np

from utils.errors import ValidationError


logger = logging.getLogger(__name__)

EARTH_RADIUS = 6.371229e6
MIN_CELLS = 12
QUARTER_PI = np.pi / 4

# Panel frames (centre direction, local x direction, local y direction).
# Every frame satisfies ex × ey = centre.
PANEL_FRAMES = np.array(
    [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [-1, 0, 0], [0, 0, 1]],
        [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
        [[0, 0, 1], [0, 1, 0], [-1, 0, 0]],
        [[0, 0, -1], [0, 1, 0], [1, 0, 0]],
    ],
    dtype=float,
)


class PointSet(IntEnum):
    """Staggered point sets; the value is the snapshot header byte."""

    H = 0
    X1 = 1
    X2 = 2
    ZETA = 3


@dataclass
class PointData:
    """Coordinates and metric of one point set on every panel.

    Arrays have shape (nb, ny, nx); vectors carry a trailing axis of 3.
    """

    x1: np.ndarray
    x2: np.ndarray
    xyz: np.ndarray
    J: np.ndarray
    Q11: np.ndarray
    Q12: np.ndarray
    Q22: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    @property
    def d1(self) -> np.ndarray:
        """Dual (contravariant) basis vector paired with e1."""
        return self.Q11[..., None] * self.e1 + self.Q12[..., None] * self.e2

    @property
    def d2(self) -> np.ndarray:
        return self.Q12[..., None] * self.e1 + self.Q22[..., None] * self.e2

    @property
    def normal(self) -> np.ndarray:
        n = np.cross(self.e1, self.e2)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    @property
    def lon(self) -> np.ndarray:
        return np.mod(np.arctan2(self.xyz[..., 1], self.xyz[..., 0]), 2 * np.pi)

    @property
    def lat(self) -> np.ndarray:
        radius = np.linalg.norm(self.xyz, axis=-1)
        return np.arcsin(np.clip(self.xyz[..., 2] / radius, -1.0, 1.0))


@dataclass
class MetricSample:
    J: np.ndarray
    Q11: np.ndarray
    Q12: np.ndarray
    Q22: np.ndarray
    e1: np.ndarray
    e2: np.ndarray


def _check_range(x1: np.ndarray, x2: np.ndarray, operation: str) -> None:
    limit = QUARTER_PI * (1 + 1e-12)
    if np.any(np.abs(x1) > limit) or np.any(np.abs(x2) > limit):
        raise ValidationError(
            "local coordinates must lie in [-pi/4, pi/4]",
            module="grid",
            operation=operation,
        )


def equiangular_mapping(panel: int, x1, x2, a: float) -> np.ndarray:
    """Map local equiangular coordinates of a panel onto the sphere of radius a.

    Args:
        panel: Panel index 0..5.
        x1: Local coordinate along the panel's x direction.
        x2: Local coordinate along the panel's y direction.
        a: Sphere radius.

    Returns:
        Cartesian points with a trailing axis of 3.
    """
    x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
    _check_range(x1, x2, "equiangular_mapping")
    c, ex, ey = PANEL_FRAMES[panel]
    X, Y = np.tan(x1), np.tan(x2)
    delta = np.sqrt(1 + X ** 2 + Y ** 2)
    direction = c + X[..., None] * ex + Y[..., None] * ey
    return a * direction / delta[..., None]


def metric_at(panel: int, x1, x2, a: float) -> MetricSample:
    """Closed-form Jacobian, contravariant metric and covariant basis."""
    x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
    _check_range(x1, x2, "metric_at")
    c, ex, ey = PANEL_FRAMES[panel]
    X, Y = np.tan(x1), np.tan(x2)
    X2, Y2 = 1 + X ** 2, 1 + Y ** 2
    delta2 = X2 + Y ** 2
    delta3 = delta2 ** 1.5

    e1 = (a * X2 / delta3)[..., None] * (
        Y2[..., None] * ex - X[..., None] * c - (X * Y)[..., None] * ey
    )
    e2 = (a * Y2 / delta3)[..., None] * (
        X2[..., None] * ey - Y[..., None] * c - (X * Y)[..., None] * ex
    )
    return MetricSample(
        J=a ** 2 * X2 * Y2 / delta3,
        Q11=delta2 / (a ** 2 * X2),
        Q12=X * Y * delta2 / (a ** 2 * X2 * Y2),
        Q22=delta2 / (a ** 2 * Y2),
        e1=e1,
        e2=e2,
    )


class BlockGrid:
    """Common container for staggered multi-block grids.

    Attributes:
        nb: Number of blocks.
        Nc: Cells per block edge.
        dx: Uniform spacing of the local coordinates.
        x0: Local coordinate of the first vertex.
        points: Per point set coordinates and metric.
        pairing: Interface tables, or None for a grid without interfaces.
    """

    def __init__(self, nb: int, Nc: int, dx: float, x0: float):
        self.nb = nb
        self.Nc = Nc
        self.dx = dx
        self.x0 = x0
        self.points: Dict[PointSet, PointData] = {}
        self.pairing = None

    @property
    def x_vertices(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.Nc + 1)

    @property
    def x_centers(self) -> np.ndarray:
        return self.x0 + self.dx * (np.arange(self.Nc) + 0.5)

    def local_coordinates(self, pointset: PointSet) -> Tuple[np.ndarray, np.ndarray]:
        """Meshgrids (x1, x2) of shape (ny, nx) for one point set."""
        xv, xc = self.x_vertices, self.x_centers
        along_1, along_2 = {
            PointSet.H: (xv, xv),
            PointSet.X1: (xc, xv),
            PointSet.X2: (xv, xc),
            PointSet.ZETA: (xc, xc),
        }[pointset]
        x1, x2 = np.meshgrid(along_1, along_2)
        return x1, x2

    def shape(self, pointset: PointSet) -> Tuple[int, int, int]:
        n = self.Nc
        return {
            PointSet.H: (self.nb, n + 1, n + 1),
            PointSet.X1: (self.nb, n + 1, n),
            PointSet.X2: (self.nb, n, n + 1),
            PointSet.ZETA: (self.nb, n, n),
        }[pointset]

    def size(self, pointset: PointSet) -> int:
        return int(np.prod(self.shape(pointset)))

    @property
    def has_interfaces(self) -> bool:
        return self.pairing is not None

    def jacobian_continuity_error(self) -> float:
        """Largest relative jump of J_h over paired interface points."""
        if self.pairing is None:
            return 0.0
        J = self.points[PointSet.H].J.ravel()
        a, b = self.pairing.h_pairs[:, 0], self.pairing.h_pairs[:, 1]
        jumps = np.abs(J[a] - J[b]) / J[a]
        corners = self.pairing.corner_groups
        corner_jumps = np.ptp(J[corners], axis=1) / J[corners[:, 0]]
        return float(max(jumps.max(initial=0.0), corner_jumps.max(initial=0.0)))


class CubedSphereGrid(BlockGrid):
    """Six-panel equiangular gnomonic grid on a sphere of radius ``a``."""

    def __init__(self, Nc: int, a: float = EARTH_RADIUS):
        super().__init__(nb=6, Nc=Nc, dx=np.pi / (2 * Nc), x0=-QUARTER_PI)
        self.a = a
        self.topology = None
        for pointset in PointSet:
            self.points[pointset] = self._evaluate(pointset)

    def _evaluate(self, pointset: PointSet) -> PointData:
        x1, x2 = self.local_coordinates(pointset)
        xyz, metric = [], []
        for panel in range(self.nb):
            xyz.append(equiangular_mapping(panel, x1, x2, self.a))
            metric.append(metric_at(panel, x1, x2, self.a))

        def stack(name: str) -> np.ndarray:
            return np.stack([getattr(m, name) for m in metric])

        return PointData(
            x1=np.broadcast_to(x1, (self.nb,) + x1.shape).copy(),
            x2=np.broadcast_to(x2, (self.nb,) + x2.shape).copy(),
            xyz=np.stack(xyz),
            J=stack("J"),
            Q11=stack("Q11"),
            Q12=stack("Q12"),
            Q22=stack("Q22"),
            e1=stack("e1"),
            e2=stack("e2"),
        )

    def edge_point(self, panel: int, edge: str, k) -> np.ndarray:
        """Cartesian position of the k-th vertex of a panel edge (k may be fractional)."""
        t = self.x0 + self.dx * np.asarray(k, float)
        x1, x2 = {
            "W": (-QUARTER_PI, t),
            "E": (QUARTER_PI, t),
            "S": (t, -QUARTER_PI),
            "N": (t, QUARTER_PI),
        }[edge]
        return equiangular_mapping(panel, x1, x2, self.a)


class SkewedBlockGrid(BlockGrid):
    """A single flat block with straight coordinate lines meeting at angle ``alpha``.

    J = sin α and Q = [[1, −cos α], [−cos α, 1]]/sin² α everywhere.
    """

    def __init__(self, Nc: int, alpha: float, length: float = 1.0):
        if not 0 < alpha < np.pi:
            raise ValidationError(
                f"skew angle must lie in (0, pi), got {alpha}",
                module="grid",
                operation="build_skewed_block",
            )
        super().__init__(nb=1, Nc=Nc, dx=length / Nc, x0=0.0)
        self.alpha = alpha
        self.a = length
        sin_a, cos_a = np.sin(alpha), np.cos(alpha)
        e1 = np.array([1.0, 0.0, 0.0])
        e2 = np.array([cos_a, sin_a, 0.0])
        for pointset in PointSet:
            x1, x2 = self.local_coordinates(pointset)
            shape = (1,) + x1.shape
            ones = np.ones(shape)
            self.points[pointset] = PointData(
                x1=x1[None].copy(),
                x2=x2[None].copy(),
                xyz=(x1[..., None] * e1 + x2[..., None] * e2)[None],
                J=sin_a * ones,
                Q11=ones / sin_a ** 2,
                Q12=-cos_a * ones / sin_a ** 2,
                Q22=ones / sin_a ** 2,
                e1=np.broadcast_to(e1, shape + (3,)).copy(),
                e2=np.broadcast_to(e2, shape + (3,)).copy(),
            )


def build_cubed_sphere(Nc: int, a: float = EARTH_RADIUS, min_cells: int = MIN_CELLS) -> CubedSphereGrid:
    """Build the grid, its topology and its interface pairing.

    Args:
        Nc: Cells per panel edge.
        a: Sphere radius in metres.
        min_cells: Smallest accepted Nc (the 6/3 family needs 12).

    Raises:
        ValidationError: Nc too small or a not positive.
    """
    from grid.topology import build_interface_pairing, build_topology

    if Nc < min_cells:
        raise ValidationError(
            f"Nc must be at least {min_cells}, got {Nc}",
            module="grid",
            operation="build_cubed_sphere",
        )
    if not a > 0:
        raise ValidationError(
            f"radius must be positive, got {a}", module="grid", operation="build_cubed_sphere"
        )
    grid = CubedSphereGrid(Nc, a)
    grid.topology = build_topology(grid)
    grid.pairing = build_interface_pairing(grid)
    logger.info(f"Built cubed sphere Nc={Nc}, a={a:.6g} m")
    return grid
