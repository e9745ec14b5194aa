"""Initial Conditions - Test cases, their parameters and their initial states."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from discretization.coriolis import CoriolisVariant, pole_vector
from discretization.fields import Basis, VectorFieldV
from grid.cubed_sphere import EARTH_RADIUS, BlockGrid, PointSet
from model.config import GRAVITY, OMEGA, ModelConfig
from model.state import ModelState
from operators.sbp1d import OperatorOrder
from utils.errors import ValidationError


logger = logging.getLogger(__name__)

DAY = 86400.0
HOUR = 3600.0
SAMPLE_INTERVAL = 6 * HOUR
COURANT_DT_NC = 28800.0
GAUSS_WIDTH = 16.0
ROTATION_F = 1e-4
SOLID_POLE = (np.pi / 4, 0.0)
SOLID_H0 = 29400.0 / GRAVITY

# Unit vectors of the perturbation centres.
CENTRE_PANEL = np.array([-1.0, 0.0, 0.0])
CENTRE_VERTEX = np.ones(3) / np.sqrt(3.0)

CASE_TAGS = ("gauss1", "gauss2", "gauss3", "solid", "poor")


def table_time_step(Nc: int) -> float:
    """Largest dt at or below the published Courant number (600 s at Nc = 48)
    that divides the sampling interval into whole steps."""
    return SAMPLE_INTERVAL / math.ceil(SAMPLE_INTERVAL * Nc / COURANT_DT_NC)


def gravity_wave_depth(a: float = EARTH_RADIUS, g: float = GRAVITY) -> float:
    """Depth whose gravity waves circle the sphere in five days."""
    return (2 * np.pi * a / (5 * DAY)) ** 2 / g


@dataclass(frozen=True)
class TestCase:
    """A named experiment.

    Attributes:
        tag: One of gauss1, gauss2, gauss3, solid or poor.
        nu: Modulation wavenumber of the poorly resolved case.
        overrides: ModelConfig field overrides.
    """

    __test__ = False

    tag: str
    nu: Optional[int] = None
    overrides: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in CASE_TAGS:
            raise ValidationError(
                f"unknown case '{self.tag}'", module="experiments", operation="initial_condition"
            )
        if self.tag == "poor" and (self.nu is None or self.nu < 1):
            raise ValidationError(
                "poorly resolved case needs a positive integer wavenumber",
                module="experiments",
                operation="initial_condition",
            )

    @classmethod
    def from_tag(cls, text: str) -> "TestCase":
        """Parse ``gauss1``, ``solid`` or ``poor:NU``."""
        tag, _, nu = str(text).strip().lower().partition(":")
        if tag == "poor":
            try:
                return cls(tag, int(nu))
            except ValueError:
                raise ValidationError(
                    f"bad wavenumber in '{text}'", module="experiments", operation="initial_condition"
                ) from None
        if nu:
            raise ValidationError(
                f"case '{tag}' takes no parameter", module="experiments", operation="initial_condition"
            )
        return cls(tag)

    @property
    def name(self) -> str:
        return f"poor:{self.nu}" if self.tag == "poor" else self.tag

    @property
    def is_gaussian(self) -> bool:
        return self.tag in ("gauss1", "gauss2", "gauss3", "poor")

    @property
    def has_exact_solution(self) -> bool:
        return self.tag == "solid"

    @property
    def default_duration(self) -> float:
        return 10 * DAY if self.tag == "solid" else 25 * DAY

    @property
    def centre(self) -> np.ndarray:
        return CENTRE_VERTEX if self.tag in ("gauss2", "gauss3") else CENTRE_PANEL


def case_config(
    case: TestCase,
    Nc: int,
    order: OperatorOrder = OperatorOrder.ORDER63_WAVE,
    variant: CoriolisVariant = CoriolisVariant.MAIN,
    dt: Optional[float] = None,
    a: float = EARTH_RADIUS,
) -> ModelConfig:
    """ModelConfig with the case's physical parameters."""
    params: Dict[str, Any] = dict(
        Nc=Nc,
        dt=dt if dt is not None else table_time_step(Nc),
        order=order,
        coriolis_variant=variant,
        a=a,
    )
    if case.tag == "solid":
        params.update(
            H=SOLID_H0,
            coriolis="spherical",
            omega=OMEGA,
            pole_lat=SOLID_POLE[0],
            pole_lon=SOLID_POLE[1],
        )
    else:
        params.update(H=gravity_wave_depth(a))
        if case.tag in ("gauss3", "poor"):
            params.update(coriolis="constant", f0=ROTATION_F)
    params.update(case.overrides)
    return ModelConfig(**params)


def solid_rotation_speed(a: float = EARTH_RADIUS) -> float:
    """u0: one revolution in twelve days."""
    return 2 * np.pi * a / (12 * DAY)


def great_circle_angle(xyz: np.ndarray, centre: np.ndarray) -> np.ndarray:
    unit = xyz / np.linalg.norm(xyz, axis=-1, keepdims=True)
    cross = np.linalg.norm(np.cross(unit, centre), axis=-1)
    return np.arctan2(cross, unit @ centre)


class InitialConditionGenerator:
    """Samples the initial state of a test case on a grid."""

    def generate(self, case: TestCase, grid: BlockGrid, config: ModelConfig) -> ModelState:
        """Initial h at the h points and covariant v at the velocity points.

        Args:
            case: Test case.
            grid: Cubed-sphere grid.
            config: Model configuration of the run.

        Returns:
            The state at t = 0.
        """
        if case.tag == "solid":
            return ModelState(0.0, self.solid_height(grid, config), self.solid_velocity(grid, config))
        h_points = grid.points[PointSet.H]
        angle = great_circle_angle(h_points.xyz, case.centre)
        h = np.exp(-GAUSS_WIDTH * angle ** 2)
        if case.tag == "poor":
            h = h * np.cos(case.nu * h_points.lon) ** 2 * np.cos(case.nu * h_points.lat) ** 2
        logger.debug(f"Initial condition {case.name}: max h = {h.max():.6g}")
        return ModelState(0.0, h, VectorFieldV.zeros(grid, Basis.COVARIANT))

    def solid_height(self, grid: BlockGrid, config: ModelConfig) -> np.ndarray:
        pole = pole_vector(config.pole_lat, config.pole_lon)
        xyz = grid.points[PointSet.H].xyz
        sin_lat = (xyz / np.linalg.norm(xyz, axis=-1, keepdims=True)) @ pole
        u0 = solid_rotation_speed(config.a)
        return config.H - config.a * config.omega * u0 / config.g * sin_lat ** 2

    def solid_velocity(self, grid: BlockGrid, config: ModelConfig) -> VectorFieldV:
        """Covariant components of the rigid rotation u0 p̂ × r̂ about the rotated pole."""
        pole = pole_vector(config.pole_lat, config.pole_lon)
        u0 = solid_rotation_speed(config.a)

        def covariant(pointset: PointSet, basis: str) -> np.ndarray:
            points = grid.points[pointset]
            unit = points.xyz / np.linalg.norm(points.xyz, axis=-1, keepdims=True)
            wind = u0 * np.cross(pole, unit)
            return np.sum(wind * getattr(points, basis), axis=-1)

        return VectorFieldV(covariant(PointSet.X1, "e1"), covariant(PointSet.X2, "e2"), Basis.COVARIANT)


def initial_condition(case: TestCase, grid: BlockGrid, config: ModelConfig) -> ModelState:
    return InitialConditionGenerator().generate(case, grid, config)


def reference_solution(case: TestCase, grid: BlockGrid, config: ModelConfig, t: float) -> np.ndarray:
    """Exact h of a stationary case at time ``t``.

    Raises:
        ValidationError: The case has no closed-form solution; Gaussian cases
            use a fine-grid run (see ExperimentRunner.reference_run).
    """
    if not case.has_exact_solution:
        raise ValidationError(
            f"case '{case.name}' has no closed-form reference",
            module="experiments",
            operation="reference_solution",
        )
    del t
    return InitialConditionGenerator().solid_height(grid, config)


def rossby_radius(config: ModelConfig) -> Optional[float]:
    """Deformation radius sqrt(gH)/f, with f = 2Ω on the sphere; None without rotation."""
    if config.coriolis == "zero":
        return None
    f = config.f0 if config.coriolis == "constant" else 2 * config.omega
    return float(np.sqrt(config.g * config.H) / f)
