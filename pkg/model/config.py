"""Config - Physical and numerical parameters of a linearized shallow-water run."""

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict

import numpy as np

from discretization.coriolis import CoriolisVariant
from grid.cubed_sphere import EARTH_RADIUS
from operators.sbp1d import OperatorOrder
from utils.errors import ValidationError


GRAVITY = 9.80616
OMEGA = 7.292e-5
CORIOLIS_KINDS = ("zero", "constant", "spherical")


@dataclass(frozen=True)
class ModelConfig:
    """Run configuration.

    Attributes:
        H: Mean fluid depth (m).
        g: Gravity (m/s²).
        coriolis: One of ``zero``, ``constant`` or ``spherical``.
        f0: Coriolis parameter for the constant kind (1/s).
        omega: Rotation rate for the spherical kind (1/s).
        pole_lat: Latitude of the rotation pole (rad).
        pole_lon: Longitude of the rotation pole (rad).
        order: 1D operator family.
        coriolis_variant: Coriolis discretization.
        dt: Time step (s).
        Nc: Cells per panel edge.
        a: Sphere radius (m).
        debug: Check h interface continuity after every step.
    """

    H: float
    dt: float
    Nc: int
    g: float = GRAVITY
    coriolis: str = "zero"
    f0: float = 0.0
    omega: float = OMEGA
    pole_lat: float = np.pi / 2
    pole_lon: float = 0.0
    order: OperatorOrder = OperatorOrder.ORDER63_WAVE
    coriolis_variant: CoriolisVariant = CoriolisVariant.MAIN
    a: float = EARTH_RADIUS
    debug: bool = False

    def __post_init__(self):
        problems = []
        if not self.H > 0:
            problems.append(f"H must be positive, got {self.H}")
        if not self.g > 0:
            problems.append(f"g must be positive, got {self.g}")
        if not self.dt > 0:
            problems.append(f"dt must be positive, got {self.dt}")
        if not self.a > 0:
            problems.append(f"a must be positive, got {self.a}")
        if self.coriolis not in CORIOLIS_KINDS:
            problems.append(f"coriolis must be one of {CORIOLIS_KINDS}, got {self.coriolis!r}")
        if not isinstance(self.order, OperatorOrder):
            problems.append(f"order must be an OperatorOrder, got {self.order!r}")
        if not isinstance(self.coriolis_variant, CoriolisVariant):
            problems.append(f"coriolis_variant must be a CoriolisVariant, got {self.coriolis_variant!r}")
        if problems:
            raise ValidationError("; ".join(problems), module="swe_model", operation="ModelConfig")

    def with_overrides(self, **overrides: Any) -> "ModelConfig":
        """Validated copy with some fields replaced."""
        return replace(self, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["order"] = self.order.value
        data["coriolis_variant"] = self.coriolis_variant.value
        return data
