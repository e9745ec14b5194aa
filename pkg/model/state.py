"""State - Prognostic state and conservation diagnostics."""

from dataclasses import dataclass

import numpy as np

from discretization.fields import VectorFieldV


@dataclass
class ModelState:
    """Time, h at the h points and covariant velocity."""

    t: float
    h: np.ndarray
    v: VectorFieldV

    def copy(self) -> "ModelState":
        return ModelState(self.t, self.h.copy(), self.v.copy())


@dataclass(frozen=True)
class Diagnostics:
    t: float
    mass: float
    energy: float
    tangential_jump: float
