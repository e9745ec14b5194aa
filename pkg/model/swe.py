"""SWE - Linearized shallow-water model on the staggered SBP cubed sphere."""

import logging
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from discretization.coriolis import (
    CoriolisOperator,
    coriolis_constant,
    coriolis_spherical,
    coriolis_zero,
)
from discretization.differential import div, grad
from discretization.fields import (
    Basis,
    VectorFieldV,
    check_scalar_h,
    first_non_finite,
    interface_jump,
    tangential_jump,
)
from discretization.metric import co2contra, quadrature_dot, quadrature_h
from discretization.operators2d import Discrete2DOperators
from grid.cubed_sphere import BlockGrid, PointSet, build_cubed_sphere
from model.config import ModelConfig
from model.state import Diagnostics, ModelState
from utils.errors import NumericalFailure, ValidationError


logger = logging.getLogger(__name__)

DEBUG_CONTINUITY_TOLERANCE = 1e-9


@dataclass
class IntegrationResult:
    state: ModelState
    steps: int
    diagnostics: List[Diagnostics] = field(default_factory=list)


class ShallowWaterModel:
    """Semi-discrete linear SWE with classical RK4 time stepping.

    Args:
        config: Physical and numerical parameters.
        grid: Prebuilt grid; a cubed sphere of ``config.Nc`` cells is built if omitted.
        ops: Prebuilt operators matching ``grid`` and ``config.order``.
    """

    def __init__(
        self,
        config: ModelConfig,
        grid: Optional[BlockGrid] = None,
        ops: Optional[Discrete2DOperators] = None,
    ):
        self.config = config
        self.grid = grid if grid is not None else build_cubed_sphere(config.Nc, config.a)
        self.ops = ops if ops is not None else Discrete2DOperators(self.grid, config.order)
        if self.ops.grid is not self.grid:
            raise ValidationError(
                "operators were built for a different grid", module="swe_model", operation="init"
            )
        self.f = self._sample_coriolis()
        self.has_rotation = bool(np.any(self.f != 0.0))
        self.coriolis = CoriolisOperator(self.ops, self.f, config.coriolis_variant)
        logger.info(
            f"Model Nc={self.grid.Nc} order={config.order.value} "
            f"coriolis={config.coriolis}/{config.coriolis_variant.value} dt={config.dt:g}s"
        )

    def _sample_coriolis(self) -> np.ndarray:
        cfg = self.config
        if cfg.coriolis == "constant":
            return coriolis_constant(self.grid, cfg.f0)
        if cfg.coriolis == "spherical":
            return coriolis_spherical(self.grid, cfg.omega, cfg.pole_lat, cfg.pole_lon)
        return coriolis_zero(self.grid)

    # Tendencies ------------------------------------------------------------
    def rhs(self, state: ModelState) -> Tuple[np.ndarray, VectorFieldV]:
        """(dh/dt, dv/dt) of the semi-discrete system."""
        check_scalar_h(self.grid, state.h, "rhs")
        state.v.require(Basis.COVARIANT, "rhs")
        contra = co2contra(state.v, self.ops)
        dv = grad(state.h, self.ops) * (-self.config.g)
        if self.has_rotation:
            dv = dv + self.coriolis.apply(contra)
        dh = -self.config.H * div(contra, self.ops)
        return dh, dv

    def _energy_terms(self, state: ModelState) -> Tuple[float, float]:
        dh, dv = self.rhs(state)
        contra = co2contra(state.v, self.ops)
        ops = self.ops
        kinetic = self.config.H * float(
            np.sum(ops.H_1 * ops.J_1 * contra.v1 * dv.v1) + np.sum(ops.H_2 * ops.J_2 * contra.v2 * dv.v2)
        )
        potential = self.config.g * quadrature_h(state.h, dh, ops)
        return kinetic, potential

    def energy_tendency(self, state: ModelState, relative: bool = False) -> float:
        """dE/dt induced by the right-hand side.

        With ``relative`` the value is divided by the sum of the magnitudes of
        the kinetic and potential contributions.
        """
        kinetic, potential = self._energy_terms(state)
        total = kinetic + potential
        if relative:
            scale = abs(kinetic) + abs(potential)
            return abs(total) / scale if scale > 0 else 0.0
        return total

    def mass_tendency(self, state: ModelState) -> float:
        dh, _ = self.rhs(state)
        return float(np.sum(self.ops.H_h * self.ops.J_h * dh))

    # Diagnostics -----------------------------------------------------------
    def mass(self, h: np.ndarray) -> float:
        return float(np.sum(self.ops.H_h * self.ops.J_h * h))

    def energy(self, state: ModelState) -> float:
        cfg = self.config
        return 0.5 * cfg.H * quadrature_dot(state.v, state.v, self.ops) + 0.5 * cfg.g * quadrature_h(
            state.h, state.h, self.ops
        )

    def diagnostics(self, state: ModelState) -> Diagnostics:
        return Diagnostics(
            t=state.t,
            mass=self.mass(state.h),
            energy=self.energy(state),
            tangential_jump=tangential_jump(self.grid, state.v),
        )

    # Time stepping ---------------------------------------------------------
    def rk4_step(self, state: ModelState, step: int = 0) -> ModelState:
        """One classical RK4 step.

        Raises:
            NumericalFailure: Non-finite values appeared, or (debug mode) h lost
                interface continuity.
        """
        dt = self.config.dt
        h0, v0 = state.h, state.v
        k1h, k1v = self.rhs(state)
        k2h, k2v = self.rhs(ModelState(state.t + dt / 2, h0 + dt / 2 * k1h, v0 + k1v * (dt / 2)))
        k3h, k3v = self.rhs(ModelState(state.t + dt / 2, h0 + dt / 2 * k2h, v0 + k2v * (dt / 2)))
        k4h, k4v = self.rhs(ModelState(state.t + dt, h0 + dt * k3h, v0 + k3v * dt))

        h = h0 + dt / 6 * (k1h + 2 * k2h + 2 * k3h + k4h)
        v = v0 + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6)
        new_state = ModelState(state.t + dt, h, v)
        self._check_state(new_state, step)
        return new_state

    def _check_state(self, state: ModelState, step: int) -> None:
        for name, values in (("h", state.h), ("v1", state.v.v1), ("v2", state.v.v2)):
            index = first_non_finite(values)
            if index is not None:
                raise NumericalFailure(
                    f"non-finite {name} at step {step} (t={state.t:g}s)",
                    module="swe_model",
                    operation="rk4_step",
                    index=index,
                )
        if self.config.debug:
            scale = max(1.0, float(np.max(np.abs(state.h))))
            jump = interface_jump(self.grid, state.h)
            if jump > DEBUG_CONTINUITY_TOLERANCE * scale:
                raise NumericalFailure(
                    f"h interface jump {jump:.3g} at step {step}",
                    module="swe_model",
                    operation="rk4_step",
                )

    def steps_for(self, duration: float) -> int:
        """Number of steps covering ``duration`` seconds.

        Raises:
            ValidationError: ``duration`` is negative or not a multiple of dt.
        """
        dt = self.config.dt
        if duration < 0:
            raise ValidationError(
                f"negative duration {duration}", module="swe_model", operation="integrate"
            )
        steps = int(round(duration / dt))
        if abs(steps * dt - duration) > 1e-9 * max(duration, dt):
            raise ValidationError(
                f"duration {duration}s is not a multiple of dt={dt}s",
                module="swe_model",
                operation="integrate",
            )
        return steps

    def integrate(
        self,
        initial: ModelState,
        duration: float,
        observers: Sequence = (),
        progress: bool = True,
    ) -> IntegrationResult:
        """Step RK4 from ``initial`` over ``duration`` seconds.

        Each observer is called at step 0 and then every ``observer.every``
        steps, and once more at the end.
        """
        steps = self.steps_for(duration)
        state = initial.copy()
        for observer in observers:
            observer.start(self, state)

        for step in tqdm(
            range(1, steps + 1),
            desc=f"Nc={self.grid.Nc}",
            disable=not progress,
            file=sys.stderr,
            leave=False,
        ):
            state = self.rk4_step(state, step)
            for observer in observers:
                if step % observer.every == 0:
                    observer.observe(self, state, step)

        for observer in observers:
            observer.finish(self, state, steps)

        series = next(
            (list(o.series) for o in observers if hasattr(o, "series")),
            None,
        )
        if series is None:
            series = [self.diagnostics(initial), self.diagnostics(state)]
        logger.info(f"Integrated {steps} steps to t={state.t:g}s")
        return IntegrationResult(state=state, steps=steps, diagnostics=series)

    # Convenience -----------------------------------------------------------
    def zero_state(self) -> ModelState:
        return ModelState(0.0, np.zeros(self.grid.shape(PointSet.H)), VectorFieldV.zeros(self.grid))
