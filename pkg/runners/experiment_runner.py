"""Experiment Runner - Single runs, convergence studies and stationary-mode runs."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from analyzers.error_analyzer import (
    ConvergenceResult,
    ErrorNorms,
    checkerboard_fraction,
    fit_rates,
    nesting_ratio,
)
from discretization.coriolis import CoriolisVariant
from generators.initial_conditions import (
    HOUR,
    SAMPLE_INTERVAL,
    TestCase,
    case_config,
    initial_condition,
    reference_solution,
    solid_rotation_speed,
)
from model.observers import (
    DiagnosticsRecorder,
    ErrorSampler,
    Observer,
    ReferenceRecorder,
    TimeMeanAccumulator,
)
from model.swe import IntegrationResult, ShallowWaterModel
from operators.sbp1d import OperatorOrder
from utils.errors import ValidationError


logger = logging.getLogger(__name__)

SAMPLE_HOURS = SAMPLE_INTERVAL / HOUR
STATIONARY_HOURS = 600.0
REFERENCE_NC = 192


def threads_from_env() -> int:
    """Worker count from SBP_THREADS; 0 or unset means one per CPU."""
    raw = os.environ.get("SBP_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(
            f"SBP_THREADS must be an integer, got '{raw}'", module="cli", operation="threads"
        ) from None
    if value < 0:
        raise ValidationError(
            f"SBP_THREADS must not be negative, got {value}", module="cli", operation="threads"
        )
    return value or (os.cpu_count() or 1)


@dataclass
class StationaryMode:
    mean: np.ndarray
    checkerboard_fraction: float
    energy_drift: float
    samples: int


class ExperimentRunner:
    """Runs test cases with one operator family and Coriolis variant.

    Args:
        order: 1D operator family.
        variant: Coriolis discretization.
        threads: Worker count for per-grid runs; defaults to SBP_THREADS.
        progress: Show tqdm progress bars.
        sample_hours: Error-sampling interval in simulated hours.
    """

    def __init__(
        self,
        order: OperatorOrder,
        variant: CoriolisVariant = CoriolisVariant.MAIN,
        threads: Optional[int] = None,
        progress: bool = True,
        sample_hours: float = SAMPLE_HOURS,
    ):
        self.order = order
        self.variant = variant
        self.threads = threads if threads is not None else threads_from_env()
        self.progress = progress
        self.sample_hours = sample_hours

    def build_model(self, case: TestCase, Nc: int, dt: Optional[float] = None) -> ShallowWaterModel:
        return ShallowWaterModel(case_config(case, Nc, self.order, self.variant, dt))

    def run_case(
        self,
        case: TestCase,
        Nc: int,
        duration: Optional[float] = None,
        dt: Optional[float] = None,
        observers: Sequence[Observer] = (),
        model: Optional[ShallowWaterModel] = None,
    ) -> Tuple[ShallowWaterModel, IntegrationResult]:
        """Integrate one case on one grid from its initial condition."""
        model = model if model is not None else self.build_model(case, Nc, dt)
        state = initial_condition(case, model.grid, model.config)
        duration = case.default_duration if duration is None else duration
        logger.info(f"Running {case.name} on Nc={Nc} for {duration / HOUR:g} h")
        result = model.integrate(state, duration, observers, progress=self.progress)
        return model, result

    def sample_every(self, model: ShallowWaterModel) -> int:
        return model.steps_for(self.sample_hours * HOUR)

    def reference_run(
        self, case: TestCase, Nc_ref: int, coarse_grids: Sequence[int], duration: float
    ) -> ReferenceRecorder:
        """Fine-grid run restricted onto every coarse grid at each sample time."""
        for Nc in coarse_grids:
            nesting_ratio(Nc_ref, Nc)
        model = self.build_model(case, Nc_ref)
        recorder = ReferenceRecorder(self.sample_every(model), coarse_grids)
        self.run_case(case, Nc_ref, duration, observers=[recorder], model=model)
        return recorder

    def grid_errors(
        self,
        case: TestCase,
        Nc: int,
        duration: float,
        reference: Optional[ReferenceRecorder] = None,
    ) -> ErrorNorms:
        """Max-over-time norms (fine-grid reference) or end-of-run norms (exact reference)."""
        model = self.build_model(case, Nc)
        if case.has_exact_solution:
            exact = reference_solution(case, model.grid, model.config, 0.0)
            sampler = ErrorSampler(self.sample_every(model), lambda t, step: exact)
            self.run_case(case, Nc, duration, observers=[sampler], model=model)
            norms = sampler.last
        else:
            if reference is None:
                raise ValidationError(
                    f"case '{case.name}' needs a reference run",
                    module="experiments",
                    operation="convergence_study",
                )
            sampler = ErrorSampler(self.sample_every(model), reference.lookup(Nc))
            self.run_case(case, Nc, duration, observers=[sampler], model=model)
            norms = sampler.worst
        logger.info(f"{case.name} Nc={Nc}: l2={norms.l2:.4e} linf={norms.linf:.4e}")
        return norms

    def convergence_study(
        self,
        case: TestCase,
        Nc_list: Sequence[int],
        Nc_ref: int = REFERENCE_NC,
        duration: Optional[float] = None,
    ) -> ConvergenceResult:
        """Errors on every grid of ``Nc_list`` and the fitted rates.

        Raises:
            ValidationError: Fewer than two grids, or a grid that does not nest
                in the reference grid.
        """
        grids = sorted(set(int(n) for n in Nc_list))
        if len(grids) < 2:
            raise ValidationError(
                "at least two grids are needed", module="experiments", operation="convergence_study"
            )
        duration = case.default_duration if duration is None else duration
        reference = None
        if not case.has_exact_solution:
            if Nc_ref <= grids[-1]:
                raise ValidationError(
                    f"reference grid Nc={Nc_ref} must be finer than Nc={grids[-1]}",
                    module="experiments",
                    operation="convergence_study",
                )
            reference = self.reference_run(case, Nc_ref, grids, duration)

        workers = max(1, min(self.threads, len(grids)))
        logger.info(f"Convergence study {case.name}/{self.order.value} on {grids} with {workers} workers")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {Nc: pool.submit(self.grid_errors, case, Nc, duration, reference) for Nc in grids}
            errors: Dict[int, ErrorNorms] = {Nc: future.result() for Nc, future in futures.items()}

        result = fit_rates(case.name, self.order.value, errors)
        result.metadata.update(
            {
                "variant": self.variant.value,
                "duration_hours": duration / HOUR,
                "sample_hours": self.sample_hours,
                "reference": "exact" if reference is None else f"Nc={Nc_ref}",
            }
        )
        if case.tag == "solid":
            result.metadata["u0"] = solid_rotation_speed()
        return result

    def stationary_mode(
        self, case: TestCase, Nc: int = 64, hours: float = STATIONARY_HOURS
    ) -> StationaryMode:
        """Time mean of h over ``hours`` and its checkerboard fraction."""
        if case.tag != "poor":
            logger.warning(f"Stationary-mode analysis of case '{case.name}'")
        model = self.build_model(case, Nc)
        every = max(1, self.sample_every(model) // 6)
        accumulator = TimeMeanAccumulator(every)
        diagnostics = DiagnosticsRecorder(self.sample_every(model))
        self.run_case(case, Nc, hours * HOUR, observers=[accumulator, diagnostics], model=model)
        mean = accumulator.mean
        return StationaryMode(
            mean=mean,
            checkerboard_fraction=checkerboard_fraction(mean, model.ops),
            energy_drift=diagnostics.relative_drift("energy"),
            samples=accumulator.count,
        )

