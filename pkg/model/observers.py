"""Observers - Hooks called by ShallowWaterModel.integrate at fixed step intervals.

Each observer has an ``every`` interval in steps and receives ``start`` at step
0, ``observe`` every ``every`` steps and ``finish`` after the last step.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from analyzers.error_analyzer import ErrorNorms, error_norms, restrict
from grid.cubed_sphere import PointSet
from model.snapshot import write_snapshot
from model.state import Diagnostics, ModelState
from utils.errors import ValidationError
from utils.output_writer import write_diagnostics_csv


logger = logging.getLogger(__name__)


class Observer:
    """Base observer; subclasses override ``record``."""

    def __init__(self, every: int = 1):
        if every < 1:
            raise ValidationError(
                f"observer interval must be at least one step, got {every}",
                module="swe_model",
                operation="integrate",
            )
        self.every = int(every)
        self._last_step: Optional[int] = None

    def start(self, model, state: ModelState) -> None:
        self._last_step = None
        self._record_once(model, state, 0)

    def observe(self, model, state: ModelState, step: int) -> None:
        self._record_once(model, state, step)

    def finish(self, model, state: ModelState, step: int) -> None:
        self._record_once(model, state, step)

    def _record_once(self, model, state: ModelState, step: int) -> None:
        if self._last_step == step:
            return
        self._last_step = step
        self.record(model, state, step)

    def record(self, model, state: ModelState, step: int) -> None:
        raise NotImplementedError


class DiagnosticsRecorder(Observer):
    """Mass, energy and tangential-jump series, optionally written as CSV on finish."""

    def __init__(self, every: int = 1, path: Optional[Union[str, Path]] = None):
        super().__init__(every)
        self.path = Path(path) if path else None
        self.series: List[Diagnostics] = []
        self.velocity_max: List[float] = []

    def start(self, model, state: ModelState) -> None:
        self.series = []
        self.velocity_max = []
        super().start(model, state)

    def record(self, model, state: ModelState, step: int) -> None:
        diag = model.diagnostics(state)
        self.series.append(diag)
        self.velocity_max.append(state.v.max_abs())
        logger.debug(
            f"step {step}: mass={diag.mass:.17g} energy={diag.energy:.17g} "
            f"jump={diag.tangential_jump:.3g}"
        )

    def finish(self, model, state: ModelState, step: int) -> None:
        super().finish(model, state, step)
        if self.path is not None:
            write_diagnostics_csv(self.path, self.series)

    def relative_drift(self, attribute: str) -> float:
        """max |q(t) − q(0)| / |q(0)| over the recorded series."""
        values = np.array([getattr(d, attribute) for d in self.series])
        if values.size == 0 or values[0] == 0:
            return 0.0
        return float(np.max(np.abs(values - values[0])) / abs(values[0]))

    def max_relative_jump(self) -> float:
        """Largest tangential jump relative to max|v| at the same time."""
        ratios = [
            d.tangential_jump / v for d, v in zip(self.series, self.velocity_max) if v > 0
        ]
        return max(ratios, default=0.0)


class SnapshotWriter(Observer):
    """Writes h, v1 and v2 snapshot files into ``directory``."""

    def __init__(self, directory: Union[str, Path], every: int):
        super().__init__(every)
        self.directory = Path(directory)
        self.written: List[Path] = []

    def record(self, model, state: ModelState, step: int) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        Nc = model.grid.Nc
        for name, values, pointset in (
            ("h", state.h, PointSet.H),
            ("v1", state.v.v1, PointSet.X1),
            ("v2", state.v.v2, PointSet.X2),
        ):
            path = self.directory / f"{name}_{step:07d}.sbpf"
            self.written.append(write_snapshot(path, values, Nc, pointset))


class TimeMeanAccumulator(Observer):
    """Running mean of h over the observed steps."""

    def __init__(self, every: int = 1):
        super().__init__(every)
        self.count = 0
        self._sum: Optional[np.ndarray] = None

    def start(self, model, state: ModelState) -> None:
        self.count = 0
        self._sum = None
        super().start(model, state)

    def record(self, model, state: ModelState, step: int) -> None:
        self._sum = state.h.copy() if self._sum is None else self._sum + state.h
        self.count += 1

    @property
    def mean(self) -> np.ndarray:
        if self._sum is None:
            raise ValidationError(
                "no samples accumulated", module="experiments", operation="stationary_mode"
            )
        return self._sum / self.count


class ReferenceRecorder(Observer):
    """Restricts a fine-grid run onto coarser nested grids at every observed time."""

    def __init__(self, every: int, coarse_grids: Sequence[int]):
        super().__init__(every)
        self.coarse_grids = list(coarse_grids)
        self.samples: Dict[int, Dict[int, np.ndarray]] = {}  # whole seconds -> Nc -> h

    def start(self, model, state: ModelState) -> None:
        self.samples = {}
        super().start(model, state)

    def record(self, model, state: ModelState, step: int) -> None:
        fine = model.grid.Nc
        self.samples[int(round(state.t))] = {
            Nc: restrict(state.h, fine, Nc) for Nc in self.coarse_grids
        }

    def lookup(self, Nc: int) -> Callable[[float, int], Optional[np.ndarray]]:
        """Reference callback for an ErrorSampler on the Nc grid."""

        def reference(t: float, step: int) -> Optional[np.ndarray]:
            sample = self.samples.get(int(round(t)))
            return None if sample is None else sample[Nc]

        return reference


class ErrorSampler(Observer):
    """Error norms against a reference, tracked as a maximum over time.

    Args:
        every: Sampling interval in steps.
        reference: Maps (time in seconds, step) to the reference h field, or
            None to skip that sample.
    """

    def __init__(self, every: int, reference: Callable[[float, int], Optional[np.ndarray]]):
        super().__init__(every)
        self.reference = reference
        self.samples: List[tuple] = []
        self.worst = ErrorNorms(0.0, 0.0)

    def start(self, model, state: ModelState) -> None:
        self.samples = []
        self.worst = ErrorNorms(0.0, 0.0)
        super().start(model, state)

    def record(self, model, state: ModelState, step: int) -> None:
        h_ref = self.reference(state.t, step)
        if h_ref is None:
            return
        norms = error_norms(state.h, h_ref, model.ops)
        self.samples.append((state.t, norms))
        self.worst = self.worst.worst(norms)

    @property
    def last(self) -> Optional[ErrorNorms]:
        return self.samples[-1][1] if self.samples else None
