"""
Error Analyzer - Error norms, grid restriction, convergence rates and smoothness.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from discretization.operators2d import Discrete2DOperators
from utils.errors import ValidationError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorNorms:
    l2: float
    linf: float

    def worst(self, other: "ErrorNorms") -> "ErrorNorms":
        return ErrorNorms(max(self.l2, other.l2), max(self.linf, other.linf))


def error_norms(h_num: np.ndarray, h_ref: np.ndarray, ops: Discrete2DOperators) -> ErrorNorms:
    """Quadrature-weighted relative l2 and relative max-norm of h_num − h_ref.

    Raises:
        ValidationError: Shapes differ or the reference is identically zero.
    """
    if h_num.shape != h_ref.shape:
        raise ValidationError(
            f"shapes {h_num.shape} and {h_ref.shape} differ",
            module="experiments",
            operation="error_norms",
        )
    weights = ops.H_h * ops.J_h
    reference_l2 = float(np.sum(weights * h_ref ** 2))
    reference_max = float(np.max(np.abs(h_ref)))
    if reference_l2 <= 0 or reference_max <= 0:
        raise ValidationError(
            "reference field has zero norm", module="experiments", operation="error_norms"
        )
    diff = h_num - h_ref
    return ErrorNorms(
        l2=float(np.sqrt(np.sum(weights * diff ** 2) / reference_l2)),
        linf=float(np.max(np.abs(diff)) / reference_max),
    )


def nesting_ratio(Nc_fine: int, Nc_coarse: int) -> int:
    """Nc_fine / Nc_coarse.

    Raises:
        ValidationError: The ratio is not a power of two.
    """
    ratio, remainder = divmod(Nc_fine, Nc_coarse)
    if remainder or ratio < 1 or ratio & (ratio - 1):
        raise ValidationError(
            f"Nc={Nc_coarse} does not nest in Nc={Nc_fine}",
            module="experiments",
            operation="reference_solution",
        )
    return ratio


def restrict(fine: np.ndarray, Nc_fine: int, Nc_coarse: int) -> np.ndarray:
    """Sample an h field at the vertices shared with a coarser nested grid."""
    ratio = nesting_ratio(Nc_fine, Nc_coarse)
    if fine.shape[1] != Nc_fine + 1:
        raise ValidationError(
            f"field shape {fine.shape} is not an h field at Nc={Nc_fine}",
            module="experiments",
            operation="reference_solution",
        )
    return fine[:, ::ratio, ::ratio].copy()


def successive_rates(errors: Sequence[float]) -> List[Optional[float]]:
    """log2 ratios of consecutive errors under grid doubling; None where undefined."""
    rates: List[Optional[float]] = [None]
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if coarse > 0 and fine > 0:
            rates.append(float(np.log2(coarse / fine)))
        else:
            rates.append(None)
    return rates


def fitted_rate(Nc_list: Sequence[int], errors: Sequence[float]) -> Optional[float]:
    """Least-squares slope of −log2(error) against log2(Nc)."""
    pairs = [(n, e) for n, e in zip(Nc_list, errors) if e > 0]
    if len(pairs) < 2:
        return None
    x = np.log2([p[0] for p in pairs])
    y = np.log2([p[1] for p in pairs])
    return float(-np.polyfit(x, y, 1)[0])


@dataclass
class ConvergenceRow:
    Nc: int
    l2: float
    linf: float
    rate_l2: Optional[float] = None
    rate_linf: Optional[float] = None


@dataclass
class ConvergenceResult:
    """Per-grid errors and rates; a rate of None with zero errors means an exact match."""

    case: str
    order: str
    rows: List[ConvergenceRow] = field(default_factory=list)
    fitted_l2: Optional[float] = None
    fitted_linf: Optional[float] = None
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return bool(self.rows) and all(r.l2 == 0.0 and r.linf == 0.0 for r in self.rows)

    def as_rows(self) -> List[Tuple]:
        return [(r.Nc, r.l2, r.linf, r.rate_l2, r.rate_linf) for r in self.rows]


def fit_rates(case: str, order: str, errors: Dict[int, ErrorNorms]) -> ConvergenceResult:
    """Build a ConvergenceResult from per-grid error norms.

    Raises:
        ValidationError: Fewer than two grids.
    """
    if len(errors) < 2:
        raise ValidationError(
            "at least two grids are needed for a rate",
            module="experiments",
            operation="convergence_study",
        )
    grids = sorted(errors)
    l2 = [errors[n].l2 for n in grids]
    linf = [errors[n].linf for n in grids]
    rows = [
        ConvergenceRow(n, a, b, ra, rb)
        for n, a, b, ra, rb in zip(grids, l2, linf, successive_rates(l2), successive_rates(linf))
    ]
    if len(grids) < 3:
        logger.warning("Fewer than three grids: the rate trend is a single pair")
    return ConvergenceResult(
        case=case,
        order=order,
        rows=rows,
        fitted_l2=fitted_rate(grids, l2),
        fitted_linf=fitted_rate(grids, linf),
    )


def checkerboard_fraction(field_h: np.ndarray, ops: Discrete2DOperators) -> float:
    """Share of the weighted field energy held by its checkerboard component.

    The checkerboard field is (4m − sum of the four neighbours)/8 at interior
    points of every panel; it is ±1 for a pure ±1 checkerboard and zero for
    constant or linear fields.
    """
    weights = ops.H_h * ops.J_h
    total = float(np.sum(weights * field_h ** 2))
    if total == 0.0:
        return 0.0
    centre = field_h[:, 1:-1, 1:-1]
    neighbours = (
        field_h[:, :-2, 1:-1] + field_h[:, 2:, 1:-1] + field_h[:, 1:-1, :-2] + field_h[:, 1:-1, 2:]
    )
    checker = (4 * centre - neighbours) / 8
    return float(np.sum(weights[:, 1:-1, 1:-1] * checker ** 2) / total)
