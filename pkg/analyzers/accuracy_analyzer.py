"""Accuracy Analyzer - Measures the polynomial accuracy of a 1D operator set."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from operators.sbp1d import Operator1DSet
from utils.errors import ValidationError


logger = logging.getLogger(__name__)


@dataclass
class OrderReport:
    """Measured orders of one operator."""

    name: str
    interior_order: int
    boundary_order: int


@dataclass
class AccuracyReport:
    """Per-operator accuracy of an operator set."""

    order_tag: str
    N: int
    operators: Dict[str, OrderReport] = field(default_factory=dict)

    def as_rows(self) -> List[Tuple[str, int, int]]:
        return [
            (rep.name, rep.interior_order, rep.boundary_order)
            for rep in self.operators.values()
        ]

    def as_key_values(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for rep in self.operators.values():
            out[f"{rep.name}.interior_order"] = rep.interior_order
            out[f"{rep.name}.boundary_order"] = rep.boundary_order
        return out


class AccuracyAnalyzer:
    """Applies each operator row to monomials centred on the row's own point.

    Monomials are written in grid units around the output point, so a row is
    exact for degree k when its result matches the exact value to
    ``tolerance`` times the sum of the magnitudes of the terms.
    """

    def __init__(self, max_degree: int = 8, tolerance: float = 1e-10):
        self.max_degree = max_degree
        self.tolerance = tolerance

    def analyze(self, ops: Operator1DSet) -> AccuracyReport:
        """Measure interior and boundary orders of every operator in the set.

        Args:
            ops: Operator set with N at least twice the family minimum.

        Returns:
            Derivatives report the largest exact degree; interpolation and
            extrapolation report exact degree + 1.
        """
        if ops.N < 2 * ops.order.min_cells:
            raise ValidationError(
                f"N={ops.N} too small to separate interior and boundary rows",
                module="sbp1d",
                operation="verify_accuracy_orders",
            )

        uv = (ops.xv - ops.x0) / ops.dx
        uc = (ops.xc - ops.x0) / ops.dx

        report = AccuracyReport(order_tag=ops.order.value, N=ops.N)
        report.operators["Dcv"] = self._matrix_order(
            "Dcv", ops.Dcv.toarray() * ops.dx, uc, uv, derivative=True
        )
        report.operators["Dvc"] = self._matrix_order(
            "Dvc", ops.Dvc.toarray() * ops.dx, uv, uc, derivative=True
        )
        report.operators["Pvc"] = self._matrix_order(
            "Pvc", ops.Pvc.toarray(), uv, uc, derivative=False
        )
        report.operators["Pcv"] = self._matrix_order(
            "Pcv", ops.Pcv.toarray(), uc, uv, derivative=False
        )

        extrapolation = np.vstack([ops.l, ops.r])
        ends = np.array([0.0, float(ops.N)])
        degree = int(self._exact_degrees(extrapolation, uc, ends, derivative=False).min())
        report.operators["extrapolation"] = OrderReport(
            "extrapolation", degree + 1, degree + 1
        )

        logger.debug(f"Accuracy of order {ops.order.value}: {report.as_key_values()}")
        return report

    def _exact_degrees(
        self, matrix: np.ndarray, source: np.ndarray, target: np.ndarray, derivative: bool
    ) -> np.ndarray:
        offsets = source[None, :] - target[:, None]
        degrees = np.full(matrix.shape[0], -1)
        still_exact = np.ones(matrix.shape[0], dtype=bool)
        for k in range(self.max_degree + 1):
            terms = matrix * offsets ** k
            applied = terms.sum(axis=1)
            # the centred monomial and its derivative vanish at the output point
            # except for the constant (values) and the linear (derivatives) term
            exact = 1.0 if k == (1 if derivative else 0) else 0.0
            scale = np.maximum(1.0, np.abs(terms).sum(axis=1))
            still_exact &= np.abs(applied - exact) <= self.tolerance * scale
            degrees[still_exact] = k
        return degrees

    def _matrix_order(
        self,
        name: str,
        matrix: np.ndarray,
        source: np.ndarray,
        target: np.ndarray,
        derivative: bool,
    ) -> OrderReport:
        degrees = self._exact_degrees(matrix, source, target, derivative)
        rows = len(degrees)
        middle = degrees[rows // 3: (2 * rows) // 3]
        shift = 0 if derivative else 1
        return OrderReport(
            name,
            interior_order=int(middle.min()) + shift,
            boundary_order=int(degrees.min()) + shift,
        )


def verify_accuracy_orders(ops: Operator1DSet) -> AccuracyReport:
    """Module-level shortcut for ``AccuracyAnalyzer().analyze``."""
    return AccuracyAnalyzer().analyze(ops)
