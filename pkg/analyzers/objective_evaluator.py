"""Objective Evaluator - Regression values of the free-parameter objective functions."""

import logging
from typing import Dict

import numpy as np

from operators.sbp1d import Operator1DSet, OperatorOrder, build_operator_set


logger = logging.getLogger(__name__)

OBJECTIVE_CELLS = 48
WAVE_LENGTHS = (4, 8)


def objective_operator_set(order: OperatorOrder) -> Operator1DSet:
    """Operator set on [0, 1] with the cell count used for every objective."""
    return build_operator_set(order, OBJECTIVE_CELLS, 1.0 / OBJECTIVE_CELLS)


class ObjectiveEvaluator:
    """Evaluates the polynomial, wave and interpolation objectives on a set."""

    def poly63(self, ops: Operator1DSet) -> float:
        """Squared fourth-degree differentiation error of both derivatives."""
        xv, xc = ops.xv, ops.xc
        err_cv = ops.Dcv @ xc ** 4 - 4 * xv ** 3
        err_vc = ops.Dvc @ xv ** 4 - 4 * xc ** 3
        return float(err_cv @ err_cv + err_vc @ err_vc)

    def wave_residual(self, ops: Operator1DSet, k: int) -> np.ndarray:
        """Dcv Dvc t / κ² + t for t = exp(i·κx), κ = 2π/(k·dx).

        Zero for an exact second derivative, since t'' = −κ²t.
        """
        kappa = 2 * np.pi / (k * ops.dx)
        t = np.exp(1j * kappa * ops.xv)
        return (ops.Dcv @ (ops.Dvc @ t)) / kappa ** 2 + t

    def wave63(self, ops: Operator1DSet) -> float:
        """Second-derivative error for waves of 4 and 8 grid lengths."""
        total = 0.0
        for k in WAVE_LENGTHS:
            err = self.wave_residual(ops, k)
            total += float(np.real(np.vdot(err, err)))
        return total

    def interpolation(self, ops: Operator1DSet, degree: int) -> float:
        """Squared interpolation error of both directions on x^degree."""
        xv, xc = ops.xv, ops.xc
        err_cv = ops.Pcv @ xc ** degree - xv ** degree
        err_vc = ops.Pvc @ xv ** degree - xc ** degree
        return float(err_cv @ err_cv + err_vc @ err_vc)

    def evaluate(self, ops: Operator1DSet) -> Dict[str, float]:
        values = {
            "poly63": self.poly63(ops),
            "wave63": self.wave63(ops),
            "interp42": self.interpolation(ops, 2),
            "interp63a": self.interpolation(ops, 3),
            "interp63b": self.interpolation(ops, 4),
        }
        logger.debug(f"Objectives for order {ops.order.value}: {values}")
        return values


def evaluate_objectives(ops: Operator1DSet) -> Dict[str, float]:
    return ObjectiveEvaluator().evaluate(ops)
