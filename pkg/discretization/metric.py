"""Metric - Covariant-to-contravariant operator, quadratures and the definiteness criterion."""

import logging

import numpy as np
import scipy.sparse.linalg as spla

from discretization.fields import Basis, VectorFieldV
from discretization.operators2d import Discrete2DOperators
from grid.cubed_sphere import PointSet
from utils.errors import NumericalFailure


logger = logging.getLogger(__name__)

PD_TOLERANCE = 1e-8
PD_MAX_ITERATIONS = 10_000


def co2contra(v: VectorFieldV, ops: Discrete2DOperators) -> VectorFieldV:
    """Apply Q to covariant components.

    v¹ = Q11 v1 + J_1⁻¹ P_h1(J_h Q12 P_2h v2) and
    v² = Q22 v2 + J_2⁻¹ P_h2(J_h Q12 P_1h v1).
    """
    v.require(Basis.COVARIANT, "co2contra")
    grid = ops.grid
    JQ12 = ops.J_h * grid.points[PointSet.H].Q12
    contra1 = grid.points[PointSet.X1].Q11 * v.v1 + ops.P_h1(JQ12 * ops.P_2h(v.v2)) / ops.J_1
    contra2 = grid.points[PointSet.X2].Q22 * v.v2 + ops.P_h2(JQ12 * ops.P_1h(v.v1)) / ops.J_2
    return VectorFieldV(contra1, contra2, Basis.CONTRAVARIANT)


def quadrature_h(h1: np.ndarray, h2: np.ndarray, ops: Discrete2DOperators) -> float:
    """Σ H_h J_h h1 h2."""
    return float(np.sum(ops.H_h * ops.J_h * h1 * h2))


def quadrature_dot(w: VectorFieldV, v: VectorFieldV, ops: Discrete2DOperators) -> float:
    """wᵀ H_v J_v Q v for two covariant fields."""
    w.require(Basis.COVARIANT, "quadrature_dot")
    contra = co2contra(v, ops)
    return float(
        np.sum(ops.H_1 * ops.J_1 * w.v1 * contra.v1)
        + np.sum(ops.H_2 * ops.J_2 * w.v2 * contra.v2)
    )


def pd_criterion(ops: Discrete2DOperators, seed: int = 0) -> float:
    """Largest per-block spectral radius of W22^-½ W12ᵀ W11⁻¹ W12 W22^-½.

    The operator is symmetric positive semidefinite and applied matrix-free;
    the leading eigenvalue is found with a Lanczos iteration started from a
    seeded random vector.

    Raises:
        NumericalFailure: The iteration did not converge.
    """
    grid = ops.grid
    rng = np.random.default_rng(seed)
    JQ12 = ops.J_h * grid.points[PointSet.H].Q12
    W11 = ops.H_1 * ops.J_1 * grid.points[PointSet.X1].Q11
    W22 = ops.H_2 * ops.J_2 * grid.points[PointSet.X2].Q22
    shape = (1,) + grid.shape(PointSet.X2)[1:]
    size = int(np.prod(shape))

    radius = 0.0
    for block in range(grid.nb):
        jq = JQ12[block:block + 1]
        w11 = W11[block:block + 1]
        root22 = np.sqrt(W22[block:block + 1])

        def matvec(x: np.ndarray, jq=jq, w11=w11, root22=root22) -> np.ndarray:
            y = x.reshape(shape) / root22
            y = ops.H_1 * ops.P_h1(jq * ops.P_2h(y)) / w11
            y = ops.H_2 * ops.P_h2(jq * ops.P_1h(y)) / root22
            return y.ravel()

        start = rng.standard_normal(size)
        if np.linalg.norm(matvec(start)) <= 1e-300:
            continue
        operator = spla.LinearOperator((size, size), matvec=matvec, dtype=float)
        try:
            value = spla.eigsh(
                operator, k=1, which="LA", v0=start,
                tol=PD_TOLERANCE, maxiter=PD_MAX_ITERATIONS, return_eigenvectors=False,
            )[0]
        except spla.ArpackNoConvergence as exc:
            raise NumericalFailure(
                f"eigenvalue iteration did not converge: {exc}",
                module="ops2d",
                operation="pd_criterion",
                index=block,
            ) from exc
        logger.debug(f"Block {block}: definiteness criterion {value:.6g}")
        radius = max(radius, float(value))
    return radius
