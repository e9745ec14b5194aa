"""Operators 2D - Tensor-product staggered SBP operators on multi-block grids.

All operators act matrix-free on arrays shaped (nb, ny, nx) by applying the 1D
matrices along one axis. ``kronecker`` assembles the same operators as sparse
matrices over the flattened [panel, j, i] ordering for verification.
"""

import logging
from typing import Callable, Dict

import numpy as np
import scipy.sparse as sp

from grid.cubed_sphere import BlockGrid, PointSet
from operators.sbp1d import Operator1DSet, OperatorOrder, build_operator_set
from utils.errors import ValidationError


logger = logging.getLogger(__name__)

ASSEMBLY_LIMIT = 24


def apply_along(matrix: sp.spmatrix, values: np.ndarray, axis: int) -> np.ndarray:
    """Apply a 1D operator along one axis of an array."""
    moved = np.moveaxis(values, axis, -1)
    lead = moved.shape[:-1]
    out = (matrix @ moved.reshape(-1, moved.shape[-1]).T).T
    return np.moveaxis(out.reshape(lead + (matrix.shape[0],)), -1, axis)


class Discrete2DOperators:
    """Derivative, interpolation, quadrature and interface operators of one grid.

    Args:
        grid: A cubed-sphere or single-block grid.
        order: 1D operator family used in both directions.
    """

    def __init__(self, grid: BlockGrid, order: OperatorOrder):
        self.grid = grid
        self.order = order
        self.ops1d: Operator1DSet = build_operator_set(order, grid.Nc, grid.dx, grid.x0)
        hv, hc = self.ops1d.hv, self.ops1d.hc
        self.H_h = np.outer(hv, hv)
        self.H_1 = np.outer(hv, hc)
        self.H_2 = np.outer(hc, hv)
        self.H_zeta = np.outer(hc, hc)
        h_points = grid.points[PointSet.H]
        self.J_h = h_points.J
        self.J_1 = grid.points[PointSet.X1].J
        self.J_2 = grid.points[PointSet.X2].J
        self.J_zeta = grid.points[PointSet.ZETA].J
        self.w_h = (self.H_h * self.J_h).ravel()
        logger.debug(f"2D operators of order {order.value} on Nc={grid.Nc}, nb={grid.nb}")

    # Derivatives -----------------------------------------------------------
    def D_h1(self, h: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Dvc, h, -1)

    def D_h2(self, h: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Dvc, h, 1)

    def D_1h(self, u1: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Dcv, u1, -1)

    def D_2h(self, u2: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Dcv, u2, 1)

    def D_1z(self, v1: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Dvc, v1, 1)

    def D_2z(self, v2: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Dvc, v2, -1)

    # Interpolations --------------------------------------------------------
    def P_h1(self, h: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Pvc, h, -1)

    def P_h2(self, h: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Pvc, h, 1)

    def P_1h(self, v1: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Pcv, v1, -1)

    def P_2h(self, v2: np.ndarray) -> np.ndarray:
        return apply_along(self.ops1d.Pcv, v2, 1)

    # Boundary operators ----------------------------------------------------
    def R_1h(self, u1: np.ndarray) -> np.ndarray:
        """Quadrature-weighted boundary values of u1 at the W (−) and E (+) edges."""
        ops = self.ops1d
        out = np.zeros(u1.shape[:-1] + (ops.N + 1,))
        out[..., 0] = -(u1 @ ops.l)
        out[..., -1] = u1 @ ops.r
        return out * ops.hv[:, None]

    def R_2h(self, u2: np.ndarray) -> np.ndarray:
        ops = self.ops1d
        out = np.zeros(u2.shape[:1] + (ops.N + 1,) + u2.shape[2:])
        out[:, 0, :] = -np.einsum("pji,j->pi", u2, ops.l)
        out[:, -1, :] = np.einsum("pji,j->pi", u2, ops.r)
        return out * ops.hv[None, :]

    # Interface treatment ---------------------------------------------------
    def project_h(self, h: np.ndarray) -> np.ndarray:
        """A_h: J_h·H_h-weighted average over every set of coincident h points."""
        pairing = self.grid.pairing
        if pairing is None:
            return h.copy()
        flat = h.reshape(h.shape[0] * h.shape[1] * h.shape[2], *h.shape[3:]).copy()
        w = self.w_h.reshape((-1,) + (1,) * (flat.ndim - 1))
        a, b = pairing.h_pairs[:, 0], pairing.h_pairs[:, 1]
        mean = (w[a] * flat[a] + w[b] * flat[b]) / (w[a] + w[b])
        flat[a] = mean
        flat[b] = mean
        corners = pairing.corner_groups
        wc = w[corners]
        mean = (wc * flat[corners]).sum(axis=1) / wc.sum(axis=1)
        for column in range(corners.shape[1]):
            flat[corners[:, column]] = mean
        return flat.reshape(h.shape)

    def average_fluxes(self, stacked: np.ndarray) -> np.ndarray:
        """A_n: mean of every pair of boundary-flux slots, zero elsewhere."""
        out = np.zeros_like(stacked)
        pairing = self.grid.pairing
        if pairing is None:
            return out
        a, b = pairing.flux_pairs[:, 0], pairing.flux_pairs[:, 1]
        mean = 0.5 * (stacked[a] + stacked[b])
        out[a] = mean
        out[b] = mean
        return out

    def sat(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        """S·u = −H_h⁻¹ (A_n R u) summed over both flux components."""
        stacked = np.concatenate([self.R_1h(u1).ravel(), self.R_2h(u2).ravel()])
        averaged = self.average_fluxes(stacked)
        n_h = stacked.size // 2
        total = (averaged[:n_h] + averaged[n_h:]).reshape(self.J_h.shape)
        return -total / self.H_h

    # Assembly --------------------------------------------------------------
    def kronecker(self) -> Dict[str, sp.csr_matrix]:
        """Sparse Kronecker forms of the block operators over all panels."""
        self._check_assembly_size()
        ops = self.ops1d
        nb, n = self.grid.nb, self.grid.Nc
        I_b = sp.identity(nb, format="csr")
        I_v = sp.identity(n + 1, format="csr")
        I_c = sp.identity(n, format="csr")

        def along_x(matrix: sp.spmatrix, rows_identity: sp.spmatrix) -> sp.csr_matrix:
            return sp.csr_matrix(sp.kron(I_b, sp.kron(rows_identity, matrix)))

        def along_y(matrix: sp.spmatrix, cols_identity: sp.spmatrix) -> sp.csr_matrix:
            return sp.csr_matrix(sp.kron(I_b, sp.kron(matrix, cols_identity)))

        boundary = sp.csr_matrix(ops.R_cv)
        return {
            "D_h1": along_x(ops.Dvc, I_v),
            "D_h2": along_y(ops.Dvc, I_v),
            "D_1h": along_x(ops.Dcv, I_v),
            "D_2h": along_y(ops.Dcv, I_v),
            "P_h1": along_x(ops.Pvc, I_v),
            "P_h2": along_y(ops.Pvc, I_v),
            "P_1h": along_x(ops.Pcv, I_v),
            "P_2h": along_y(ops.Pcv, I_v),
            "R_1h": along_x(boundary, sp.diags(ops.hv)),
            "R_2h": along_y(boundary, sp.diags(ops.hv)),
            "D_1z": along_y(ops.Dvc, I_c),
            "D_2z": along_x(ops.Dvc, I_c),
        }

    def _check_assembly_size(self) -> None:
        if self.grid.Nc > ASSEMBLY_LIMIT:
            raise ValidationError(
                f"assembled mode is limited to Nc <= {ASSEMBLY_LIMIT}",
                module="ops2d",
                operation="assemble",
            )

    def assemble(self, apply: Callable[[np.ndarray], np.ndarray], size_in: int) -> sp.csr_matrix:
        """Probe a linear map on flat vectors into a sparse matrix, column by column."""
        self._check_assembly_size()
        columns = []
        basis = np.zeros(size_in)
        for k in range(size_in):
            basis[k] = 1.0
            columns.append(sp.csc_matrix(apply(basis).reshape(-1, 1)))
            basis[k] = 0.0
        matrix = sp.hstack(columns).tocsr()
        matrix.eliminate_zeros()
        return matrix

    def weights(self, pointset: PointSet) -> np.ndarray:
        """Quadrature weights H (without J) broadcast to one point set."""
        return {
            PointSet.H: self.H_h,
            PointSet.X1: self.H_1,
            PointSet.X2: self.H_2,
            PointSet.ZETA: self.H_zeta,
        }[pointset]

    def sphere_area(self) -> float:
        """Σ H_h J_h over all h points (each block counted separately)."""
        return float(np.sum(self.H_h * self.J_h))
