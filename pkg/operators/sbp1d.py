"""SBP 1D - Staggered summation-by-parts operator sets and their interface corrections."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np
import scipy.sparse as sp

from operators import coefficients
from utils.errors import StencilOverlapError, ValidationError


logger = logging.getLogger(__name__)


class OperatorOrder(Enum):
    """Operator family tag, valued by its command-line spelling."""

    ORDER21 = "21"
    ORDER42 = "42"
    ORDER63_POLY = "63-poly"
    ORDER63_WAVE = "63-wave"

    @classmethod
    def from_tag(cls, tag: str) -> "OperatorOrder":
        """Parse a tag such as ``42`` or ``63-wave``."""
        for member in cls:
            if member.value == str(tag).strip().lower():
                return member
        raise ValidationError(
            f"unknown operator order '{tag}', expected one of "
            f"{', '.join(m.value for m in cls)}",
            module="sbp1d",
            operation="build_operator_set",
        )

    @property
    def accuracy(self) -> Tuple[int, int]:
        """(interior order, boundary order)."""
        return {
            OperatorOrder.ORDER21: (2, 1),
            OperatorOrder.ORDER42: (4, 2),
        }.get(self, (6, 3))

    @property
    def min_cells(self) -> int:
        return _table(self).min_cells


class InterfaceMethod1D(Enum):
    """How the closed-domain interface between the two ends is treated."""

    PURE = "pure"
    SAT = "sat"
    SAT_PROJECTION = "sat-proj"

    @classmethod
    def from_tag(cls, tag: str) -> "InterfaceMethod1D":
        for member in cls:
            if member.value == str(tag).strip().lower():
                return member
        raise ValidationError(
            f"unknown interface method '{tag}'",
            module="sbp1d",
            operation="laplace_spectrum",
        )


def _table(order: OperatorOrder) -> coefficients.StencilTable:
    if order is OperatorOrder.ORDER21:
        return coefficients.table_21()
    if order is OperatorOrder.ORDER42:
        return coefficients.table_42()
    if order is OperatorOrder.ORDER63_POLY:
        return coefficients.table_63(coefficients.POLY_PARAMETERS)
    if order is OperatorOrder.ORDER63_WAVE:
        return coefficients.table_63(coefficients.WAVE_PARAMETERS)
    raise ValidationError(
        f"unsupported order {order!r}", module="sbp1d", operation="build_operator_set"
    )


@dataclass(frozen=True)
class Operator1DSet:
    """One order's complete staggered SBP kit on N cells.

    Quadratures are stored as diagonals; every other operator is a CSR matrix.
    """

    order: OperatorOrder
    N: int
    dx: float
    x0: float
    hv: np.ndarray
    hc: np.ndarray
    Dcv: sp.csr_matrix
    Dvc: sp.csr_matrix
    Pvc: sp.csr_matrix
    Pcv: sp.csr_matrix
    l: np.ndarray
    r: np.ndarray

    @property
    def Hv(self) -> sp.dia_matrix:
        return sp.diags(self.hv)

    @property
    def Hc(self) -> sp.dia_matrix:
        return sp.diags(self.hc)

    @property
    def xv(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.N + 1)

    @property
    def xc(self) -> np.ndarray:
        return self.x0 + self.dx * (np.arange(self.N) + 0.5)

    @property
    def e_l(self) -> np.ndarray:
        e = np.zeros(self.N + 1)
        e[0] = 1.0
        return e

    @property
    def e_r(self) -> np.ndarray:
        e = np.zeros(self.N + 1)
        e[-1] = 1.0
        return e

    @property
    def R_cv(self) -> np.ndarray:
        """Boundary operator e_r rᵀ − e_l lᵀ, shape (N+1, N)."""
        return np.outer(self.e_r, self.r) - np.outer(self.e_l, self.l)

    def dense(self) -> dict:
        """Dense copies of every operator, for verification and dumps."""
        return {
            "Hv": np.diag(self.hv),
            "Hc": np.diag(self.hc),
            "Dcv": self.Dcv.toarray(),
            "Dvc": self.Dvc.toarray(),
            "Pvc": self.Pvc.toarray(),
            "Pcv": self.Pcv.toarray(),
        }

    def sbp_residual(self) -> float:
        """max |Hv Dcv + Dvcᵀ Hc − R_cv| (entries are O(1) for any dx)."""
        lhs = self.hv[:, None] * self.Dcv.toarray() + (self.Dvc.toarray() * self.hc[:, None]).T
        return float(np.max(np.abs(lhs - self.R_cv)))

    def interpolation_residual(self) -> float:
        """max |Hc Pvc − (Hv Pcv)ᵀ| relative to dx."""
        lhs = self.hc[:, None] * self.Pvc.toarray()
        rhs = (self.hv[:, None] * self.Pcv.toarray()).T
        return float(np.max(np.abs(lhs - rhs)) / self.dx)


def _mirror(boundary: Tuple[float, ...], size: int) -> np.ndarray:
    weights = np.ones(size)
    k = len(boundary)
    if k:
        weights[:k] = boundary
        weights[size - k:] = boundary[::-1]
    return weights


def _banded(
    shape: Tuple[int, int],
    boundary: Tuple[Tuple[float, ...], ...],
    offsets: Tuple[int, ...],
    interior: Tuple[float, ...],
    sign: float,
) -> sp.csr_matrix:
    """Assemble a staggered banded operator.

    The lower-right block is the upper-left one rotated by 180 degrees and
    multiplied by ``sign``.
    """
    rows, cols = shape
    nb = len(boundary)
    matrix = sp.lil_matrix(shape)
    for i, row in enumerate(boundary):
        for j, value in enumerate(row):
            matrix[i, j] = value
            matrix[rows - 1 - i, cols - 1 - j] = sign * value
    for i in range(nb, rows - nb):
        for offset, value in zip(offsets, interior):
            matrix[i, i + offset] = value
    return matrix.tocsr()


def derive_dual_operator(
    Dcv: sp.spmatrix, hc: np.ndarray, hv: np.ndarray, l: np.ndarray, r: np.ndarray
) -> sp.csr_matrix:
    """Vertex-to-cell derivative from the SBP relation.

    Args:
        Dcv: Cell-to-vertex derivative, shape (N+1, N).
        hc: Diagonal of Hc.
        hv: Diagonal of Hv.
        l: Left extrapolation row.
        r: Right extrapolation row.

    Returns:
        Dvc = Hc⁻¹ (e_r rᵀ − e_l lᵀ − Hv Dcv)ᵀ as CSR.
    """
    boundary = sp.lil_matrix(Dcv.shape)
    boundary[0, :] = -np.asarray(l)[None, :]
    boundary[Dcv.shape[0] - 1, :] = np.asarray(r)[None, :]
    rhs = boundary.tocsr() - sp.diags(hv) @ Dcv
    Dvc = sp.diags(1.0 / hc) @ rhs.T
    Dvc = sp.csr_matrix(Dvc)
    Dvc.eliminate_zeros()
    return Dvc


def build_operator_set(
    order: OperatorOrder, N: int, dx: float, x0: float = 0.0
) -> Operator1DSet:
    """Build the full operator set of one family.

    Args:
        order: Operator family.
        N: Number of cells.
        dx: Grid spacing.
        x0: Coordinate of the left vertex.

    Returns:
        The assembled set.

    Raises:
        StencilOverlapError: N is below the family's minimum.
        ValidationError: Non-positive spacing or unknown order.
    """
    if not isinstance(order, OperatorOrder):
        order = OperatorOrder.from_tag(order)
    table = _table(order)
    if N < table.min_cells:
        raise StencilOverlapError(
            f"stencil overlap: order {order.value} needs N >= {table.min_cells}, got {N}",
            module="sbp1d",
            operation="build_operator_set",
        )
    if not dx > 0:
        raise ValidationError(
            f"grid spacing must be positive, got {dx}",
            module="sbp1d",
            operation="build_operator_set",
        )

    hv = dx * _mirror(table.hv_boundary, N + 1)
    hc = dx * _mirror(table.hc_boundary, N)

    Dcv = _banded(
        (N + 1, N), table.dcv_boundary, table.dcv_offsets, table.dcv_interior, -1.0
    ) / dx
    Pvc = _banded(
        (N, N + 1), table.pvc_boundary, table.pvc_offsets, table.pvc_interior, 1.0
    )
    Pcv = sp.csr_matrix(sp.diags(1.0 / hv) @ Pvc.T @ sp.diags(hc))

    l = np.zeros(N)
    l[: len(table.left_extrapolation)] = table.left_extrapolation
    r = l[::-1].copy()

    Dvc = derive_dual_operator(Dcv, hc, hv, l, r)
    logger.debug(f"Built order {order.value} operators on N={N}, dx={dx:.6g}")
    return Operator1DSet(
        order=order, N=N, dx=dx, x0=x0, hv=hv, hc=hc,
        Dcv=sp.csr_matrix(Dcv), Dvc=Dvc, Pvc=Pvc, Pcv=Pcv, l=l, r=r,
    )


class SATOperators(NamedTuple):
    DSvc: sp.csr_matrix
    DScv: sp.csr_matrix


class ProjectionOperators(NamedTuple):
    DPvc: sp.csr_matrix
    DPcv: sp.csr_matrix
    A: sp.csr_matrix


def sat_corrected(ops: Operator1DSet) -> SATOperators:
    """Periodic-interface SAT corrections of both derivatives.

    DSvc = Dvc − ½Hc⁻¹(r + l)(e_r − e_l)ᵀ and
    DScv = Dcv − ½Hv⁻¹(e_r + e_l)(r − l)ᵀ.
    """
    DSvc = ops.Dvc - 0.5 * sp.csr_matrix(
        np.outer((ops.r + ops.l) / ops.hc, ops.e_r - ops.e_l)
    )
    DScv = ops.Dcv - 0.5 * sp.csr_matrix(
        np.outer((ops.e_r + ops.e_l) / ops.hv, ops.r - ops.l)
    )
    return SATOperators(sp.csr_matrix(DSvc), sp.csr_matrix(DScv))


def projection_matrix(hv: np.ndarray) -> sp.csr_matrix:
    """Hv-weighted average of the two end values, identity elsewhere."""
    n = len(hv)
    A = sp.lil_matrix((n, n))
    A.setdiag(1.0)
    total = hv[0] + hv[-1]
    for row in (0, n - 1):
        A[row, 0] = hv[0] / total
        A[row, n - 1] = hv[-1] / total
    return A.tocsr()


def sat_projection_corrected(ops: Operator1DSet) -> ProjectionOperators:
    """SAT-projection operators DPvc = Dvc·A and DPcv = A·DScv."""
    A = projection_matrix(ops.hv)
    sat = sat_corrected(ops)
    return ProjectionOperators(
        DPvc=sp.csr_matrix(ops.Dvc @ A),
        DPcv=sp.csr_matrix(A @ sat.DScv),
        A=A,
    )


def interpolation_spectral_radius(ops: Operator1DSet) -> float:
    """ρ(Pcv Pvc); all eigenvalues are real and non-negative."""
    product = (ops.Pcv @ ops.Pvc).toarray()
    return float(np.max(np.abs(np.linalg.eigvals(product))))
