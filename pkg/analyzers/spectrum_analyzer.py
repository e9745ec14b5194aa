"""Spectrum Analyzer - Eigenvalues of the closed-domain staggered Laplace operators."""

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from operators.sbp1d import (
    InterfaceMethod1D,
    Operator1DSet,
    sat_corrected,
    sat_projection_corrected,
)
from utils.errors import NumericalFailure, ValidationError


logger = logging.getLogger(__name__)

NEAR_ZERO = 1e-9
IMAGINARY_TOLERANCE = 1e-9


def laplace_matrix(ops: Operator1DSet, method: InterfaceMethod1D) -> np.ndarray:
    """Dense vertex-point Laplace operator for one interface treatment."""
    if method is InterfaceMethod1D.PURE:
        return (ops.Dcv @ ops.Dvc).toarray()
    if method is InterfaceMethod1D.SAT:
        sat = sat_corrected(ops)
        return (sat.DScv @ sat.DSvc).toarray()
    if method is InterfaceMethod1D.SAT_PROJECTION:
        proj = sat_projection_corrected(ops)
        return (proj.DPcv @ proj.DPvc).toarray()
    raise ValidationError(
        f"unknown interface method {method!r}", module="sbp1d", operation="laplace_matrix"
    )


class SpectrumAnalyzer:
    """Computes and inspects spectra of dx²·L."""

    def __init__(self, near_zero: float = NEAR_ZERO):
        self.near_zero = near_zero

    def spectrum(self, ops: Operator1DSet, method: InterfaceMethod1D) -> np.ndarray:
        """All N+1 eigenvalues of dx²·L, sorted ascending.

        Raises:
            ValidationError: ``method`` is PURE (no closed-domain coupling).
            NumericalFailure: The eigensolver failed or an eigenvalue has a
                significant imaginary part.
        """
        if method is InterfaceMethod1D.PURE:
            raise ValidationError(
                "laplace spectrum needs an interface treatment (sat or sat-proj)",
                module="sbp1d",
                operation="laplace_spectrum",
            )
        scaled = ops.dx ** 2 * laplace_matrix(ops, method)
        try:
            eigenvalues = scipy.linalg.eigvals(scaled)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalFailure(
                f"eigensolver did not converge: {exc}",
                module="sbp1d",
                operation="laplace_spectrum",
            ) from exc

        worst = int(np.argmax(np.abs(eigenvalues.imag)))
        if abs(eigenvalues.imag[worst]) > IMAGINARY_TOLERANCE:
            raise NumericalFailure(
                f"complex eigenvalue {eigenvalues[worst]!r}",
                module="sbp1d",
                operation="laplace_spectrum",
                index=worst,
            )
        values = np.sort(eigenvalues.real)
        logger.debug(
            f"Spectrum {ops.order.value}/{method.value}: min={values[0]:.6g}, "
            f"max={values[-1]:.6g}"
        )
        return values

    def count_near_zero(self, eigenvalues: np.ndarray) -> int:
        return int(np.sum(np.abs(eigenvalues) <= self.near_zero))

    def null_modes(self, ops: Operator1DSet, method: InterfaceMethod1D) -> np.ndarray:
        """Orthonormal basis (columns) of the near-zero eigenspace of dx²·L.

        Both corrected Laplacians are self-adjoint in the Hv inner product, so
        Hv^½ L Hv^-½ is symmetric and its eigenvectors map back through Hv^-½.
        """
        scaled = ops.dx ** 2 * laplace_matrix(ops, method)
        root = np.sqrt(ops.hv)
        symmetric = root[:, None] * scaled / root[None, :]
        symmetric = 0.5 * (symmetric + symmetric.T)
        values, vectors = scipy.linalg.eigh(symmetric)
        chosen = np.abs(values) <= self.near_zero
        modes = vectors[:, chosen] / root[:, None]
        if modes.shape[1] == 0:
            return modes
        return scipy.linalg.orth(modes)

    def spectral_radius(self, ops: Operator1DSet, method: InterfaceMethod1D) -> float:
        return float(np.max(np.abs(self.spectrum(ops, method))))


def laplace_spectrum(
    ops: Operator1DSet, method: InterfaceMethod1D, analyzer: Optional[SpectrumAnalyzer] = None
) -> np.ndarray:
    """Sorted real eigenvalues of dx²·L for ``method``."""
    return (analyzer or SpectrumAnalyzer()).spectrum(ops, method)


def laplace_null_modes(ops: Operator1DSet, method: InterfaceMethod1D) -> np.ndarray:
    return SpectrumAnalyzer().null_modes(ops, method)
