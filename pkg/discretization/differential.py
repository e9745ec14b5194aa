"""Differential - Gradient, divergence and curl on the multi-block grid."""

import numpy as np

from discretization.fields import Basis, VectorFieldV, check_scalar_h
from discretization.operators2d import Discrete2DOperators


def apply_Ah(h: np.ndarray, ops: Discrete2DOperators) -> np.ndarray:
    """Interface projection of an h field; the result is interface-continuous."""
    check_scalar_h(ops.grid, h, "apply_Ah")
    return ops.project_h(h)


def grad(h: np.ndarray, ops: Discrete2DOperators) -> VectorFieldV:
    """Covariant gradient D_hv A_h h."""
    check_scalar_h(ops.grid, h, "grad")
    projected = ops.project_h(h)
    return VectorFieldV(ops.D_h1(projected), ops.D_h2(projected), Basis.COVARIANT)


def mass_flux(v: VectorFieldV, ops: Discrete2DOperators) -> VectorFieldV:
    """u = J_v ṽ."""
    v.require(Basis.CONTRAVARIANT, "mass_flux")
    return VectorFieldV(ops.J_1 * v.v1, ops.J_2 * v.v2, Basis.MASSFLUX)


def div(v: VectorFieldV, ops: Discrete2DOperators) -> np.ndarray:
    """A_h J_h⁻¹ (D_vh + S) J_v ṽ for a contravariant field."""
    v.require(Basis.CONTRAVARIANT, "div")
    u = mass_flux(v, ops)
    flux_div = ops.D_1h(u.v1) + ops.D_2h(u.v2) + ops.sat(u.v1, u.v2)
    return ops.project_h(flux_div / ops.J_h)


def curl(v: VectorFieldV, ops: Discrete2DOperators) -> np.ndarray:
    """Z v = J_ζ⁻¹(−D_1ζ v1 + D_2ζ v2) at the cell-centre points."""
    v.require(Basis.COVARIANT, "curl")
    return (-ops.D_1z(v.v1) + ops.D_2z(v.v2)) / ops.J_zeta
