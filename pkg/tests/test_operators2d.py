"""2D staggered operators on the cubed sphere: assembly, projection, div/grad/curl and the metric."""

import numpy as np
import pytest

from discretization.coriolis import pole_vector
from discretization.differential import apply_Ah, curl, div, grad, mass_flux
from discretization.fields import (
    Basis,
    VectorFieldV,
    interface_jump,
    is_interface_continuous,
    tangential_jump,
)
from discretization.metric import co2contra, pd_criterion, quadrature_dot, quadrature_h
from discretization.operators2d import Discrete2DOperators
from generators.initial_conditions import (
    SOLID_POLE,
    InitialConditionGenerator,
    TestCase,
    case_config,
    solid_rotation_speed,
)
from grid.cubed_sphere import PointSet, SkewedBlockGrid
from operators.sbp1d import OperatorOrder, interpolation_spectral_radius
from tests.conftest import random_covariant, sphere_operators
from utils.errors import BasisMismatchError, ValidationError


def random_h(ops, rng):
    return rng.standard_normal(ops.grid.shape(PointSet.H))


def random_contravariant(ops, rng):
    v = random_covariant(ops.grid, rng)
    # scale to the contravariant magnitude of a unit covariant vector
    return VectorFieldV(v.v1 / ops.grid.a ** 2, v.v2 / ops.grid.a ** 2, Basis.CONTRAVARIANT)


def test_kronecker_forms_match_matrix_free_application(rng):
    ops = sphere_operators(OperatorOrder.ORDER42)
    grid = ops.grid
    inputs = {
        PointSet.H: ("D_h1", "D_h2", "P_h1", "P_h2"),
        PointSet.X1: ("D_1h", "P_1h", "R_1h", "D_1z"),
        PointSet.X2: ("D_2h", "P_2h", "R_2h", "D_2z"),
    }
    matrices = ops.kronecker()
    for pointset, names in inputs.items():
        x = rng.standard_normal(grid.shape(pointset))
        for name in names:
            expected = getattr(ops, name)(x).ravel()
            np.testing.assert_allclose(matrices[name] @ x.ravel(), expected,
                                       rtol=1e-12, atol=1e-12 * np.abs(expected).max(),
                                       err_msg=name)


def test_assembly_is_limited_to_small_grids():
    ops = sphere_operators(OperatorOrder.ORDER21, 32)
    with pytest.raises(ValidationError, match="assembled mode"):
        ops.kronecker()


def test_projection_is_idempotent_and_self_adjoint(ops16, rng):
    h1, h2 = random_h(ops16, rng), random_h(ops16, rng)
    once = apply_Ah(h1, ops16)
    np.testing.assert_allclose(apply_Ah(once, ops16), once, rtol=1e-14, atol=1e-14)
    assert is_interface_continuous(ops16.grid, once)
    assert interface_jump(ops16.grid, h1) > 1e-3

    left = quadrature_h(once, h2, ops16)
    right = quadrature_h(h1, apply_Ah(h2, ops16), ops16)
    assert left == pytest.approx(right, rel=1e-12)


def test_projection_keeps_continuous_fields(ops16):
    z = ops16.grid.points[PointSet.H].xyz[..., 2]
    np.testing.assert_allclose(apply_Ah(z, ops16), z, rtol=0, atol=1e-9 * ops16.grid.a)


def test_divergence_and_gradient_are_anti_adjoint(ops16, rng):
    h = random_h(ops16, rng)
    v = random_contravariant(ops16, rng)
    g = grad(h, ops16)

    terms_h = ops16.H_h * ops16.J_h * h * div(v, ops16)
    terms_v1 = ops16.H_1 * ops16.J_1 * g.v1 * v.v1
    terms_v2 = ops16.H_2 * ops16.J_2 * g.v2 * v.v2
    total = terms_h.sum() + terms_v1.sum() + terms_v2.sum()
    scale = np.abs(terms_v1).sum() + np.abs(terms_v2).sum()
    assert abs(total) <= 1e-10 * scale


def test_divergence_conserves_mass(ops16, rng):
    v = random_contravariant(ops16, rng)
    terms = ops16.H_h * ops16.J_h * div(v, ops16)
    assert abs(terms.sum()) <= 1e-12 * np.abs(terms).sum()


def test_divergence_is_interface_continuous(ops16, rng):
    d = div(random_contravariant(ops16, rng), ops16)
    assert is_interface_continuous(ops16.grid, d)


def test_curl_of_gradient_vanishes(ops16, rng):
    g = grad(random_h(ops16, rng), ops16)
    circulation = curl(g, ops16) * ops16.J_zeta
    scale = np.abs(ops16.D_1z(g.v1)).max()
    assert np.abs(circulation).max() <= 1e-11 * scale


def solid_vorticity_error(Nc):
    ops = sphere_operators(OperatorOrder.ORDER42, Nc)
    config = case_config(TestCase("solid"), Nc, OperatorOrder.ORDER42)
    v = InitialConditionGenerator().solid_velocity(ops.grid, config)
    xyz = ops.grid.points[PointSet.ZETA].xyz
    unit = xyz / np.linalg.norm(xyz, axis=-1, keepdims=True)
    exact = 2 * solid_rotation_speed(config.a) / config.a * (unit @ pole_vector(*SOLID_POLE))
    return np.abs(curl(v, ops) - exact).max() / np.abs(exact).max()


def test_curl_of_rigid_rotation_converges_to_its_vorticity():
    coarse, fine = solid_vorticity_error(16), solid_vorticity_error(32)
    assert coarse < 0.05
    assert fine < 0.5 * coarse


def test_gradient_is_tangentially_continuous(ops16, rng):
    g = grad(random_h(ops16, rng), ops16)
    assert tangential_jump(ops16.grid, g) <= 1e-11 * g.max_abs()


def test_gradient_of_constant_is_zero(ops16):
    g = grad(np.full(ops16.grid.shape(PointSet.H), 3.0), ops16)
    assert g.max_abs() <= 1e-9 / ops16.grid.dx


def test_operators_check_the_basis(ops16, rng):
    covariant = random_covariant(ops16.grid, rng)
    contravariant = co2contra(covariant, ops16)
    with pytest.raises(BasisMismatchError):
        div(covariant, ops16)
    with pytest.raises(BasisMismatchError):
        curl(contravariant, ops16)
    with pytest.raises(BasisMismatchError):
        co2contra(contravariant, ops16)
    with pytest.raises(BasisMismatchError):
        covariant + contravariant
    assert mass_flux(contravariant, ops16).basis is Basis.MASSFLUX


def test_scalar_shape_is_checked(ops16):
    with pytest.raises(ValidationError, match="shape"):
        grad(np.zeros((6, 3, 3)), ops16)


def test_velocity_inner_product_is_symmetric(ops16, rng):
    w = random_covariant(ops16.grid, rng)
    v = random_covariant(ops16.grid, rng)
    assert quadrature_dot(w, v, ops16) == pytest.approx(quadrature_dot(v, w, ops16), rel=1e-12)
    assert quadrature_dot(v, v, ops16) > 0


def test_weighted_metric_is_symmetric_positive_definite():
    ops = sphere_operators(OperatorOrder.ORDER63_WAVE, 12)
    grid = ops.grid

    def weighted(x):
        contra = co2contra(VectorFieldV.from_flat(grid, x, Basis.COVARIANT), ops)
        return np.concatenate([
            (ops.H_1 * ops.J_1 * contra.v1).ravel(),
            (ops.H_2 * ops.J_2 * contra.v2).ravel(),
        ])

    size = grid.size(PointSet.X1) + grid.size(PointSet.X2)
    M = ops.assemble(weighted, size).toarray()
    assert np.abs(M - M.T).max() <= 1e-12 * np.abs(M).max()
    assert np.linalg.eigvalsh(0.5 * (M + M.T)).min() > 0


def test_definiteness_criterion_on_a_skewed_block():
    alpha = np.pi / 3
    ops = Discrete2DOperators(SkewedBlockGrid(24, alpha), OperatorOrder.ORDER42)
    expected = (np.cos(alpha) * interpolation_spectral_radius(ops.ops1d)) ** 2
    assert pd_criterion(ops, seed=3) == pytest.approx(expected, rel=1e-6)


def test_definiteness_criterion_is_seed_independent():
    ops = sphere_operators(OperatorOrder.ORDER42)
    assert pd_criterion(ops, seed=0) == pytest.approx(pd_criterion(ops, seed=7), rel=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("Nc", [48, 96])
def test_definiteness_criterion_on_the_sphere(Nc):
    ops = sphere_operators(OperatorOrder.ORDER63_WAVE, Nc)
    assert pd_criterion(ops) < 0.37
