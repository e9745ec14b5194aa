"""Closed-domain Laplace spectra and the free-parameter objectives."""

import numpy as np
import pytest

from analyzers.objective_evaluator import (
    ObjectiveEvaluator,
    evaluate_objectives,
    objective_operator_set,
)
from analyzers.spectrum_analyzer import (
    SpectrumAnalyzer,
    laplace_matrix,
    laplace_null_modes,
    laplace_spectrum,
)
from operators.sbp1d import InterfaceMethod1D, OperatorOrder
from tests.conftest import ALL_ORDERS, operator_set
from utils.errors import ValidationError


SAT = InterfaceMethod1D.SAT
PROJ = InterfaceMethod1D.SAT_PROJECTION


def test_order42_sat_has_two_zero_modes_and_an_outlier():
    ops = operator_set(OperatorOrder.ORDER42, 24)
    analyzer = SpectrumAnalyzer()
    sat = laplace_spectrum(ops, SAT, analyzer)
    proj = laplace_spectrum(ops, PROJ, analyzer)

    assert len(sat) == 25
    assert analyzer.count_near_zero(sat) == 2
    assert sat[0] < proj[0]
    assert np.all(np.diff(sat) >= 0)


def test_order21_projection_null_mode_is_the_end_jump():
    ops = operator_set(OperatorOrder.ORDER21, 24)
    modes = laplace_null_modes(ops, PROJ)
    assert modes.shape[1] == 2

    jump = np.zeros(ops.N + 1)
    jump[0], jump[-1] = 1.0, -1.0
    jump /= np.linalg.norm(jump)
    assert np.linalg.norm(modes.T @ jump) >= 1 - 1e-8

    ones = np.ones(ops.N + 1) / np.sqrt(ops.N + 1)
    assert np.linalg.norm(modes.T @ ones) >= 1 - 1e-8


@pytest.mark.parametrize("order", ALL_ORDERS, ids=lambda o: o.value)
def test_projection_spectrum_is_non_positive(order):
    values = laplace_spectrum(operator_set(order, 24), PROJ)
    assert values[-1] <= 1e-9


@pytest.mark.parametrize(
    "order",
    [OperatorOrder.ORDER42, OperatorOrder.ORDER63_POLY, OperatorOrder.ORDER63_WAVE],
    ids=lambda o: o.value,
)
def test_projection_shrinks_the_spectral_radius(order):
    ops = operator_set(order, 24)
    analyzer = SpectrumAnalyzer()
    assert analyzer.spectral_radius(ops, PROJ) < analyzer.spectral_radius(ops, SAT)
    assert analyzer.spectrum(ops, PROJ)[0] >= analyzer.spectrum(ops, SAT)[0] - 1e-12


def test_sat_vertex_derivative_has_a_two_dimensional_kernel():
    from operators.sbp1d import sat_corrected

    ops = operator_set(OperatorOrder.ORDER42, 24)
    DSvc = sat_corrected(ops).DSvc.toarray()
    assert np.linalg.matrix_rank(DSvc, tol=1e-8) == ops.N - 1


def test_pure_method_has_no_closed_spectrum():
    ops = operator_set(OperatorOrder.ORDER42, 24)
    with pytest.raises(ValidationError, match="interface treatment"):
        laplace_spectrum(ops, InterfaceMethod1D.PURE)
    assert laplace_matrix(ops, InterfaceMethod1D.PURE).shape == (25, 25)


def test_interface_method_tags():
    assert InterfaceMethod1D.from_tag("sat-proj") is PROJ
    with pytest.raises(ValidationError):
        InterfaceMethod1D.from_tag("periodic")


def test_wave_and_polynomial_parameters_win_their_own_objective():
    evaluator = ObjectiveEvaluator()
    wave = objective_operator_set(OperatorOrder.ORDER63_WAVE)
    poly = objective_operator_set(OperatorOrder.ORDER63_POLY)

    assert evaluator.wave63(wave) < evaluator.wave63(poly)
    assert evaluator.poly63(poly) < evaluator.poly63(wave)


@pytest.mark.parametrize("k", [4, 8])
def test_wave_residual_is_scaled_by_the_wavenumber(k):
    ops = objective_operator_set(OperatorOrder.ORDER63_WAVE)
    theta = 2 * np.pi / k
    half_sum = (
        75 / 64 * np.sin(theta / 2) - 25 / 384 * np.sin(3 * theta / 2) + 3 / 640 * np.sin(5 * theta / 2)
    )
    interior = slice(16, 33)
    t = np.exp(1j * theta * np.arange(ops.xv.size))
    err = ObjectiveEvaluator().wave_residual(ops, k)
    np.testing.assert_allclose(err[interior], (1 - 4 * half_sum ** 2 / theta ** 2) * t[interior], atol=1e-10)


def test_objectives_are_finite_and_non_negative():
    values = evaluate_objectives(objective_operator_set(OperatorOrder.ORDER42))
    assert set(values) == {"poly63", "wave63", "interp42", "interp63a", "interp63b"}
    for name, value in values.items():
        assert np.isfinite(value) and value >= 0, name


def test_interpolation_objective_vanishes_below_the_exact_degree():
    ops = objective_operator_set(OperatorOrder.ORDER63_POLY)
    assert ObjectiveEvaluator().interpolation(ops, 1) <= 1e-24
