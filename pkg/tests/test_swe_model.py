"""Linear shallow-water model: tendencies, RK4 stepping, conservation and observers."""

import numpy as np
import pytest

from discretization.coriolis import CoriolisVariant
from discretization.fields import Basis, VectorFieldV
from generators.initial_conditions import DAY, HOUR, TestCase, case_config, initial_condition
from grid.cubed_sphere import PointSet
from model.config import ModelConfig
from model.observers import DiagnosticsRecorder, Observer, SnapshotWriter, TimeMeanAccumulator
from model.snapshot import HEADER, read_snapshot, write_snapshot
from model.state import ModelState
from model.swe import ShallowWaterModel
from operators.sbp1d import OperatorOrder
from tests.conftest import random_covariant, sphere, sphere_operators
from utils.errors import NumericalFailure, ValidationError


NC = 12


def make_model(tag="gauss1", order=OperatorOrder.ORDER42, **overrides):
    case = TestCase(tag, nu=4 if tag == "poor" else None)
    config = case_config(case, NC, order).with_overrides(**overrides)
    return ShallowWaterModel(config, sphere(NC), sphere_operators(order, NC)), case


def random_state(model, rng, speed=10.0):
    h = rng.standard_normal(model.grid.shape(PointSet.H))
    v = random_covariant(model.grid, rng) * (speed * model.grid.a * model.grid.dx)
    return ModelState(0.0, h, v)


def test_rest_state_has_zero_tendencies():
    model, _ = make_model("gauss3")
    dh, dv = model.rhs(model.zero_state())
    assert np.all(dh == 0.0)
    assert dv.max_abs() == 0.0
    assert dv.basis is Basis.COVARIANT


@pytest.mark.parametrize("tag", ["gauss1", "gauss3", "solid"])
@pytest.mark.parametrize(
    "order", [OperatorOrder.ORDER21, OperatorOrder.ORDER63_WAVE], ids=lambda o: o.value
)
def test_semi_discrete_energy_is_conserved(tag, order, rng):
    model, _ = make_model(tag, order)
    state = random_state(model, rng)
    assert model.energy_tendency(state, relative=True) <= 1e-10


@pytest.mark.parametrize("variant", list(CoriolisVariant), ids=lambda v: v.value)
def test_energy_is_conserved_with_every_coriolis_variant(variant, rng):
    model, _ = make_model("solid", coriolis_variant=variant)
    assert model.energy_tendency(random_state(model, rng), relative=True) <= 1e-10


def test_semi_discrete_mass_is_conserved(rng):
    model, _ = make_model("solid")
    state = random_state(model, rng)
    dh, _ = model.rhs(state)
    scale = float(np.sum(np.abs(model.ops.H_h * model.ops.J_h * dh)))
    assert abs(model.mass_tendency(state)) <= 1e-12 * scale


def test_rhs_rejects_contravariant_velocity(rng):
    model, _ = make_model()
    state = random_state(model, rng)
    state.v = VectorFieldV(state.v.v1, state.v.v2, Basis.CONTRAVARIANT)
    with pytest.raises(ValidationError):
        model.rhs(state)


def test_rk4_keeps_the_rest_state():
    model, _ = make_model("gauss3")
    state = model.rk4_step(model.zero_state())
    assert state.t == model.config.dt
    assert np.all(state.h == 0.0)
    assert state.v.max_abs() == 0.0


def test_non_finite_values_raise():
    model, case = make_model()
    state = initial_condition(case, model.grid, model.config)
    state.h[2, 3, 4] = np.nan
    with pytest.raises(NumericalFailure, match="non-finite h at step 5") as info:
        model.rk4_step(state, step=5)
    assert info.value.index is not None


def test_debug_mode_catches_interface_jumps(rng):
    model, case = make_model(debug=True)
    smooth = initial_condition(case, model.grid, model.config)
    model.rk4_step(smooth)

    rough = ModelState(0.0, rng.standard_normal(model.grid.shape(PointSet.H)), smooth.v)
    with pytest.raises(NumericalFailure, match="interface jump"):
        model.rk4_step(rough, step=1)


def test_zero_duration_returns_the_initial_state():
    model, case = make_model()
    initial = initial_condition(case, model.grid, model.config)
    result = model.integrate(initial, 0.0, progress=False)
    assert result.steps == 0
    np.testing.assert_array_equal(result.state.h, initial.h)
    assert len(result.diagnostics) == 2
    assert result.diagnostics[0] == result.diagnostics[1]


def test_duration_must_be_a_non_negative_multiple_of_dt():
    model, case = make_model()
    initial = initial_condition(case, model.grid, model.config)
    with pytest.raises(ValidationError, match="not a multiple"):
        model.integrate(initial, 1.5 * model.config.dt, progress=False)
    with pytest.raises(ValidationError, match="negative"):
        model.steps_for(-model.config.dt)
    assert model.steps_for(4 * model.config.dt) == 4


def energy_series(tag, dt, duration):
    model, case = make_model(tag, dt=dt)
    recorder = DiagnosticsRecorder(every=1)
    model.integrate(initial_condition(case, model.grid, model.config), duration,
                    [recorder], progress=False)
    return recorder


def test_rk4_energy_never_grows_and_mass_is_exact():
    recorder = energy_series("gauss3", 2400.0, 16 * HOUR)
    energy = np.array([d.energy for d in recorder.series])
    assert len(energy) == 25
    assert np.all(np.diff(energy) <= 1e-14 * energy[0])
    assert energy[-1] < energy[0]
    assert recorder.relative_drift("mass") <= 1e-12
    assert recorder.max_relative_jump() <= 1e-10


def test_energy_loss_shrinks_quickly_with_the_time_step():
    coarse = energy_series("gauss1", 2400.0, 16 * HOUR).relative_drift("energy")
    fine = energy_series("gauss1", 1200.0, 16 * HOUR).relative_drift("energy")
    assert 0 < fine < coarse / 10


def test_diagnostics_of_a_constant_height():
    model, _ = make_model()
    state = ModelState(0.0, np.full(model.grid.shape(PointSet.H), 2.0), VectorFieldV.zeros(model.grid))
    diag = model.diagnostics(state)
    assert diag.mass == pytest.approx(2.0 * model.ops.sphere_area(), rel=1e-14)
    assert diag.energy == pytest.approx(0.5 * model.config.g * 4.0 * model.ops.sphere_area(), rel=1e-14)
    assert diag.tangential_jump == 0.0


def test_operators_must_belong_to_the_grid():
    config = case_config(TestCase("gauss1"), NC, OperatorOrder.ORDER42)
    with pytest.raises(ValidationError, match="different grid"):
        ShallowWaterModel(config, sphere(NC), sphere_operators(OperatorOrder.ORDER42, 16))


def test_config_validation_and_overrides():
    with pytest.raises(ValidationError, match="H must be positive"):
        ModelConfig(H=0.0, dt=1.0, Nc=12)
    with pytest.raises(ValidationError, match="coriolis must be one of"):
        ModelConfig(H=1.0, dt=1.0, Nc=12, coriolis="beta")
    config = ModelConfig(H=1.0, dt=1.0, Nc=12)
    with pytest.raises(ValidationError, match="dt must be positive"):
        config.with_overrides(dt=-1.0)
    data = config.with_overrides(order=OperatorOrder.ORDER21).to_dict()
    assert data["order"] == "21"
    assert data["coriolis_variant"] == "main"


def test_observers_validate_their_interval():
    with pytest.raises(ValidationError):
        Observer(every=0)


def test_observers_see_start_interval_and_finish(tmp_path):
    model, case = make_model()
    initial = initial_condition(case, model.grid, model.config)
    writer = SnapshotWriter(tmp_path / "snap", every=2)
    mean = TimeMeanAccumulator(every=1)
    recorder = DiagnosticsRecorder(every=2, path=tmp_path / "diag.csv")
    model.integrate(initial, 3 * model.config.dt, [writer, mean, recorder], progress=False)

    names = sorted(p.name for p in writer.written)
    assert names == sorted(
        f"{field}_{step:07d}.sbpf" for field in ("h", "v1", "v2") for step in (0, 2, 3)
    )
    assert mean.count == 4
    assert [d.t for d in recorder.series] == [0.0, 2 * model.config.dt, 3 * model.config.dt]
    assert (tmp_path / "diag.csv").read_text().startswith("t_seconds,mass,energy,tangential_jump")


def test_time_mean_needs_samples():
    with pytest.raises(ValidationError, match="no samples"):
        TimeMeanAccumulator().mean


def test_snapshot_round_trip(tmp_path, rng):
    values = rng.standard_normal((6, 13, 12))
    path = write_snapshot(tmp_path / "v1.sbpf", values, 12, PointSet.X1)
    snapshot = read_snapshot(path)
    assert snapshot.Nc == 12
    assert snapshot.pointset is PointSet.X1
    np.testing.assert_array_equal(snapshot.values, values)
    assert path.stat().st_size == HEADER.size + values.size * 8


def test_snapshot_rejects_bad_files(tmp_path, rng):
    with pytest.raises(ValidationError, match="does not match"):
        write_snapshot(tmp_path / "h.sbpf", rng.standard_normal((6, 12, 12)), 12, PointSet.H)

    path = write_snapshot(tmp_path / "h.sbpf", rng.standard_normal((6, 13, 13)), 12, PointSet.H)
    data = path.read_bytes()
    (tmp_path / "short.sbpf").write_bytes(data[:-8])
    with pytest.raises(ValidationError, match="expected"):
        read_snapshot(tmp_path / "short.sbpf")
    (tmp_path / "magic.sbpf").write_bytes(b"XXXX" + data[4:])
    with pytest.raises(ValidationError, match="bad magic"):
        read_snapshot(tmp_path / "magic.sbpf")
    (tmp_path / "tiny.sbpf").write_bytes(data[:5])
    with pytest.raises(ValidationError, match="truncated"):
        read_snapshot(tmp_path / "tiny.sbpf")
    (tmp_path / "ragged.sbpf").write_bytes(data[:-3])
    with pytest.raises(ValidationError, match="whole number"):
        read_snapshot(tmp_path / "ragged.sbpf")
    (tmp_path / "pointset.sbpf").write_bytes(data[:12] + bytes([9]) + data[13:])
    with pytest.raises(ValidationError, match="unknown point set 9"):
        read_snapshot(tmp_path / "pointset.sbpf")
    (tmp_path / "version.sbpf").write_bytes(data[:4] + (7).to_bytes(4, "little") + data[8:])
    with pytest.raises(ValidationError, match="unsupported version"):
        read_snapshot(tmp_path / "version.sbpf")


@pytest.mark.slow
def test_long_gaussian_run_conserves_mass_and_energy():
    case = TestCase("gauss1")
    model = ShallowWaterModel(case_config(case, 48))
    recorder = DiagnosticsRecorder(every=model.steps_for(6 * HOUR))
    model.integrate(initial_condition(case, model.grid, model.config), 25 * DAY,
                    [recorder], progress=False)
    # RK4 damping alone accounts for roughly 4e-6 over 25 days at dt = 600 s.
    assert recorder.relative_drift("energy") <= 1e-5
    assert recorder.relative_drift("mass") <= 1e-12
    assert recorder.max_relative_jump() <= 1e-10
