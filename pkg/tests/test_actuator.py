import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softsafe.actuator import (ActuatorParams, CalibrationSample, augment, augmented_matrices,
                               calibrate, generate_samples, read_calibration_csv, simulate,
                               step, validate, write_calibration_csv)
from softsafe.errors import ConfigError, DomainError, RankDeficient

DEFAULTS = ActuatorParams()

valid_params = st.builds(
    ActuatorParams,
    a1=st.floats(0.01, 0.999),
    a2=st.floats(0.01, 100.0),
    a3=st.floats(0.0, 50.0),
    dt=st.floats(1e-3, 1.0),
)


def test_defaults_validate_and_sit_at_ambient():
    assert validate(DEFAULTS) is DEFAULTS
    # a3 = (1 - a1) * 25 by construction
    assert DEFAULTS.equilibrium() == pytest.approx(25.0, abs=1e-12)


@pytest.mark.parametrize("kwargs, field", [
    (dict(a1=1.0), "a1"),
    (dict(a1=0.0), "a1"),
    (dict(a2=-1.0), "a2"),
    (dict(a2=0.0), "a2"),
    (dict(a3=-0.1), "a3"),
    (dict(dt=0.0), "dt"),
])
def test_validate_names_failing_invariant(kwargs, field):
    with pytest.raises(DomainError) as info:
        validate(ActuatorParams(**kwargs))
    assert info.value.field == field


@pytest.mark.parametrize("u, expected", [(0.0, 25.0), (1.0, 35.0), (0.5, 30.0)])
def test_step_examples(u, expected):
    assert step(DEFAULTS, 25.0, u) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("u", [-0.01, 1.01, np.nan])
def test_step_rejects_inputs_outside_unit_interval(u):
    with pytest.raises(DomainError):
        step(DEFAULTS, 25.0, u)


def test_step_broadcasts_over_arrays():
    w = np.array([25.0, 30.0, 40.0])
    u = np.array([0.0, 0.5, 1.0])
    np.testing.assert_allclose(step(DEFAULTS, w, u), 0.95 * w + 10.0 * u + 1.25)


def test_augmented_matrices_defaults():
    A, B = augmented_matrices(DEFAULTS)
    np.testing.assert_array_equal(A, [[0.95, 1.25], [0.0, 1.0]])
    np.testing.assert_array_equal(B, [10.0, 0.0])


def test_augmented_matrices_reject_invalid():
    with pytest.raises(DomainError):
        augmented_matrices(ActuatorParams(a1=1.0 - 1e-18))


@settings(max_examples=200)
@given(valid_params, st.floats(-50.0, 300.0), st.floats(0.0, 1.0))
def test_augmented_system_reproduces_step(params, w, u):
    A, B = augmented_matrices(params)
    nxt = A @ augment(w) + B * u
    assert nxt[0] == pytest.approx(step(params, w, u), rel=1e-12, abs=1e-9)
    assert nxt[1] == 1.0


@settings(max_examples=300)
@given(valid_params, st.floats(-50.0, 300.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_monotone_in_input(params, w, u1, u2):
    lo, hi = sorted((u1, u2))
    assert step(params, w, lo) <= step(params, w, hi)


@pytest.mark.parametrize("u", [0.0, 0.3, 1.0])
def test_constant_input_converges_to_equilibrium(u):
    traj = simulate(DEFAULTS, 80.0, np.full(2000, u))
    assert traj[-1] == pytest.approx((10.0 * u + 1.25) / 0.05, abs=1e-9)


def _excitation(n, seed=0):
    return np.random.default_rng(seed).uniform(0.0, 1.0, n)


def test_calibrate_recovers_noiseless_defaults():
    data = generate_samples(DEFAULTS, _excitation(50))
    fit = calibrate(data, dt=0.1)
    for name in ("a1", "a2", "a3"):
        assert getattr(fit, name) == pytest.approx(getattr(DEFAULTS, name), abs=1e-8)
    assert fit.dt == 0.1


def test_calibrate_matches_normal_equations_oracle():
    data = generate_samples(DEFAULTS, _excitation(400, seed=3), noise_std=0.2, rng=4)
    X = np.column_stack([data[:, 0], data[:, 1], np.ones(len(data))])
    oracle = np.linalg.solve(X.T @ X, X.T @ data[:, 2])
    fit = calibrate(data)
    np.testing.assert_allclose([fit.a1, fit.a2, fit.a3], oracle, rtol=1e-9)


def test_calibrate_accepts_sample_records():
    data = generate_samples(DEFAULTS, _excitation(20))
    samples = [CalibrationSample(*row) for row in data]
    assert calibrate(samples) == calibrate(data)


def test_calibrate_degenerate_regressors():
    data = np.tile([25.0, 0.5, 30.0], (10, 1))
    with pytest.raises(RankDeficient):
        calibrate(data)


def test_calibrate_needs_three_samples():
    with pytest.raises(RankDeficient):
        calibrate(generate_samples(DEFAULTS, [0.2, 0.8]))


def test_calibrate_rejects_unstable_fit():
    unstable = ActuatorParams(a1=1.02, a2=10.0, a3=1.25)
    data = generate_samples(unstable, _excitation(50))
    with pytest.raises(DomainError) as info:
        calibrate(data)
    assert info.value.field == "a1"


def test_csv_round_trip(tmp_path):
    data = generate_samples(DEFAULTS, _excitation(30))
    path = tmp_path / "log.csv"
    write_calibration_csv(path, data)
    assert path.read_text().splitlines()[0] == "k,w,u,w_next"
    np.testing.assert_array_equal(read_calibration_csv(path), data)


@pytest.mark.parametrize("body, fragment", [
    ("k,w,u,w_next\n0,25,0.5,30\n1,30,1.5,40\n", "row 3"),
    ("k,w,u,w_next\n0,25,abc,30\n", "row 2"),
    ("k,w,u,w_next\n0,25,0.5\n", "row 2"),
    ("k,w,u\n0,25,0.5\n", "header"),
])
def test_csv_errors_name_the_row(tmp_path, body, fragment):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(ConfigError, match=fragment):
        read_calibration_csv(path)
