"""Closed-loop simulation of a planar two-wire antagonistic limb.

The body is a damped rotational spring driven by the thresholded
temperature difference of the two wires. It is a stand-in only: the
supervisor never sees it, it just has to produce the qualitative
behaviours (tracking, blocking by a wall, being pushed) the experiments
need. Wires follow the affine actuator model, optionally with a plant whose
input gain differs from the one the supervisor assumes.

Sign convention: e = theta - theta_ref, and the controller output is
negated before :func:`~softsafe.pose_control.siso_map`, so a positive
angle error drives the wire that bends the limb back. With
``BodyParams.flip`` unset, wire 0 bends towards positive theta.
"""

import csv
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from softsafe import actuator, pose_control, supervisor
from softsafe.actuator import ActuatorParams
from softsafe.errors import ConfigError, DomainError
from softsafe.supervisor import SupervisorConfig

SCENARIO_KINDS = ("free_step", "wall", "human_disturbance", "trajectory")
CONTROLLER_KINDS = ("pi_aw", "smc")


@dataclass(frozen=True)
class BodyParams:
    gain: float = 1.0          # deg/s^2 per degC of net activation
    stiffness: float = 4.0     # 1/s^2
    damping: float = 2.0       # 1/s
    t_act: float = 30.0        # degC; wires below this do no work
    theta_wall: Optional[float] = None
    flip: bool = False


def validate_body(body, ambient=actuator.AMBIENT):
    if not body.stiffness > 0:
        raise DomainError("stiffness must be positive", "stiffness")
    if not body.damping > 0:
        raise DomainError("damping must be positive", "damping")
    if not body.gain >= 0:
        raise DomainError("gain must be non-negative", "gain")
    if not body.t_act >= ambient:
        raise DomainError(f"t_act ({body.t_act}) must not be below ambient ({ambient})", "t_act")
    return body


@dataclass(frozen=True)
class LimbState:
    theta: float = 0.0
    theta_dot: float = 0.0
    t0: float = actuator.AMBIENT
    t1: float = actuator.AMBIENT


def activation(T, t_act):
    return max(0.0, T - t_act)


def body_step(state, params, disturbance, dt):
    """Semi-implicit Euler step of the body; returns (theta, theta_dot).

    A configured wall acts as a kinematic stop: crossing it pins theta to
    the wall and zeroes the velocity.
    """
    drive = params.gain * (activation(state.t0, params.t_act) - activation(state.t1, params.t_act))
    if params.flip:
        drive = -drive
    accel = drive - params.stiffness * state.theta - params.damping * state.theta_dot + disturbance
    theta_dot = state.theta_dot + accel * dt
    theta = state.theta + theta_dot * dt
    if params.theta_wall is not None and theta >= params.theta_wall:
        theta, theta_dot = float(params.theta_wall), 0.0
    return theta, theta_dot


@dataclass(frozen=True)
class ControllerConfig:
    kind: str = "pi_aw"
    kp: float = 0.02
    ki: float = 0.01
    kaw: float = 1.0
    lam: float = 0.5
    ki_smc: float = 0.05
    phi: float = 20.0

    def initial_state(self):
        if self.kind == "pi_aw":
            return pose_control.PiAwState(kp=self.kp, ki=self.ki, kaw=self.kaw)
        if self.kind == "smc":
            return pose_control.SmcState(lam=self.lam, ki=self.ki_smc, phi=self.phi)
        raise ConfigError(f"controller.kind must be one of {CONTROLLER_KINDS}, got {self.kind!r}")

    def step(self, state, e, dt):
        if self.kind == "pi_aw":
            return pose_control.pi_aw_step(state, e, dt)
        return pose_control.smc_step(state, e, dt)


@dataclass(frozen=True)
class Scenario:
    """What the limb is asked to do, and what the world does to it.

    ``trajectory`` holds one reference sample per control step. The
    disturbance is an additive angular acceleration (deg/s^2) applied on
    [disturbance_start, disturbance_end).
    """

    kind: str = "free_step"
    theta_ref: float = 40.0
    duration: float = 60.0
    trajectory: Optional[Tuple[float, ...]] = None
    disturbance_start: float = 0.0
    disturbance_end: float = 0.0
    disturbance: float = 0.0

    def n_steps(self, dt):
        return int(round(self.duration / dt))

    def reference(self, k):
        if self.trajectory is not None:
            return self.trajectory[k]
        return self.theta_ref

    def disturbance_at(self, t):
        if self.disturbance_start <= t < self.disturbance_end:
            return self.disturbance
        return 0.0


def validate_scenario(scenario, dt, body=None):
    if scenario.kind not in SCENARIO_KINDS:
        raise ConfigError(f"scenario.kind must be one of {SCENARIO_KINDS}, got {scenario.kind!r}")
    if not scenario.duration > 0:
        raise ConfigError("scenario.duration must be positive")
    if scenario.kind == "trajectory":
        if scenario.trajectory is None:
            raise ConfigError("scenario.trajectory is required for kind 'trajectory'")
        if len(scenario.trajectory) != scenario.n_steps(dt):
            raise ConfigError(f"scenario.trajectory has {len(scenario.trajectory)} samples, "
                              f"duration/dt needs {scenario.n_steps(dt)}")
    if scenario.kind == "wall" and (body is None or body.theta_wall is None):
        raise ConfigError("body.theta_wall is required for kind 'wall'")
    if scenario.kind == "human_disturbance" and not scenario.disturbance_end > scenario.disturbance_start:
        raise ConfigError("scenario disturbance window is empty")
    return scenario


@dataclass(frozen=True)
class TelemetryRecord:
    k: int
    t: float
    theta: float
    theta_ref: float
    T0: float
    T1: float
    v0: float
    v1: float
    cap0: float
    cap1: float
    u0: float
    u1: float
    active0: bool
    active1: bool
    supervisor_enabled: bool = field(default=True)


TELEMETRY_COLUMNS = [f.name for f in fields(TelemetryRecord) if f.name != "supervisor_enabled"]


def run_closed_loop(
    actuators: Sequence[ActuatorParams],
    body: BodyParams,
    controller: ControllerConfig,
    supervisor_config: Optional[SupervisorConfig],
    scenario: Scenario,
    seed: int = 0,
    dt: Optional[float] = None,
    mismatch: float = 1.0,
    noise_std: float = 0.0,
    sensor_lag: float = 0.0,
) -> List[TelemetryRecord]:
    """Simulate the limb under a pose controller, optionally supervised.

    ``supervisor_config=None`` disables the supervisor (infinite ceilings).
    ``mismatch`` scales the plant's input gain a2 relative to the model the
    supervisor uses. ``sensor_lag`` in [0, 1) makes the supervisor read
    first-order filtered temperatures, m <- lag * m + (1 - lag) * T, an
    unmodeled dynamic the supervisor's model knows nothing about; telemetry
    always logs the true temperatures. ``seed`` only feeds the optional
    angle-sensor noise.
    """
    if len(actuators) != 2:
        raise ConfigError(f"need exactly two actuators, got {len(actuators)}")
    for p in actuators:
        actuator.validate(p)
    dt = actuators[0].dt if dt is None else float(dt)
    for i, p in enumerate(actuators):
        if not math.isclose(p.dt, dt, rel_tol=1e-12):
            raise ConfigError(f"actuator{i}.dt = {p.dt} does not match run dt = {dt}")
    if not mismatch > 0:
        raise ConfigError(f"mismatch must be positive, got {mismatch}")
    if not 0.0 <= sensor_lag < 1.0:
        raise ConfigError(f"sensor_lag must lie in [0, 1), got {sensor_lag}")
    ambient = min(p.equilibrium() for p in actuators)
    validate_body(body, ambient)
    validate_scenario(scenario, dt, body)
    if supervisor_config is not None:
        supervisor.validate_config(supervisor_config)
    ctrl_state = controller.initial_state()

    plant = [replace(p, a2=p.a2 * mismatch) for p in actuators]
    rng = np.random.default_rng(seed)
    state = LimbState(0.0, 0.0, plant[0].equilibrium(), plant[1].equilibrium())
    sensed = [state.t0, state.t1]
    records = []
    for k in range(scenario.n_steps(dt)):
        t = k * dt
        ref = scenario.reference(k)
        measured = state.theta + (rng.normal(0.0, noise_std) if noise_std > 0 else 0.0)
        mu, ctrl_state = controller.step(ctrl_state, measured - ref, dt)
        attempted = pose_control.siso_map(-mu)
        if body.flip:
            attempted = attempted[::-1]
        if supervisor_config is None:
            caps = np.array([np.inf, np.inf])
        else:
            caps = np.array([supervisor.u_max(actuators[i], supervisor_config, sensed[i])
                             for i in range(2)])
        out = supervisor.compose(attempted, caps)
        applied = out.applied[::-1] if body.flip else out.applied
        ctrl_state = pose_control.record_applied(ctrl_state, -(applied[0] - applied[1]))
        records.append(TelemetryRecord(
            k, t, state.theta, ref, state.t0, state.t1,
            float(out.attempted[0]), float(out.attempted[1]),
            float(caps[0]), float(caps[1]),
            float(out.applied[0]), float(out.applied[1]),
            bool(out.active[0]), bool(out.active[1]),
            supervisor_config is not None,
        ))
        theta, theta_dot = body_step(state, body, scenario.disturbance_at(t), dt)
        state = LimbState(theta, theta_dot,
                          actuator.step(plant[0], state.t0, out.applied[0]),
                          actuator.step(plant[1], state.t1, out.applied[1]))
        sensed = [sensor_lag * m + (1.0 - sensor_lag) * T
                  for m, T in zip(sensed, (state.t0, state.t1))]
    return records


def column(records, name):
    return np.array([getattr(r, name) for r in records])


def max_temperatures(records):
    return float(column(records, "T0").max()), float(column(records, "T1").max())


def activation_time(records):
    """Time of the first step at which the supervisor cut any input, else None."""
    for r in records:
        if r.active0 or r.active1:
            return r.t
    return None


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    activation_time: Optional[float]
    max_T0: float
    max_T1: float
    final_error: float
    overshoot: float


def summarize(records, w_max=None, gamma=float("nan")):
    max_t0, max_t1 = max_temperatures(records)
    last = records[-1]
    overshoot = 0.0 if w_max is None else max(0.0, max(max_t0, max_t1) - w_max)
    return SweepRow(gamma, activation_time(records), max_t0, max_t1,
                    last.theta - last.theta_ref, overshoot)


def gamma_sweep(gammas, supervisor_config, **run_kwargs):
    """Repeat :func:`run_closed_loop` once per gamma, everything else fixed."""
    gammas = list(gammas)
    if not gammas:
        raise ConfigError("gamma list is empty")
    rows = []
    for g in gammas:
        cfg = replace(supervisor_config, gamma=float(g))
        records = run_closed_loop(supervisor_config=cfg, **run_kwargs)
        rows.append(summarize(records, cfg.w_max, float(g)))
    return rows


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_telemetry_csv(path, records):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TELEMETRY_COLUMNS)
        for r in records:
            writer.writerow([_fmt(getattr(r, name)) for name in TELEMETRY_COLUMNS])


def read_telemetry_csv(path):
    records = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            values = {}
            for name in TELEMETRY_COLUMNS:
                raw = row[name]
                if name == "k":
                    values[name] = int(raw)
                elif name.startswith("active"):
                    values[name] = raw == "1"
                else:
                    values[name] = float(raw)
            records.append(TelemetryRecord(**values))
    return records


def write_sweep_csv(path, rows):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gamma", "activation_time", "max_T0", "max_T1", "final_error", "overshoot"])
        for r in rows:
            act = "" if r.activation_time is None else repr(r.activation_time)
            writer.writerow([repr(r.gamma), act, repr(r.max_T0), repr(r.max_T1),
                             repr(r.final_error), repr(r.overshoot)])


def read_reference_csv(path):
    """Reference trajectory file with header ``t,theta_ref``; returns the angles."""
    path = Path(path)
    refs = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["t", "theta_ref"]:
            raise ConfigError(f"{path}: header must be t,theta_ref")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                refs.append(float(row[1]))
            except (IndexError, ValueError):
                raise ConfigError(f"{path}: row {line_no}: malformed {row}") from None
    return tuple(refs)


def demonstration_trajectory(duration=60.0, dt=0.1, amplitude=35.0, period=20.0):
    """A smooth back-and-forth sweep standing in for a human-recorded motion."""
    t = np.arange(int(round(duration / dt))) * dt
    return tuple(float(v) for v in amplitude * np.sin(2.0 * np.pi * t / period))
