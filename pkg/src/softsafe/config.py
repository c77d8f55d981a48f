"""Run configuration files.

INI-style, one section per component; every key is optional and falls back
to the library default. ``[actuator]`` applies to both wires and
``[actuator0]`` / ``[actuator1]`` override individual coefficients::

    [actuator]
    a1 = 0.95
    a2 = 10.0
    a3 = 1.25
    dt = 0.1

    [supervisor]
    enabled = true
    gamma = 0.2
    w_max = 65
    w_lb = 25

    [scenario]
    kind = wall
    theta_ref = 40
    duration = 60

    [body]
    theta_wall = 10

Relative paths (``scenario.trajectory``, ``sim.out``) resolve against the
config file's directory.
"""

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

from softsafe import actuator, limb, supervisor
from softsafe.actuator import ActuatorParams
from softsafe.errors import ConfigError, DomainError
from softsafe.limb import BodyParams, ControllerConfig, Scenario
from softsafe.supervisor import SupervisorConfig

_KEYS = {
    "actuator": {"a1", "a2", "a3", "dt"},
    "actuator0": {"a1", "a2", "a3", "dt"},
    "actuator1": {"a1", "a2", "a3", "dt"},
    "body": {"gain", "stiffness", "damping", "t_act", "theta_wall", "flip"},
    "controller": {"kind", "kp", "ki", "kaw", "lam", "ki_smc", "phi"},
    "supervisor": {"enabled", "gamma", "w_max", "w_lb"},
    "scenario": {"kind", "theta_ref", "duration", "trajectory",
                 "disturbance_start", "disturbance_end", "disturbance"},
    "sim": {"dt", "mismatch", "seed", "noise_std", "sensor_lag", "out"},
}


@dataclass(frozen=True)
class RunConfig:
    actuators: Tuple[ActuatorParams, ActuatorParams] = (ActuatorParams(), ActuatorParams())
    body: BodyParams = field(default_factory=BodyParams)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    supervisor: Optional[SupervisorConfig] = field(default_factory=SupervisorConfig)
    scenario: Scenario = field(default_factory=Scenario)
    dt: Optional[float] = None
    mismatch: float = 1.0
    seed: int = 0
    noise_std: float = 0.0
    sensor_lag: float = 0.0
    out: Optional[Path] = None
    # supervisor settings are kept even when disabled so sweeps can use them
    supervisor_settings: SupervisorConfig = field(default_factory=SupervisorConfig)

    def run_kwargs(self):
        """Keyword arguments for :func:`softsafe.limb.run_closed_loop`."""
        return dict(actuators=self.actuators, body=self.body, controller=self.controller,
                    scenario=self.scenario, seed=self.seed, dt=self.dt,
                    mismatch=self.mismatch, noise_std=self.noise_std,
                    sensor_lag=self.sensor_lag)


def _get(parser, section, key, convert, default):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r}") from None


def _bool(raw):
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _optional_float(raw):
    return None if raw.strip().lower() in ("", "none") else float(raw)


def _actuator(parser, name, base):
    kwargs = {k: _get(parser, name, k, float, getattr(base, k)) for k in ("a1", "a2", "a3", "dt")}
    params = ActuatorParams(**kwargs)
    try:
        return actuator.validate(params)
    except DomainError as exc:
        raise ConfigError(f"{name}.{exc.field}: {exc}") from None


def parse_config(text, base_dir=Path(".")):
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    for section in parser.sections():
        if section not in _KEYS:
            raise ConfigError(f"unknown section [{section}]")
        unknown = set(parser.options(section)) - _KEYS[section]
        if unknown:
            raise ConfigError(f"{section}.{sorted(unknown)[0]}: unknown key")

    shared = _actuator(parser, "actuator", ActuatorParams())
    actuators = (_actuator(parser, "actuator0", shared), _actuator(parser, "actuator1", shared))

    d = BodyParams()
    body = BodyParams(
        gain=_get(parser, "body", "gain", float, d.gain),
        stiffness=_get(parser, "body", "stiffness", float, d.stiffness),
        damping=_get(parser, "body", "damping", float, d.damping),
        t_act=_get(parser, "body", "t_act", float, d.t_act),
        theta_wall=_get(parser, "body", "theta_wall", _optional_float, d.theta_wall),
        flip=_get(parser, "body", "flip", _bool, d.flip),
    )
    try:
        limb.validate_body(body, min(p.equilibrium() for p in actuators))
    except DomainError as exc:
        raise ConfigError(f"body.{exc.field}: {exc}") from None

    d = ControllerConfig()
    controller = ControllerConfig(**{
        k: _get(parser, "controller", k, str if k == "kind" else float, getattr(d, k))
        for k in ("kind", "kp", "ki", "kaw", "lam", "ki_smc", "phi")
    })
    try:
        controller.initial_state()
    except DomainError as exc:
        raise ConfigError(f"controller.{exc.field}: {exc}") from None

    d = SupervisorConfig()
    settings = SupervisorConfig(
        gamma=_get(parser, "supervisor", "gamma", float, d.gamma),
        w_max=_get(parser, "supervisor", "w_max", float, d.w_max),
        w_lb=_get(parser, "supervisor", "w_lb", float, d.w_lb),
    )
    try:
        supervisor.validate_config(settings)
    except DomainError as exc:
        raise ConfigError(f"supervisor.{exc.field}: {exc}") from None
    enabled = _get(parser, "supervisor", "enabled", _bool, True)

    d = Scenario()
    trajectory = None
    traj_path = _get(parser, "scenario", "trajectory", str, None)
    if traj_path:
        trajectory = limb.read_reference_csv(Path(base_dir) / traj_path)
    scenario = Scenario(
        kind=_get(parser, "scenario", "kind", str, d.kind),
        theta_ref=_get(parser, "scenario", "theta_ref", float, d.theta_ref),
        duration=_get(parser, "scenario", "duration", float, d.duration),
        trajectory=trajectory,
        disturbance_start=_get(parser, "scenario", "disturbance_start", float, d.disturbance_start),
        disturbance_end=_get(parser, "scenario", "disturbance_end", float, d.disturbance_end),
        disturbance=_get(parser, "scenario", "disturbance", float, d.disturbance),
    )
    dt = _get(parser, "sim", "dt", float, None)
    limb.validate_scenario(scenario, dt if dt is not None else actuators[0].dt, body)

    out = _get(parser, "sim", "out", str, None)
    return RunConfig(
        actuators=actuators,
        body=body,
        controller=controller,
        supervisor=settings if enabled else None,
        scenario=scenario,
        dt=dt,
        mismatch=_get(parser, "sim", "mismatch", float, 1.0),
        seed=_get(parser, "sim", "seed", int, 0),
        noise_std=_get(parser, "sim", "noise_std", float, 0.0),
        sensor_lag=_get(parser, "sim", "sensor_lag", float, 0.0),
        out=None if out is None else Path(base_dir) / out,
        supervisor_settings=settings,
    )


def load_config(path):
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def actuator_fragment(params, comment=None):
    """Config text carrying one calibrated actuator, usable as a full run config."""
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append("[actuator]")
    for key in ("a1", "a2", "a3", "dt"):
        lines.append(f"{key} = {float(getattr(params, key))!r}")
    return "\n".join(lines) + "\n"


def with_overrides(config, dt=None, mismatch=None):
    changes = {}
    if dt is not None:
        changes["dt"] = float(dt)
    if mismatch is not None:
        changes["mismatch"] = float(mismatch)
    return replace(config, **changes) if changes else config
