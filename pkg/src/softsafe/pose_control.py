"""Bounded SISO pose controllers for an antagonistic actuator pair.

Both controllers map an angle error to a scalar command mu in [-1, 1];
:func:`siso_map` splits mu onto the two unidirectional actuators. Step
functions return the successor state instead of mutating.
"""

from dataclasses import dataclass, replace

import numpy as np

from softsafe.errors import DomainError


def sat(x):
    """Unit saturation onto [-1, 1]."""
    if x >= 1.0:
        return 1.0
    if x <= -1.0:
        return -1.0
    return float(x)


def siso_map(mu):
    """Send a positive command to actuator 0 and a negative one to actuator 1."""
    if not -1.0 <= mu <= 1.0:
        raise DomainError(f"SISO command must lie in [-1, 1], got {mu}", "mu")
    if mu >= 0.0:
        return np.array([float(mu), 0.0])
    return np.array([0.0, -float(mu)])


@dataclass(frozen=True)
class PiAwState:
    """PI gains with anti-windup and the controller's memory.

    ``last_mu`` should be the command that was actually applied, which is
    what drives the back-calculation term; ``last_eta`` is the
    pre-saturation output.
    """

    kp: float = 0.02
    ki: float = 0.01
    kaw: float = 1.0
    integral: float = 0.0
    last_mu: float = 0.0
    last_eta: float = 0.0

    def __post_init__(self):
        for name in ("kp", "ki", "kaw"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative", name)


def _check_dt(dt):
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}", "dt")


def pi_aw_step(state, e, dt):
    _check_dt(dt)
    integral = state.integral + e * dt + state.kaw * (state.last_mu - state.last_eta) * dt
    eta = state.kp * e + state.ki * integral
    mu = sat(eta)
    return mu, replace(state, integral=integral, last_mu=mu, last_eta=eta)


@dataclass(frozen=True)
class SmcState:
    """Sliding-mode gains and memory.

    s = de/dt + 2 lam e + ki * integral(e), and mu = sat(s / phi). ``phi``
    is the boundary-layer thickness.
    """

    lam: float = 0.5
    ki: float = 0.05
    phi: float = 20.0
    last_error: float = 0.0
    integral: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lam must be positive, got {self.lam}", "lam")
        if not self.phi > 0:
            raise DomainError(f"phi must be positive, got {self.phi}", "phi")


def sliding_surface(state, e, dt):
    e_dot = (e - state.last_error) / dt
    integral = state.integral + e * dt
    return e_dot + 2.0 * state.lam * e + state.ki * integral, integral


def smc_step(state, e, dt):
    _check_dt(dt)
    s, integral = sliding_surface(state, e, dt)
    mu = sat(s / state.phi)
    return mu, replace(state, last_error=e, integral=integral)


def record_applied(state, mu_applied):
    """Feed back the command that was really applied after any downstream cap.

    Only the PI-AW controller uses it; other states pass through unchanged.
    """
    if isinstance(state, PiAwState):
        return replace(state, last_mu=float(mu_applied))
    return state
