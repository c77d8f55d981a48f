"""Supervisory input saturation that keeps affine soft actuators below a state limit.

Modules:

actuator      affine actuator model, monotonicity preconditions, calibration
polytope      H-polyhedra and the maximal positive invariant set
supervisor    input ceiling law, composition with a pose controller, verification
pose_control  PI with anti-windup and boundary-layer sliding mode controllers
limb          closed-loop simulation of a two-wire antagonistic limb
config, cli   run configuration files and the ``softsafe`` command
"""

from softsafe.actuator import ActuatorParams, calibrate, step, validate
from softsafe.errors import (ConfigError, DimensionMismatch, DomainError, EmptySet,
                             NoConvergence, RankDeficient, Unreachable)
from softsafe.polytope import HPolyhedron, max_invariant_set, safe_set
from softsafe.supervisor import SupervisorConfig, compose, u_max, verify

__version__ = "0.1.0"
