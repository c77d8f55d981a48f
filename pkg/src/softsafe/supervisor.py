"""Supervisory saturating controller for affine actuators.

The supervisor computes, per actuator, an input ceiling u_max(w) that would
carry the state towards the limit w_max geometrically, with the error
w - w_max shrinking by (1 - gamma) * a1 every step. Because the actuator is
monotone in its input, any input at or below that ceiling keeps the state
at or below w_max. :func:`compose` applies the ceiling to whatever an
arbitrary pose controller asked for.
"""

from dataclasses import dataclass

import numpy as np

from softsafe import polytope
from softsafe.actuator import augment, augmented_matrices, validate
from softsafe.errors import DimensionMismatch, DomainError, Unreachable

ACTIVE_TOL = 1e-9
PINV_CUTOFF = 1e-12


@dataclass(frozen=True)
class SupervisorConfig:
    """gamma in (0, 1) sets how aggressively the ceiling approaches w_max.

    w_lb is the physical lower bound used when verifying invariance; it only
    needs to sit below w_max.
    """

    gamma: float = 0.2
    w_max: float = 65.0
    w_lb: float = 25.0


@dataclass
class SupervisedInput:
    applied: np.ndarray
    attempted: np.ndarray
    cap: np.ndarray
    active: np.ndarray


def validate_config(config):
    gamma = np.asarray(config.gamma, dtype=float)
    if not (np.all(gamma > 0.0) and np.all(gamma < 1.0)):
        raise DomainError(f"gamma must lie in (0, 1), got {config.gamma}", "gamma")
    if not np.all(np.asarray(config.w_lb) < np.asarray(config.w_max)):
        raise DomainError(f"w_lb ({config.w_lb}) must be below w_max ({config.w_max})", "w_lb")
    return config


def grammian(A, B, K):
    """Discrete-time controllability Grammian sum_{t<K} A^t B B' (A')^t."""
    if K < 1:
        raise ValueError("horizon K must be at least 1")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    B = np.asarray(B, dtype=float)
    if A.shape != (n, n) or B.shape[0] != n:
        raise DimensionMismatch(f"A must be square and B must have {n} rows; "
                                f"got A {A.shape}, B {B.shape}")
    B = B.reshape(n, -1)
    W = np.zeros((n, n))
    AtB = B
    for _ in range(K):
        W += AtB @ AtB.T
        AtB = A @ AtB
    return W


def pinv(M, cutoff=PINV_CUTOFF):
    """Moore-Penrose pseudoinverse with singular values below ``cutoff`` zeroed."""
    U, s, Vt = np.linalg.svd(M)
    s_inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (Vt.T * s_inv) @ U.T


def min_energy_sequence(A, B, K, w_target, w0, tol=1e-9):
    """Minimum-energy K-step input sequence steering ``w0`` to ``w_target``.

    u(t) = B' (A')^(K-t-1) W_K^+ (w_target - A^K w0),  t = 0 .. K-1.
    Raises :class:`Unreachable` when the target offset is outside the range
    of the Grammian (for the augmented actuator: any change of the affine
    coordinate).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    W = grammian(A, B, K)
    Bm = np.asarray(B, dtype=float).reshape(A.shape[0], -1)
    W_pinv = pinv(W)
    d = np.asarray(w_target, dtype=float) - np.linalg.matrix_power(A, K) @ np.asarray(w0, dtype=float)
    if np.linalg.norm(W @ (W_pinv @ d) - d) > tol * max(1.0, np.linalg.norm(d)):
        raise Unreachable(f"target not reachable in {K} step(s); residual offset {d}")
    lam = W_pinv @ d
    seq = np.array([Bm.T @ np.linalg.matrix_power(A.T, K - t - 1) @ lam for t in range(K)])
    return seq[:, 0] if Bm.shape[1] == 1 else seq


def w_set(config, A):
    """Augmented setpoint whose gamma-scaled closed loop settles exactly at w_max."""
    g = config.gamma
    return (np.eye(2) - (1.0 - g) * np.asarray(A)) @ augment(config.w_max) / g


def u_max(params, config, w):
    """Uncapped input ceiling for one actuator at state ``w``.

    Closed form of gamma B'(BB')^+ (w_set - A [w, 1]) for B = [a2, 0]:

        (w_max - (1-gamma)(a1 w_max + a3) - gamma (a1 w + a3)) / a2

    Broadcasts over array-valued ``w``, parameters and config. The result may
    be negative (state above the limit) or exceed 1; :func:`compose`
    clamps it.
    """
    g = config.gamma
    a1, a2, a3 = params.a1, params.a2, params.a3
    wm = config.w_max
    return (wm - (1.0 - g) * (a1 * wm + a3) - g * (a1 * w + a3)) / a2


def error_matrix(params, gamma):
    """(1 - gamma) A: the supervised error dynamics e(k+1) = (1-gamma) A e(k)."""
    A, _ = augmented_matrices(params)
    return (1.0 - gamma) * A


def is_stable(params, gamma):
    """Spectral-radius test of the supervised error dynamics.

    The matrix is upper triangular, so its eigenvalues are (1-gamma) a1 and
    (1-gamma), the latter coming from the affine coordinate.
    """
    return max(abs((1.0 - gamma) * params.a1), abs(1.0 - gamma)) < 1.0


def compose(attempted, caps, tol=ACTIVE_TOL):
    """Apply the supervisor's ceilings to a pose controller's request.

    applied = clamp(min(attempted, cap), 0, 1); a channel is flagged active
    when the ceiling cut its request by more than ``tol``.
    """
    attempted = np.asarray(attempted, dtype=float)
    caps = np.broadcast_to(np.asarray(caps, dtype=float), attempted.shape)
    applied = np.clip(np.minimum(attempted, caps), 0.0, 1.0)
    active = applied < attempted - tol
    return SupervisedInput(applied=applied, attempted=attempted, cap=caps.copy(), active=active)


def simulate_supervised(params, config, w0, steps):
    """Actuator trajectory under the raw ceiling alone, u(k) = u_max(w(k)).

    Uses the augmented linear dynamics directly so that ceilings outside
    [0, 1] are applied as computed; this is the analytic closed loop, not a
    physical run.
    """
    A, B = augmented_matrices(params)
    wt = augment(w0)
    out = np.empty(steps + 1)
    out[0] = w0
    for k in range(steps):
        wt = A @ wt + B * u_max(params, config, wt[0])
        out[k + 1] = wt[0]
    return out


@dataclass
class Verification:
    invariant_set: polytope.HPolyhedron
    safe_set: polytope.HPolyhedron
    iterations: int
    safe: bool


def verify(params, config, max_iters=100):
    """Offline safety check of the supervised error dynamics.

    Builds the error-coordinate safe set for [w_lb, w_max], runs the
    maximal-invariant-set iteration under (1 - gamma) A, and reports SAFE
    when the result is the whole safe set.
    """
    validate(params)
    validate_config(config)
    S = polytope.safe_set(config.w_max - config.w_lb)
    A_cl = error_matrix(params, config.gamma)
    O_inf, iterations = polytope.max_invariant_set(A_cl, S, max_iters=max_iters)
    return Verification(O_inf, S, iterations, polytope.set_equal(O_inf, S))
