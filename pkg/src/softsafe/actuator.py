"""Affine single-state actuator model.

Each actuator evolves as

    w(k+1) = a1 * w(k) + a2 * u(k) + a3,      u in [0, 1]

which, with the augmented state [w, 1], is the linear single-input system
w~(k+1) = A w~(k) + B u(k) with A = [[a1, a3], [0, 1]] and B = [a2, 0].
For a Joule-heated SMA wire w is the temperature in degC and u the PWM duty
cycle; a3 / (1 - a1) is then the ambient temperature.

Everything here accepts numpy arrays as well as floats so that batches of
actuators can be stepped at once.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from softsafe.errors import ConfigError, DomainError, RankDeficient

AMBIENT = 25.0


@dataclass(frozen=True)
class ActuatorParams:
    """Lumped coefficients of the affine actuator model.

    a1   decay factor per step, in (0, 1)
    a2   state units per unit input per step, > 0
    a3   state units per step, >= 0
    dt   seconds per step (carried for controllers and timestamps;
         the coefficients already absorb it)

    The defaults put the zero-input equilibrium at 25 degC.
    """

    a1: float = 0.95
    a2: float = 10.0
    a3: float = 1.25
    dt: float = 0.1

    def equilibrium(self, u=0.0):
        """Fixed point of the model under a constant input."""
        return (self.a2 * u + self.a3) / (1.0 - self.a1)


@dataclass(frozen=True)
class CalibrationSample:
    w_k: float
    u_k: float
    w_next: float


def validate(params):
    """Return ``params`` unchanged if every model invariant holds.

    Works elementwise when the fields are arrays (all entries must pass).
    """
    a1, a2, a3, dt = (np.asarray(v, dtype=float) for v in
                      (params.a1, params.a2, params.a3, params.dt))
    if not (np.all(a1 > 0.0) and np.all(a1 < 1.0)):
        raise DomainError(f"a1 must lie in (0, 1), got {params.a1}", "a1")
    if not np.all(a2 > 0.0):
        raise DomainError(f"a2 must be positive, got {params.a2}", "a2")
    if not np.all(a3 >= 0.0):
        raise DomainError(f"a3 must be non-negative, got {params.a3}", "a3")
    if not np.all(dt > 0.0):
        raise DomainError(f"dt must be positive, got {params.dt}", "dt")
    return params


def _check_input(u):
    arr = np.asarray(u, dtype=float)
    if arr.size and (np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr))):
        raise DomainError(f"input must lie in [0, 1], got {u}", "u")


def step(params, w, u):
    """Advance the actuator state one step.

    Inputs outside [0, 1] are rejected rather than clamped; clamping is the
    controller's responsibility.
    """
    _check_input(u)
    return params.a1 * w + params.a2 * u + params.a3


def augment(w):
    """Affine augmentation [w, 1]."""
    return np.array([float(w), 1.0])


def augmented_matrices(params):
    """(A, B) of the augmented linear system w~(k+1) = A w~(k) + B u(k)."""
    validate(params)
    A = np.array([[params.a1, params.a3],
                  [0.0, 1.0]])
    B = np.array([params.a2, 0.0])
    return A, B


def simulate(params, w0, inputs):
    """Open-loop trajectory [w(0), ..., w(K)] under an input sequence."""
    inputs = np.asarray(inputs, dtype=float)
    w = np.empty(len(inputs) + 1)
    w[0] = w0
    for k, u in enumerate(inputs):
        w[k + 1] = step(params, w[k], u)
    return w


SampleData = Union[Sequence[CalibrationSample], np.ndarray]


def _as_triples(samples):
    if isinstance(samples, np.ndarray):
        data = np.asarray(samples, dtype=float)
    else:
        data = np.array([[s.w_k, s.u_k, s.w_next] for s in samples], dtype=float)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ValueError("calibration data must be rows of (w_k, u_k, w_next)")
    return data


def calibrate(samples: SampleData, dt: float = 0.1, return_residuals: bool = False):
    """Least-squares fit of (a1, a2, a3) to logged (w_k, u_k, w_next) triples.

    Minimizes sum (w_next - a1 w_k - a2 u_k - a3)^2. The fitted model is
    passed through :func:`validate`, so data from an unstable or
    non-monotone actuator raises :class:`DomainError`.

    With ``return_residuals`` the per-sample residuals are returned as well.
    """
    data = _as_triples(samples)
    if len(data) < 3:
        raise RankDeficient(f"need at least 3 samples to fit 3 coefficients, got {len(data)}")
    u = data[:, 1]
    if np.any(u < 0.0) or np.any(u > 1.0):
        bad = int(np.flatnonzero((u < 0.0) | (u > 1.0))[0])
        raise DomainError(f"sample {bad}: input {u[bad]} outside [0, 1]", "u")

    X = np.column_stack([data[:, 0], u, np.ones(len(data))])
    y = data[:, 2]
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < 3:
        raise RankDeficient("regressors [w, u, 1] are collinear; "
                            "vary both the state and the input")
    params = validate(ActuatorParams(a1=float(coef[0]), a2=float(coef[1]),
                                     a3=float(coef[2]), dt=float(dt)))
    if return_residuals:
        return params, y - X @ coef
    return params


def generate_samples(params, inputs: Iterable[float], w0=None, noise_std=0.0, rng=None):
    """Synthetic calibration log from the model, optionally with noise on w_next.

    The state is propagated noise-free; noise only corrupts the logged
    successor, as a sensor would.
    """
    w = params.equilibrium() if w0 is None else float(w0)
    rng = np.random.default_rng(rng)
    rows = []
    for u in inputs:
        w_next = params.a1 * w + params.a2 * u + params.a3
        logged = w_next + (rng.normal(0.0, noise_std) if noise_std > 0 else 0.0)
        rows.append((w, u, logged))
        w = w_next
    return np.array(rows, dtype=float)


def read_calibration_csv(path):
    """Parse a ``k,w,u,w_next`` log into an (N, 3) array of (w, u, w_next).

    Errors carry the 1-based line number of the offending row.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ConfigError(f"{path}: empty file") from None
        expected = ["k", "w", "u", "w_next"]
        if header != expected:
            raise ConfigError(f"{path}: header must be {','.join(expected)}, got {','.join(header)}")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ConfigError(f"{path}: row {line_no}: expected 4 fields, got {len(row)}")
            try:
                _, w, u, w_next = (float(c) for c in row)
            except ValueError:
                raise ConfigError(f"{path}: row {line_no}: non-numeric field in {row}") from None
            if not 0.0 <= u <= 1.0:
                raise ConfigError(f"{path}: row {line_no}: u={u} outside [0, 1]")
            rows.append((w, u, w_next))
    return np.array(rows, dtype=float).reshape(-1, 3)


def write_calibration_csv(path, data):
    data = _as_triples(data)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "w", "u", "w_next"])
        for k, (w, u, w_next) in enumerate(data):
            writer.writerow([k, repr(float(w)), repr(float(u)), repr(float(w_next))])
