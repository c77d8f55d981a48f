"""Fit the affine actuator model from a logged heating run.

A random duty-cycle schedule is played through the default model, the
successor temperature is corrupted with sensor noise, and ordinary least
squares recovers the coefficients.
"""

import numpy as np

from softsafe import actuator
from softsafe.actuator import ActuatorParams
from softsafe.config import actuator_fragment

truth = ActuatorParams()
rng = np.random.default_rng(1)
for n, sigma in ((50, 0.0), (500, 0.1), (10_000, 0.1)):
    log = actuator.generate_samples(truth, rng.uniform(0, 1, n), noise_std=sigma, rng=rng)
    fit, residuals = actuator.calibrate(log, return_residuals=True)
    print(f"n={n:6d} sigma={sigma}: a1={fit.a1:.5f} a2={fit.a2:.4f} a3={fit.a3:.4f} "
          f"rms={np.sqrt(np.mean(residuals ** 2)):.3e}")

print(actuator_fragment(fit, comment="ready to drop into a run config"))
