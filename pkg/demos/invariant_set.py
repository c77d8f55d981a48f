"""Offline certificate: the safe set is invariant under the supervised error dynamics.

Runs the maximal-positive-invariant-set iteration for several gammas and
then for a contracting rotation, where the safe box is not invariant and
the iteration has to carve it down over a few steps.
"""

import numpy as np

from softsafe import polytope, supervisor
from softsafe.actuator import ActuatorParams
from softsafe.supervisor import SupervisorConfig

for gamma in (0.05, 0.2, 0.5, 0.9):
    result = supervisor.verify(ActuatorParams(), SupervisorConfig(gamma=gamma))
    verdict = "SAFE" if result.safe else "UNSAFE"
    print(f"gamma={gamma:<4} iterations={result.iterations} {verdict}")
print(result.invariant_set.to_text())

th = 0.6
A = 0.95 * np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
box = polytope.HPolyhedron(np.vstack([np.eye(2), -np.eye(2)]), np.ones(4))
O_inf, iters = polytope.max_invariant_set(A, box)
print(f"rotation: {iters} iterations, {O_inf.n_rows} facets")
print("corner (1, 1) kept:", bool(O_inf.contains([1.0, 1.0])))
