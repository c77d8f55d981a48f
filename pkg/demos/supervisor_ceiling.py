"""How the input ceiling behaves for one wire.

Far below the limit the ceiling is generous; it tightens as the wire heats
and settles at exactly the duty cycle that holds w_max. A controller that
asks for full power all the time is cut back to that ceiling.
"""

from softsafe import actuator, supervisor
from softsafe.actuator import ActuatorParams
from softsafe.supervisor import SupervisorConfig

params = ActuatorParams()
cfg = SupervisorConfig(gamma=0.2, w_max=65.0)

print("ambient", params.equilibrium(0.0), "full-duty equilibrium", params.equilibrium(1.0))
print("w_set", supervisor.w_set(cfg, actuator.augmented_matrices(params)[0]))

w = params.equilibrium()
print(f"{'k':>3} {'w':>9} {'cap':>7} {'applied':>8}")
for k in range(30):
    cap = supervisor.u_max(params, cfg, w)
    out = supervisor.compose([1.0], [cap])
    if k % 3 == 0:
        print(f"{k:3d} {w:9.4f} {cap:7.4f} {out.applied[0]:8.4f}")
    w = actuator.step(params, w, out.applied[0])

# the same greedy request without the supervisor
w_free = params.equilibrium()
for _ in range(30):
    w_free = actuator.step(params, w_free, 1.0)
print(f"after 30 steps: supervised {w:.3f} C, unsupervised {w_free:.3f} C")
