"""Sweep gamma on the 30 degree step with a 60 C limit.

Exact model: every gamma is safe; smaller gammas engage the supervisor
earlier. Then two kinds of model error. An input gain 20% above the model
leaves a steady overshoot that shrinks as gamma grows; a lagging
temperature sensor produces transient overshoot that grows with gamma.
"""

from pathlib import Path

from softsafe import limb
from softsafe.config import load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

for name, gammas in (("sweep", (0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9)),
                     ("sweep_mismatch", (0.6, 0.3, 0.1)),
                     ("sweep_sensor_lag", (0.6, 0.3, 0.1))):
    cfg = load_config(CONFIGS / f"{name}.ini")
    print(name)
    for row in limb.gamma_sweep(gammas, cfg.supervisor_settings, **cfg.run_kwargs()):
        act = "none" if row.activation_time is None else f"{row.activation_time:.1f}s"
        print(f"  gamma={row.gamma:<5} activation={act:>5} "
              f"peak={max(row.max_T0, row.max_T1):8.4f} overshoot={row.overshoot:.4f}")
