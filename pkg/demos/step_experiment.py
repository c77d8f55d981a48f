"""Bend to 40 degrees against a wall at 10 degrees, with and without the supervisor.

The wall stops the limb, the integral term keeps asking for more heat,
and only the supervised run keeps the wire under 65 C.
"""

from pathlib import Path

from softsafe import limb
from softsafe.config import load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

for name in ("step_pi_aw", "step_smc", "wall", "wall_unsupervised"):
    cfg = load_config(CONFIGS / f"{name}.ini")
    records = limb.run_closed_loop(supervisor_config=cfg.supervisor, **cfg.run_kwargs())
    row = limb.summarize(records)
    print(f"{name:18s} max_T0={row.max_T0:8.3f} max_T1={row.max_T1:8.3f} "
          f"final_theta={records[-1].theta:7.3f} activation={row.activation_time}")
