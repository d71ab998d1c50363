"""Extinction below the threshold, persistence above it.

Both runs start from S=1.5e6, E=4e5, I=4e4 and are integrated for 100 years.
With beta0 = 0.0018 the infection dies out and S settles on the disease-free
orbit; with beta0 = 0.005 the infected classes stay bounded away from zero.
"""

from pathlib import Path

import numpy as np

from floqseirs.config import load_config
from floqseirs.experiments import persistence_verdict, simulate

configs = Path(__file__).resolve().parent.parent / "configs"

for name in ("example1.json", "example2.json"):
    cfg = load_config(configs / name)
    traj = simulate(cfg)
    v = persistence_verdict(traj, cfg.params.period_lt, tail_periods=20)
    print(f"{name}: verdict={v.verdict}, extinction_time={v.extinction_time}, "
          f"tail min E={v.tail_min_E:.4g}, I={v.tail_min_I:.4g}")
    for t in (0, 1, 5, 10, 50, 100):
        k = int(np.argmin(np.abs(traj.t - t)))
        S, E, I, R = traj.y[k]
        print(f"  t={t:>3}  S={S:12.2f}  E={E:12.4g}  I={I:12.4g}  R={R:12.2f}")
