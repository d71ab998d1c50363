"""
Long-horizon simulations, extinction/persistence verdicts and beta0 sweeps.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .config import RunConfig
from .errors import AssumptionViolation, NumericalFailure
from .model import reduced_field
from .odeint import SolverConfig, Trajectory, integrate
from .reproduction import r0_solve

log = logging.getLogger(__name__)


def sample_times(horizon: float, interval: float) -> np.ndarray:
    n = int(np.floor(horizon / interval + 1e-9))
    ts = np.arange(n + 1) * interval
    if horizon - ts[-1] > 1e-9 * interval:
        ts = np.append(ts, horizon)
    else:
        ts[-1] = horizon
    return ts


def simulate(config: RunConfig, horizon: Optional[float] = None,
             solver: Optional[SolverConfig] = None) -> Trajectory:
    """Integrate the reduced system; returned states are ``(S, E, I, R)``."""
    horizon = config.horizon if horizon is None else horizon
    ts = sample_times(horizon, config.sample_interval)
    traj = integrate(reduced_field(config.params, config.incidence), config.initial,
                     0.0, horizon, solver or config.solver, t_eval=ts)
    R = config.params.N - traj.y.sum(axis=1)
    return replace(traj, y=np.column_stack([traj.y, R]))


@dataclass
class PersistenceVerdict:
    """Tail statistics of a simulated trajectory.

    ``tail_min_E``/``tail_min_I`` are the sampled minima over the last
    ``tail_periods`` periods; they are the empirical persistence level.
    """

    tail_periods: int
    tail_min_E: float
    tail_min_I: float
    extinction_time: Optional[float]
    verdict: str

    def to_dict(self) -> dict:
        return asdict(self)


def persistence_verdict(traj: Trajectory, period: float, tail_periods: int,
                        floor: float = 1e-3, threshold: float = 1.0) -> PersistenceVerdict:
    """Classify a trajectory as ``extinct``, ``persistent`` or ``undetermined``.

    Extinction is the first sample with ``E + I < threshold``; it takes
    precedence over the tail test.
    """
    t = traj.t
    E, I = traj.y[:, 1], traj.y[:, 2]
    tail = t >= t[-1] - tail_periods * period - 1e-12
    min_e, min_i = float(np.min(E[tail])), float(np.min(I[tail]))
    below = np.nonzero(E + I < threshold)[0]
    ext = float(t[below[0]]) if below.size else None
    if ext is not None:
        verdict = "extinct"
    elif min_e >= floor and min_i >= floor:
        verdict = "persistent"
    else:
        verdict = "undetermined"
    return PersistenceVerdict(tail_periods, min_e, min_i, ext, verdict)


def persist_check(config: RunConfig, tail_periods: Optional[int] = None,
                  floor: Optional[float] = None, threshold: Optional[float] = None,
                  horizon: Optional[float] = None,
                  solver: Optional[SolverConfig] = None) -> PersistenceVerdict:
    tail_periods = config.tail_periods if tail_periods is None else tail_periods
    horizon = config.horizon if horizon is None else horizon
    if horizon < 3 * tail_periods * config.params.period_lt:
        raise ValueError("horizon must cover at least three tail windows")
    traj = simulate(config, horizon=horizon, solver=solver)
    return persistence_verdict(
        traj, config.params.period_lt, tail_periods,
        config.persistence_floor if floor is None else floor,
        config.extinction_threshold if threshold is None else threshold,
    )


def _sweep_row(args):
    config_dict, beta0, tol = args
    config = RunConfig.from_dict(config_dict).with_beta0(beta0)
    try:
        rep = r0_solve(config.params, config.incidence, tol=tol)
        return (beta0, rep.r0_avg, rep.r0, rep.classification)
    except (NumericalFailure, AssumptionViolation) as exc:
        return (beta0, float("nan"), float("nan"), f"error: {exc}")


def sweep(config: RunConfig, beta0_min: float, beta0_max: float, steps: int,
          tol: Optional[float] = None, jobs: int = 1) -> list:
    """Rows ``(beta0, r0_avg, r0, classification)`` on a uniform beta0 grid.

    Rows are computed independently (in worker processes when ``jobs > 1``)
    and returned in increasing ``beta0`` order.
    """
    if not (0 < beta0_min < beta0_max):
        raise ValueError("need 0 < beta0_min < beta0_max")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    tol = config.r0_tol if tol is None else tol
    work = [(config.to_dict(), float(b), tol) for b in np.linspace(beta0_min, beta0_max, steps)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, work))
    return [_sweep_row(w) for w in work]
