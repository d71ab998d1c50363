"""
Disease-free periodic solution and its perturbed variant.

Both are instances of the scalar linear periodic problem

    S'(t) = c - rate(t) S(t),    rate > 0 and LT-periodic,

whose unique periodic solution starts at

    S*(0) = c * int_0^LT exp(P(s)) ds / (exp(P(LT)) - 1),   P(s) = int_0^s rate.

The starting value comes from nested adaptive quadrature; the rest of the
orbit is filled in by integrating the ODE over one period.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import DomainError, NumericalFailure
from .incidence import IncidenceFunction
from .model import ModelParams
from .odeint import SolverConfig, integrate

N_SAMPLES = 1024
_QUAD = dict(epsabs=0.0, epsrel=1e-13, limit=200)


@dataclass
class PeriodicSolution:
    """A periodic scalar orbit stored on a uniform grid of one period.

    Calling the object evaluates a periodic cubic spline through the stored
    samples at any ``t`` (reduced modulo the period).
    """

    initial: float
    period: float
    times: np.ndarray
    values: np.ndarray
    method: str
    contraction: float
    periodicity_defect: float
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals[-1] = vals[0]
        self._spline = CubicSpline(self.times, vals, bc_type="periodic")

    def __call__(self, t):
        out = self._spline(np.mod(t, self.period))
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, t):
        out = self._spline(np.mod(t, self.period), 1)
        return float(out) if np.ndim(out) == 0 else out

    def mean(self) -> float:
        return float(self._spline.integrate(0.0, self.period)) / self.period

    def minimum(self, n: int = 4096) -> float:
        return float(np.min(self(np.linspace(0.0, self.period, n, endpoint=False))))

    def maximum(self, n: int = 4096) -> float:
        return float(np.max(self(np.linspace(0.0, self.period, n, endpoint=False))))


def _fixed_point_start(c: float, rate: Callable, period: float):
    def cum(s):
        return quad(rate, 0.0, s, **_QUAD)[0]

    total = cum(period)
    if not total > 0:
        raise NumericalFailure("rate integral over one period must be positive")
    outer = quad(lambda s: math.exp(cum(s)), 0.0, period, **_QUAD)[0]
    return c * outer / math.expm1(total), total


def _tight(scale: float) -> SolverConfig:
    return SolverConfig(rel_tol=1e-12, abs_tol=1e-12 * max(scale, 1.0))


def periodic_fixed_point(c: float, rate: Callable, period: float,
                         cfg: Optional[SolverConfig] = None,
                         n_samples: int = N_SAMPLES) -> PeriodicSolution:
    """Unique ``period``-periodic solution of ``S' = c - rate(t) S``.

    Parameters
    ----------
    c : float
        Constant forcing, ``c >= 0``.
    rate : callable
        Positive periodic loss rate.
    period : float
        Common period.
    cfg : SolverConfig, optional
        Integrator used to propagate the orbit; defaults to ``rel_tol=1e-12``.
    n_samples : int
        Number of grid intervals stored per period.

    The returned ``contraction`` is ``exp(-int_0^period rate)``, the factor by
    which the one-period map shrinks distances.
    """
    if c < 0:
        raise DomainError(f"forcing must be non-negative, got {c}")
    s0, total = _fixed_point_start(c, rate, period)
    times = np.linspace(0.0, period, n_samples + 1)
    if c == 0.0:
        values = np.zeros_like(times)
        defect = 0.0
    else:
        traj = integrate(lambda t, y: c - rate(t) * y, [s0], 0.0, period,
                         cfg or _tight(s0), t_eval=times)
        values = traj.y[:, 0]
        defect = abs(values[-1] - s0) / abs(s0)
    return PeriodicSolution(
        initial=s0, period=period, times=times, values=values,
        method="quadrature-formula", contraction=math.exp(-total),
        periodicity_defect=defect,
    )


def period_map(c: float, rate: Callable, period: float, s0: float,
               cfg: Optional[SolverConfig] = None) -> float:
    """One-period solution map of ``S' = c - rate(t) S`` started at ``t = 0``."""
    traj = integrate(lambda t, y: c - rate(t) * y, [s0], 0.0, period, cfg or _tight(abs(s0)))
    return float(traj.final[0])


def s_hat_initial(params: ModelParams) -> float:
    """Starting value of the disease-free periodic susceptible orbit."""
    return _fixed_point_start(params.inflow, params.dfe_rate, params.period_lt)[0]


@functools.lru_cache(maxsize=64)
def disease_free_solution(params: ModelParams) -> PeriodicSolution:
    """Disease-free periodic orbit ``(S_hat(t), 0, 0)``, cached per parameter set."""
    return periodic_fixed_point(params.inflow, params.dfe_rate, params.period_lt)


def s_hat(params: ModelParams, t):
    return disease_free_solution(params)(t)


def perturbed_solution(params: ModelParams, f: IncidenceFunction, alpha: float) -> PeriodicSolution:
    """Periodic orbit of the susceptible equation with infection bounded by ``alpha``.

    Solves ``S' = c - 2 delta alpha - (beta(t) f'(0) alpha + mu + r(t) + delta) S``
    with ``c = N (mu (1 - p) + delta)``; reduces to the disease-free orbit at
    ``alpha = 0``.
    """
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    forcing = params.inflow - 2.0 * params.delta * alpha
    if not forcing > 0:
        raise DomainError(f"alpha={alpha} makes the susceptible forcing non-positive")
    slope = f.slope_at_zero

    def rate(t):
        return params.beta(t) * slope * alpha + params.dfe_rate(t)

    return periodic_fixed_point(forcing, rate, params.period_lt)


def s_hat_perturbed(params: ModelParams, f: IncidenceFunction, alpha: float, t):
    return perturbed_solution(params, f, alpha)(t)


def select_eta(solution: PeriodicSolution, n: int = 256) -> float:
    """Half the sampled minimum of the orbit, so ``S_hat(t) - eta`` stays positive."""
    ts = np.linspace(0.0, solution.period, n, endpoint=False)
    return 0.5 * float(np.min(solution(ts)))
