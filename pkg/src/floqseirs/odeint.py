"""
Small dense ODE integration and the linear periodic machinery built on it:
evolution operators, monodromy matrices, spectral radii, Floquet exponents
and the period map of the reduced epidemic system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import RK45

from .errors import NumericalFailure

METHODS = ("adaptive-rk45", "fixed-rk4")


@dataclass(frozen=True)
class SolverConfig:
    """Integrator settings.

    ``step`` is used by ``fixed-rk4``; ``abs_tol``/``rel_tol`` by
    ``adaptive-rk45``. ``abs_tol`` is absolute, so callers integrating
    population counts should rescale it (see :meth:`scaled`).
    """

    method: str = "adaptive-rk45"
    step: float = 1e-3
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_steps: int = 2_000_000

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not (self.step > 0 and self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("step and tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    def scaled(self, scale: float) -> "SolverConfig":
        """Copy with ``abs_tol`` multiplied by a state scale."""
        return replace(self, abs_tol=self.abs_tol * scale)

    def refined(self, factor: float = 2.0) -> "SolverConfig":
        """Copy with tolerances and step divided by ``factor``."""
        return replace(self, abs_tol=self.abs_tol / factor, rel_tol=self.rel_tol / factor,
                       step=self.step / factor)

    def to_dict(self) -> dict:
        return {"method": self.method, "step": self.step, "abs_tol": self.abs_tol,
                "rel_tol": self.rel_tol, "max_steps": self.max_steps}

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        base = cls()
        return cls(
            method=d.get("method", base.method),
            step=float(d.get("step", base.step)),
            abs_tol=float(d.get("abs_tol", base.abs_tol)),
            rel_tol=float(d.get("rel_tol", base.rel_tol)),
            max_steps=int(d.get("max_steps", base.max_steps)),
        )


DEFAULT = SolverConfig()


@dataclass
class Trajectory:
    """Sampled solution: ``t`` has shape ``(n,)``, ``y`` has shape ``(n, dim)``."""

    t: np.ndarray
    y: np.ndarray
    steps: int = 0
    rejected: int = 0
    nfev: int = 0

    @property
    def final(self) -> np.ndarray:
        return self.y[-1]

    def __len__(self):
        return len(self.t)


def _check_finite(y, t):
    if not np.all(np.isfinite(y)):
        raise NumericalFailure(f"non-finite state at t={t}")


def _rk4(rhs, y0, t0, t1, cfg, t_eval):
    stops = [t0] + ([] if t_eval is None else [x for x in t_eval if t0 < x < t1]) + [t1]
    y = np.array(y0, dtype=float)
    ts, ys = [t0], [y.copy()]
    steps = 0
    record_all = t_eval is None
    for a, b in zip(stops[:-1], stops[1:]):
        n = max(1, math.ceil((b - a) / cfg.step - 1e-9))
        h = (b - a) / n
        for i in range(n):
            if steps >= cfg.max_steps:
                raise NumericalFailure(f"step budget {cfg.max_steps} exhausted at t={a + i * h}")
            t = a + i * h
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            steps += 1
            _check_finite(y, t + h)
            if record_all and i < n - 1:
                ts.append(t + h)
                ys.append(y.copy())
        ts.append(b)
        ys.append(y.copy())
    traj = Trajectory(np.array(ts), np.array(ys), steps=steps, rejected=0, nfev=4 * steps)
    if t_eval is not None:
        traj = _select(traj, t_eval)
    return traj


def _select(traj, t_eval):
    idx = np.searchsorted(traj.t, t_eval)
    return replace(traj, t=traj.t[idx], y=traj.y[idx])


def _rk45(rhs, y0, t0, t1, cfg, t_eval):
    solver = RK45(rhs, t0, np.array(y0, dtype=float), t1,
                  rtol=cfg.rel_tol, atol=cfg.abs_tol)
    ts, ys = [t0], [np.array(y0, dtype=float)]
    pending = None if t_eval is None else [x for x in t_eval if x > t0]
    steps = 0
    j = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            raise NumericalFailure(f"step budget {cfg.max_steps} exhausted at t={solver.t}")
        msg = solver.step()
        if solver.status == "failed":
            raise NumericalFailure(f"integrator failed at t={solver.t}: {msg}")
        steps += 1
        _check_finite(solver.y, solver.t)
        if pending is None:
            ts.append(solver.t)
            ys.append(solver.y.copy())
            continue
        dense = None
        while j < len(pending) and pending[j] <= solver.t:
            if pending[j] == solver.t:
                ys.append(solver.y.copy())
            else:
                if dense is None:
                    dense = solver.dense_output()
                ys.append(dense(pending[j]))
            ts.append(pending[j])
            j += 1
    # RK45 spends 2 evaluations on start-up and 6 per attempted step.
    rejected = max(0, (solver.nfev - 2) // 6 - steps)
    traj = Trajectory(np.array(ts), np.array(ys), steps=steps, rejected=rejected, nfev=solver.nfev)
    if t_eval is not None and t_eval[0] > t0:
        traj = replace(traj, t=traj.t[1:], y=traj.y[1:])
    return traj


def integrate(rhs: Callable, y0, t0: float, t1: float,
              cfg: Optional[SolverConfig] = None,
              t_eval: Optional[Sequence[float]] = None) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1``.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y) -> ndarray`` of the same shape as ``y``.
    y0 : array_like
        Initial state.
    t0, t1 : float
        Integration interval, ``t1 > t0``.
    cfg : SolverConfig, optional
        Defaults to adaptive Dormand-Prince 5(4) with ``rel_tol=1e-9``.
    t_eval : sequence of float, optional
        Increasing sample times in ``[t0, t1]``. Without it every accepted
        step is returned.

    Raises
    ------
    NumericalFailure
        On step-budget exhaustion, integrator failure, or a non-finite state.
    """
    cfg = cfg or DEFAULT
    if not t1 > t0:
        raise ValueError("t1 must be greater than t0")
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    _check_finite(y0, t0)
    if t_eval is not None:
        t_eval = np.asarray(t_eval, dtype=float)
        if np.any(np.diff(t_eval) <= 0) or t_eval[0] < t0 or t_eval[-1] > t1:
            raise ValueError("t_eval must be strictly increasing within [t0, t1]")
        t_eval = list(t_eval)

    def f(t, y):
        return np.asarray(rhs(t, y), dtype=float)

    if cfg.method == "fixed-rk4":
        return _rk4(f, y0, t0, t1, cfg, t_eval)
    return _rk45(f, y0, t0, t1, cfg, t_eval)


def evolution_operator(A: Callable, t0: float, t1: float,
                       cfg: Optional[SolverConfig] = None) -> np.ndarray:
    """Fundamental matrix ``Y(t1, t0)`` of ``y' = A(t) y`` with ``Y(t0, t0) = I``.

    All columns are carried together as one flattened system so they share
    the step sequence.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    n = np.atleast_2d(A(t0)).shape[0]
    if t1 == t0:
        return np.eye(n)

    def rhs(t, w):
        return (np.atleast_2d(A(t)) @ w.reshape(n, n)).ravel()

    traj = integrate(rhs, np.eye(n).ravel(), t0, t1, cfg)
    return traj.final.reshape(n, n)


def monodromy(A: Callable, period: float, cfg: Optional[SolverConfig] = None) -> np.ndarray:
    """Evolution operator of a ``period``-periodic generator over ``[0, period]``."""
    return evolution_operator(A, 0.0, period, cfg)


def eigenvalues2(M) -> tuple:
    """Eigenvalues of a 2x2 matrix from its trace and determinant.

    Real pairs avoid cancellation by computing the larger root first and the
    other from the determinant.
    """
    M = np.asarray(M, dtype=float)
    half_tr = 0.5 * (M[0, 0] + M[1, 1])
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    # (a-d)^2/4 + bc avoids subtracting two nearly equal products
    disc = (0.5 * (M[0, 0] - M[1, 1])) ** 2 + M[0, 1] * M[1, 0]
    if disc >= 0:
        big = half_tr + math.copysign(math.sqrt(disc), half_tr)
        small = det / big if big != 0 else 0.0
        return big, small
    root = math.sqrt(-disc)
    return complex(half_tr, root), complex(half_tr, -root)


def spectral_radius(M) -> float:
    """Largest eigenvalue modulus of a square matrix (closed form for 2x2)."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape == (1, 1):
        return abs(float(M[0, 0]))
    if M.shape == (2, 2):
        return float(max(abs(x) for x in eigenvalues2(M)))
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def floquet_exponent(A: Callable, period: float, cfg: Optional[SolverConfig] = None) -> float:
    """Dominant Floquet exponent ``ln(rho(monodromy)) / period``."""
    rho = spectral_radius(monodromy(A, period, cfg))
    if not rho > 0:
        raise NumericalFailure("monodromy spectral radius is not positive")
    return math.log(rho) / period


def poincare_map(params, f, x0, cfg: Optional[SolverConfig] = None) -> np.ndarray:
    """Reduced-system state at ``t = period_lt`` starting from ``x0`` at ``t = 0``."""
    from .model import reduced_field

    cfg = cfg or DEFAULT.scaled(params.N)
    traj = integrate(reduced_field(params, f), x0, 0.0, params.period_lt, cfg)
    return traj.final
