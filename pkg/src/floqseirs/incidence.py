"""
Incidence functions ``f(I)`` entering the transmission term ``beta(t) S f(I)``.

Three closed-form families are built in:

* bilinear, ``f(I) = I``
* saturated, ``f(I) = I / (1 + a I)``
* power-saturated, ``f(I) = I / (1 + k I**q)``

Anything else can be supplied as a value/derivative pair with
:meth:`IncidenceFunction.external`.  :func:`check_assumptions` probes the
structural conditions (smoothness, positivity, the ``f - I f'`` bound,
concavity at the origin and the local quadratic lower bound) on a sample grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

_KINDS = ("bilinear", "saturated", "power_saturated", "external")

# Relative slack for comparisons that hold with equality in exact arithmetic.
_EQ_TOL = 8 * np.finfo(float).eps


@dataclass(frozen=True)
class IncidenceFunction:
    """An incidence function together with its first derivative.

    Use the class constructors rather than the raw initializer.

    Examples
    --------
    >>> f = IncidenceFunction.saturated(1.0)
    >>> float(f.value(1.0)), float(f.derivative(1.0))
    (0.5, 0.25)
    """

    kind: str
    a: float = 0.0
    k: float = 0.0
    q: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    deriv: Optional[Callable] = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown incidence kind {self.kind!r}")
        if self.kind == "saturated" and not self.a >= 0:
            raise DomainError("saturation constant a must be >= 0")
        if self.kind == "power_saturated" and not (self.k >= 0 and self.q > 0):
            raise DomainError("power-saturated incidence needs k >= 0 and q > 0")
        if self.kind == "external" and (self.func is None or self.deriv is None):
            raise ValueError("external incidence needs both value and derivative")

    @classmethod
    def bilinear(cls) -> "IncidenceFunction":
        return cls("bilinear")

    @classmethod
    def saturated(cls, a: float) -> "IncidenceFunction":
        return cls("saturated", a=float(a))

    @classmethod
    def power_saturated(cls, k: float, q: float) -> "IncidenceFunction":
        return cls("power_saturated", k=float(k), q=float(q))

    @classmethod
    def external(cls, func: Callable, deriv: Callable, label: str = "") -> "IncidenceFunction":
        """Wrap user callables ``func(I)`` and ``deriv(I)`` (both vectorized)."""
        return cls("external", func=func, deriv=deriv, label=label)

    # The built-in families share the power form; saturated is k=a, q=1.
    def _kq(self):
        if self.kind == "saturated":
            return self.a, 1.0
        return self.k, self.q

    def value(self, I):
        """``f(I)`` without domain checking (safe on tiny negative integrator noise)."""
        if self.kind == "bilinear":
            return np.asarray(I, dtype=float) * 1.0
        if self.kind == "external":
            return np.asarray(self.func(I), dtype=float)
        k, q = self._kq()
        I = np.asarray(I, dtype=float)
        return I / (1.0 + k * np.abs(I) ** q)

    def derivative(self, I):
        """``f'(I)`` without domain checking."""
        I = np.asarray(I, dtype=float)
        if self.kind == "bilinear":
            return np.ones_like(I)
        if self.kind == "external":
            return np.asarray(self.deriv(I), dtype=float) * np.ones_like(I)
        k, q = self._kq()
        u = k * np.abs(I) ** q
        return (1.0 + (1.0 - q) * u) / (1.0 + u) ** 2

    def a3_gap(self, I):
        """``f(I) - I f'(I)``, in closed form for the built-in families."""
        I = np.asarray(I, dtype=float)
        if self.kind == "bilinear":
            return np.zeros_like(I)
        if self.kind == "external":
            return self.value(I) - I * self.derivative(I)
        k, q = self._kq()
        u = k * np.abs(I) ** q
        return q * u * I / (1.0 + u) ** 2

    @property
    def slope_at_zero(self) -> float:
        """``f'(0)``."""
        return float(self.derivative(0.0))

    def curvature_at_zero(self, scale: float = 1.0) -> float:
        """``f''(0)``; analytic for built-in kinds, numeric for external ones.

        ``scale`` is the population scale used to bracket finite-difference
        steps for external functions. Returns ``-inf`` for power-saturated
        incidences with ``q < 1``, whose second derivative blows up at 0.
        """
        if self.kind == "bilinear":
            return 0.0
        if self.kind == "external":
            return _numeric_curvature_at_zero(self.value, scale)
        k, q = self._kq()
        if k == 0.0 or q > 1.0:
            return 0.0
        if q == 1.0:
            return -2.0 * k
        return -np.inf

    def to_dict(self) -> dict:
        if self.kind == "bilinear":
            return {"type": "bilinear"}
        if self.kind == "saturated":
            return {"type": "saturated", "a": self.a}
        if self.kind == "power_saturated":
            return {"type": "power_saturated", "k": self.k, "q": self.q}
        return {"type": "external", "label": self.label}


def _check_nonneg(I):
    arr = np.asarray(I, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("incidence argument I must be >= 0")


def eval_incidence(f: IncidenceFunction, I):
    """Evaluate ``f(I)`` for ``I >= 0``."""
    _check_nonneg(I)
    out = f.value(I)
    return float(out) if np.ndim(out) == 0 else out


def eval_derivative(f: IncidenceFunction, I):
    """Evaluate ``f'(I)`` for ``I >= 0``."""
    _check_nonneg(I)
    out = f.derivative(I)
    return float(out) if np.ndim(out) == 0 else out


def _ladder_estimate(stencil: Callable, scale: float) -> float:
    # Evaluate a one-sided stencil over a decade ladder of steps and keep the
    # estimate where successive steps agree best.
    hs = scale * 10.0 ** -np.arange(2.0, 15.0)
    est = np.array([stencil(h) for h in hs])
    diffs = np.abs(np.diff(est))
    if not np.any(np.isfinite(diffs)):
        return np.nan
    i = int(np.nanargmin(diffs))
    return float(est[i + 1])


def _numeric_slope_at_zero(func: Callable, scale: float) -> float:
    f0 = float(func(0.0))
    return _ladder_estimate(
        lambda h: (-3 * f0 + 4 * float(func(h)) - float(func(2 * h))) / (2 * h), scale)


def _numeric_curvature_at_zero(func: Callable, scale: float) -> float:
    f0 = float(func(0.0))
    return _ladder_estimate(
        lambda h: (2 * f0 - 5 * float(func(h)) + 4 * float(func(2 * h))
                   - float(func(3 * h))) / h**2,
        scale)


@dataclass
class AssumptionReport:
    """Outcome of :func:`check_assumptions`.

    ``a1_mismatch`` is the largest finite-difference disagreement with the
    supplied derivative, relative to ``max |f'|`` on the grid. ``a3_min`` is
    the smallest sampled ``f(I) - I f'(I)``. ``a5_epsilon_star`` is ``None``
    when no radius was found above the search floor.
    """

    a1_smooth: bool
    a1_mismatch: float
    a2_positive: bool
    slope_at_zero: float
    a3_bound: bool
    a3_min: float
    a4_concavity: bool
    curvature_at_zero: float
    a5_epsilon_star: Optional[float]
    grid: np.ndarray

    @property
    def a5_local_bound(self) -> bool:
        return self.a5_epsilon_star is not None

    @property
    def passed(self) -> bool:
        return (self.a1_smooth and self.a2_positive and self.a3_bound
                and self.a4_concavity and self.a5_local_bound)

    def failures(self) -> list:
        names = {"A1": self.a1_smooth, "A2": self.a2_positive, "A3": self.a3_bound,
                 "A4": self.a4_concavity, "A5": self.a5_local_bound}
        return [k for k, ok in names.items() if not ok]

    def to_dict(self) -> dict:
        def num(x):
            return None if x is None or not np.isfinite(x) else float(x)

        return {
            "passed": self.passed,
            "failures": self.failures(),
            "a1_smooth": self.a1_smooth,
            "a1_mismatch": num(self.a1_mismatch),
            "a2_positive": self.a2_positive,
            "slope_at_zero": num(self.slope_at_zero),
            "a3_bound": self.a3_bound,
            "a3_min": num(self.a3_min),
            "a4_concavity": self.a4_concavity,
            "curvature_at_zero": (float(self.curvature_at_zero)
                                  if not np.isnan(self.curvature_at_zero) else None),
            "a5_epsilon_star": num(self.a5_epsilon_star),
            "grid": [float(x) for x in self.grid],
        }


def sample_grid(grid_max: float, grid_points: int) -> np.ndarray:
    """Linear plus geometric grid on ``[0, grid_max]``, dense near 0."""
    n_lin = grid_points // 2
    lin = np.linspace(0.0, grid_max, n_lin)
    geo = np.geomspace(grid_max * 1e-9, grid_max, grid_points - n_lin)
    return np.unique(np.concatenate([lin, geo]))


def _a5_holds(f: IncidenceFunction, eps: float, f1: float, f2: float) -> bool:
    I = eps * np.arange(1, 65) / 64.0
    fv = f.value(I)
    lower = float(f.value(0.0)) + I * f1 + 0.5 * I**2 * f2
    return bool(np.all(fv - lower >= -_EQ_TOL * np.abs(fv)))


def check_assumptions(f: IncidenceFunction, grid_max: float,
                      grid_points: int = 256) -> AssumptionReport:
    """Probe A1-A5 for ``f`` on ``[0, grid_max]``.

    Failures are reported, never raised.
    """
    if not grid_max > 0:
        raise DomainError("grid_max must be positive")
    if grid_points < 16:
        raise DomainError("grid_points must be >= 16")

    grid = sample_grid(grid_max, grid_points)
    with np.errstate(all="ignore"):
        fv = f.value(grid)

        # A1: central differences against the supplied derivative
        pos = grid[grid > 0]
        h = 1e-6 * pos
        num = (f.value(pos + h) - f.value(pos - h)) / (2 * h)
        num0 = _numeric_slope_at_zero(f.value, grid_max)
        num = np.concatenate([[num0], num])
        ana = np.concatenate([[float(f.derivative(0.0))], f.derivative(pos)])
        dscale = np.nanmax(np.abs(ana)) if np.any(np.isfinite(ana)) else np.nan
        if np.all(np.isfinite(num)) and np.all(np.isfinite(ana)) and dscale > 0:
            a1_mismatch = float(np.max(np.abs(num - ana)) / dscale)
        else:
            a1_mismatch = np.inf
        a1 = bool(a1_mismatch <= 1e-5)

        f1 = float(f.derivative(0.0))
        a2 = bool(float(f.value(0.0)) == 0.0 and f1 > 0
                  and np.all(fv[grid > 0] > 0))

        gap = f.a3_gap(grid)
        a3_min = float(np.min(gap))
        a3 = bool(a3_min >= -1e-12 * np.max(np.abs(fv)))

        f2 = f.curvature_at_zero(grid_max)
        a4 = bool(np.isfinite(f2) and f2 <= 0.0)

        eps_star = None
        if np.isfinite(f2) and np.isfinite(f1):
            eps = grid_max / 100.0
            while eps >= 1e-12 * grid_max:
                if _a5_holds(f, eps, f1, f2):
                    eps_star = eps
                    break
                eps /= 2.0

    return AssumptionReport(
        a1_smooth=a1, a1_mismatch=a1_mismatch,
        a2_positive=a2, slope_at_zero=f1,
        a3_bound=a3, a3_min=a3_min,
        a4_concavity=a4, curvature_at_zero=f2,
        a5_epsilon_star=eps_star, grid=grid,
    )
