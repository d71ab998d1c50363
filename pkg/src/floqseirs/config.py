"""
Run configuration: a single JSON document.

Top-level keys are the model parameters (``N``, ``mu``, ``p``, ``sigma``,
``gamma``, ``delta``, ``beta``, ``r``, ``period_lt``) plus

``incidence``
    ``{"type": "bilinear"}``, ``{"type": "saturated", "a": ...}``,
    ``{"type": "power_saturated", "k": ..., "q": ...}`` or
    ``{"type": "expression", "f": "<sympy expression in I>", "df": optional}``.
``initial``
    ``{"S": ..., "E": ..., "I": ...}``; ``R`` is implied as ``N - S - E - I``.
``horizon``, ``sample_interval``
    Simulation length and output spacing, in years.
``solver``
    :class:`~floqseirs.odeint.SolverConfig` fields. ``abs_tol`` is in
    individuals and defaults to ``1e-10 * N``.
``r0_tol``, ``extinction_threshold``, ``persistence_floor``, ``tail_periods``
    Optional analysis settings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .incidence import IncidenceFunction
from .model import ModelParams, validate
from .odeint import SolverConfig


class ConfigError(ValueError):
    """The configuration is malformed or violates a model invariant."""


def incidence_from_dict(d: dict) -> IncidenceFunction:
    kind = d.get("type")
    if kind == "bilinear":
        return IncidenceFunction.bilinear()
    if kind == "saturated":
        return IncidenceFunction.saturated(float(d["a"]))
    if kind == "power_saturated":
        return IncidenceFunction.power_saturated(float(d["k"]), float(d["q"]))
    if kind == "expression":
        return _expression_incidence(d["f"], d.get("df"))
    raise ConfigError(f"unknown incidence type {kind!r}")


def _expression_incidence(expr: str, dexpr: Optional[str]) -> IncidenceFunction:
    import sympy

    I = sympy.Symbol("I", nonnegative=True)
    try:
        fe = sympy.sympify(expr, locals={"I": I})
        de = sympy.sympify(dexpr, locals={"I": I}) if dexpr else sympy.diff(fe, I)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse incidence expression: {exc}") from exc
    if fe.free_symbols - {I} or de.free_symbols - {I}:
        raise ConfigError("incidence expression may only depend on I")
    fn = sympy.lambdify(I, fe, "numpy")
    dfn = sympy.lambdify(I, de, "numpy")

    def value(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(fn(x), x.shape).astype(float)

    def deriv(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(dfn(x), x.shape).astype(float)

    return IncidenceFunction.external(value, deriv, label=str(expr))


@dataclass
class RunConfig:
    params: ModelParams
    incidence: IncidenceFunction
    incidence_spec: dict
    initial: tuple = (0.0, 0.0, 0.0)
    horizon: float = 100.0
    sample_interval: float = 0.01
    solver: SolverConfig = field(default_factory=SolverConfig)
    r0_tol: float = 1e-7
    extinction_threshold: float = 1.0
    persistence_floor: float = 1e-3
    tail_periods: int = 20

    @property
    def initial_r(self) -> float:
        return self.params.N - sum(self.initial)

    def with_beta0(self, beta0: float) -> "RunConfig":
        return replace(self, params=self.params.with_beta0(beta0))

    def check(self) -> None:
        """Raise :class:`ConfigError` on any invariant violation."""
        report = validate(self.params)
        problems = list(report.violations)
        if any(x < 0 for x in self.initial):
            problems.append("initial conditions must be non-negative")
        if sum(self.initial) > self.params.N * (1 + 1e-9):
            problems.append("S0 + E0 + I0 exceeds N")
        if not self.horizon > 0:
            problems.append("horizon must be positive")
        if not self.sample_interval > 0:
            problems.append("sample_interval must be positive")
        if not self.r0_tol > 0:
            problems.append("r0_tol must be positive")
        if problems:
            raise ConfigError("; ".join(problems))

    def to_dict(self) -> dict:
        d = self.params.to_dict()
        d["incidence"] = dict(self.incidence_spec)
        S, E, I = self.initial
        d["initial"] = {"S": S, "E": E, "I": I}
        d["horizon"] = self.horizon
        d["sample_interval"] = self.sample_interval
        d["solver"] = self.solver.to_dict()
        d["r0_tol"] = self.r0_tol
        d["extinction_threshold"] = self.extinction_threshold
        d["persistence_floor"] = self.persistence_floor
        d["tail_periods"] = self.tail_periods
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            params = ModelParams.from_dict(d)
            spec = dict(d.get("incidence", {"type": "bilinear"}))
            incidence = incidence_from_dict(spec)
            init = d.get("initial", {})
            initial = (float(init.get("S", 0.0)), float(init.get("E", 0.0)), float(init.get("I", 0.0)))
            solver_d = dict(d.get("solver", {}))
            solver_d.setdefault("abs_tol", 1e-10 * params.N)
            cfg = cls(
                params=params, incidence=incidence, incidence_spec=spec,
                initial=initial,
                horizon=float(d.get("horizon", 100.0)),
                sample_interval=float(d.get("sample_interval", 0.01)),
                solver=SolverConfig.from_dict(solver_d),
                r0_tol=float(d.get("r0_tol", 1e-7)),
                extinction_threshold=float(d.get("extinction_threshold", 1.0)),
                persistence_floor=float(d.get("persistence_floor", 1e-3)),
                tail_periods=int(d.get("tail_periods", 20)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from exc
        return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return RunConfig.from_dict(data)
