"""
Parameters and right-hand sides of the periodic SEIRS system.

The full system tracks ``(S, E, I, R)`` with constant total ``N``; the reduced
system eliminates ``R = N - S - E - I`` and is what the rest of the package
integrates. Time is in years.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Tuple

import numpy as np

from .errors import DomainError
from .incidence import IncidenceFunction

_FORMS = ("constant", "cosine", "tabulated")


@dataclass(frozen=True)
class PeriodicCoefficient:
    """A positive periodic rate ``c(t)``.

    ``cosine``: ``offset + amplitude * cos(2 pi t / period)``.
    ``tabulated``: ``samples`` are equally spaced over one period starting at
    ``t = 0`` and interpolated linearly with periodic wrap-around.
    """

    form: str
    offset: float = 0.0
    amplitude: float = 0.0
    period: float = 1.0
    samples: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ValueError(f"unknown coefficient form {self.form!r}")
        object.__setattr__(self, "samples", tuple(float(x) for x in self.samples))
        if self.form == "tabulated" and len(self.samples) < 2:
            raise ValueError("tabulated coefficient needs at least two samples")

    @classmethod
    def constant(cls, value: float, period: float = 1.0) -> "PeriodicCoefficient":
        return cls("constant", offset=float(value), period=float(period))

    @classmethod
    def cosine(cls, offset: float, amplitude: float, period: float = 1.0) -> "PeriodicCoefficient":
        return cls("cosine", offset=float(offset), amplitude=float(amplitude), period=float(period))

    @classmethod
    def tabulated(cls, samples, period: float = 1.0) -> "PeriodicCoefficient":
        return cls("tabulated", period=float(period), samples=tuple(samples))

    def __call__(self, t):
        if self.form == "constant":
            return self.offset + 0.0 * np.asarray(t, dtype=float)
        if self.form == "cosine":
            return self.offset + self.amplitude * np.cos(2.0 * np.pi * np.asarray(t, dtype=float) / self.period)
        n = len(self.samples)
        xp = np.arange(n + 1) * (self.period / n)
        fp = np.append(self.samples, self.samples[0])
        return np.interp(np.mod(t, self.period), xp, fp)

    def scaled_offset(self, offset: float) -> "PeriodicCoefficient":
        """Copy with a new constant term (tabulated samples are shifted)."""
        if self.form == "tabulated":
            base = float(np.mean(self.samples))
            return replace(self, samples=tuple(s - base + offset for s in self.samples))
        return replace(self, offset=float(offset))

    def to_dict(self) -> dict:
        d = {"form": self.form, "period": self.period}
        if self.form == "tabulated":
            d["samples"] = list(self.samples)
        else:
            d["offset"] = self.offset
            if self.form == "cosine":
                d["amplitude"] = self.amplitude
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PeriodicCoefficient":
        return cls(
            form=d["form"],
            offset=float(d.get("offset", 0.0)),
            amplitude=float(d.get("amplitude", 0.0)),
            period=float(d.get("period", 1.0)),
            samples=tuple(d.get("samples", ())),
        )


@dataclass(frozen=True)
class ModelParams:
    """Scalar rates (per year), periodic coefficients and the common period."""

    N: float
    mu: float
    p: float
    sigma: float
    gamma: float
    delta: float
    beta: PeriodicCoefficient
    r: PeriodicCoefficient
    period_lt: float = 1.0

    def with_beta0(self, beta0: float) -> "ModelParams":
        return replace(self, beta=self.beta.scaled_offset(beta0))

    @property
    def inflow(self) -> float:
        """Constant susceptible forcing ``N (mu (1 - p) + delta)``."""
        return self.N * (self.mu * (1.0 - self.p) + self.delta)

    def dfe_rate(self, t):
        """Disease-free susceptible loss rate ``mu + r(t) + delta``."""
        return self.mu + self.r(t) + self.delta

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beta"] = self.beta.to_dict()
        d["r"] = self.r.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls(
            N=float(d["N"]), mu=float(d["mu"]), p=float(d["p"]),
            sigma=float(d["sigma"]), gamma=float(d["gamma"]),
            delta=float(d.get("delta", 0.0)),
            beta=PeriodicCoefficient.from_dict(d["beta"]),
            r=PeriodicCoefficient.from_dict(d["r"]),
            period_lt=float(d.get("period_lt", 1.0)),
        )


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _divides(small: float, big: float) -> bool:
    ratio = big / small
    return abs(ratio - round(ratio)) <= 1e-9 * max(1.0, ratio) and round(ratio) >= 1


def validate(params: ModelParams) -> ValidationReport:
    """List violations of the parameter invariants (never raises)."""
    v = []
    for name in ("N", "mu", "sigma", "gamma"):
        x = getattr(params, name)
        if not (np.isfinite(x) and x > 0):
            v.append(f"{name} must be positive, got {x}")
    if not (np.isfinite(params.delta) and params.delta >= 0):
        v.append(f"delta must be >= 0, got {params.delta}")
    if not (0.0 <= params.p <= 1.0):
        v.append(f"p must lie in [0, 1], got {params.p}")
    if not (np.isfinite(params.period_lt) and params.period_lt > 0):
        v.append(f"period_lt must be positive, got {params.period_lt}")
        return ValidationReport(v)
    for name in ("beta", "r"):
        c = getattr(params, name)
        if not c.period > 0:
            v.append(f"{name}.period must be positive")
            continue
        ts = np.linspace(0.0, c.period, 512, endpoint=False)
        if not np.all(c(ts) > 0):
            v.append(f"{name}(t) must be positive for all t (min sampled {float(np.min(c(ts)))})")
    if params.beta.period > 0 and not _divides(params.beta.period, params.period_lt):
        v.append(f"beta.period {params.beta.period} does not divide period_lt {params.period_lt}")
    if abs(params.r.period - params.period_lt) > 1e-12 * params.period_lt:
        v.append(f"r.period {params.r.period} must equal period_lt {params.period_lt}")
    return ValidationReport(v)


def _reduced(params: ModelParams, f: IncidenceFunction, t, S, E, I):
    inc = params.beta(t) * S * f.value(I)
    dS = (params.mu * params.N * (1.0 - params.p) - inc - (params.mu + params.r(t)) * S
          + params.delta * (params.N - S - E - I))
    dE = inc - (params.mu + params.sigma) * E
    dI = params.sigma * E - (params.mu + params.gamma) * I
    return dS, dE, dI


def reduced_field(params: ModelParams, f: IncidenceFunction):
    """Unchecked vector field ``(t, [S, E, I]) -> derivative`` for integrators."""
    def rhs(t, y):
        return np.array(_reduced(params, f, t, y[0], y[1], y[2]), dtype=float)
    return rhs


def full_field(params: ModelParams, f: IncidenceFunction):
    """Unchecked vector field of the four-compartment system."""
    def rhs(t, y):
        S, E, I, R = y
        inc = params.beta(t) * S * f.value(I)
        rt = params.r(t)
        return np.array([
            params.mu * params.N * (1.0 - params.p) - inc - (params.mu + rt) * S + params.delta * R,
            inc - (params.mu + params.sigma) * E,
            params.sigma * E - (params.mu + params.gamma) * I,
            params.mu * params.N * params.p + rt * S + params.gamma * I - (params.mu + params.delta) * R,
        ], dtype=float)
    return rhs


def rhs_full(params: ModelParams, f: IncidenceFunction, t: float, x) -> np.ndarray:
    """Time derivative of ``(S, E, I, R)``; components sum to zero."""
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise DomainError("full state must have four components")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError(f"state components must be finite and >= 0, got {x}")
    return full_field(params, f)(t, x)


def rhs_reduced(params: ModelParams, f: IncidenceFunction, t: float, x) -> np.ndarray:
    """Time derivative of ``(S, E, I)`` with ``R = N - S - E - I``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise DomainError("reduced state must have three components")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError(f"state components must be finite and >= 0, got {x}")
    if x.sum() > params.N * (1.0 + 1e-9):
        raise DomainError(f"S + E + I = {x.sum()} exceeds N = {params.N}")
    return reduced_field(params, f)(t, x)
