"""
Next-generation matrices and reproduction numbers of the periodic system.

The infected subsystem ``(E, I)`` linearized at the disease-free orbit reads
``x' = (F(t) - V) x`` with

    F(t) = [[0, beta(t) S_hat(t) f'(0)], [0, 0]],
    V    = [[mu + sigma, 0], [-sigma, mu + gamma]].

``R0`` is the unique ``lam > 0`` for which the one-period evolution operator
``W(LT, 0, lam)`` of ``w' = (-V + F(t) / lam) w`` has spectral radius 1; it
is located by bisection since ``rho(W)`` decreases in ``lam``. ``R0_T`` is
the cheaper time-averaged proxy ``rho([F] V^-1)``.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .dfe import PeriodicSolution, disease_free_solution, select_eta
from .errors import AssumptionViolation, DomainError, NumericalFailure
from .incidence import IncidenceFunction
from .model import ModelParams
from .odeint import SolverConfig, monodromy, spectral_radius

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-7
# W entries are O(1); tolerances are absolute on that scale.
LINEAR_CFG = SolverConfig(rel_tol=1e-10, abs_tol=1e-12)


@dataclass
class NgmAssembly:
    """Time-dependent matrices of the linearized infected subsystem.

    ``H`` is the direction in which an upper perturbation of ``S_hat`` moves
    ``F``; ``K`` collects the second-order incidence correction used for the
    persistence lower bound and is non-negative whenever ``f''(0) <= 0``.
    """

    params: ModelParams
    incidence: IncidenceFunction
    s_hat: PeriodicSolution
    eta: float

    def __post_init__(self):
        p = self.params
        self._V = np.array([[p.mu + p.sigma, 0.0], [-p.sigma, p.mu + p.gamma]])
        self._slope = self.incidence.slope_at_zero
        self._curv = self.incidence.curvature_at_zero(p.N)

    def F(self, t) -> np.ndarray:
        return np.array([[0.0, self.params.beta(t) * self.s_hat(t) * self._slope], [0.0, 0.0]])

    def V(self, t=None) -> np.ndarray:
        return self._V.copy()

    def H(self, t) -> np.ndarray:
        return np.array([[0.0, self.params.beta(t) * self._slope], [0.0, 0.0]])

    def K(self, t) -> np.ndarray:
        k12 = -0.5 * self.params.beta(t) * self._curv * (self.s_hat(t) - self.eta)
        return np.array([[0.0, k12], [0.0, 0.0]])

    def generator(self, lam: float = 1.0, epsilon: float = 0.0,
                  eta: float = 0.0, alpha: float = 0.0):
        """``t -> F(t)/lam - V + (epsilon - eta) H(t) - alpha K(t)``.

        Only the (1, 2) entry is time dependent, so it is assembled directly.
        """
        beta, s_hat, V = self.params.beta, self.s_hat, self._V
        slope, curv, eta_k = self._slope, self._curv, self.eta

        def A(t):
            b = beta(t)
            s = s_hat(t)
            a12 = b * slope * (s / lam + epsilon - eta)
            if alpha:
                a12 += alpha * 0.5 * b * curv * (s - eta_k)
            return np.array([[-V[0, 0], a12], [-V[1, 0], -V[1, 1]]])

        return A

    def is_trivial(self) -> bool:
        """True when ``F`` vanishes identically (no transmission at the DFE)."""
        ts = np.linspace(0.0, self.params.period_lt, 257)
        return self._slope == 0.0 or bool(np.all(self.params.beta(ts) * self.s_hat(ts) == 0.0))


def assemble(params: ModelParams, f: IncidenceFunction,
             eta: Optional[float] = None) -> NgmAssembly:
    """Build ``F``, ``V``, ``H`` and ``K`` against the disease-free orbit."""
    if not f.slope_at_zero > 0:
        raise AssumptionViolation(f"f'(0) must be positive, got {f.slope_at_zero}")
    sol = disease_free_solution(params)
    if eta is None:
        eta = select_eta(sol)
    return NgmAssembly(params=params, incidence=f, s_hat=sol, eta=float(eta))


def _assembly(params, f, ngm):
    return ngm if ngm is not None else assemble(params, f)


def period_average(fn, period: float) -> float:
    return quad(fn, 0.0, period, epsabs=0.0, epsrel=1e-12, limit=200)[0] / period


def r0_average(params: ModelParams, f: IncidenceFunction,
               ngm: Optional[NgmAssembly] = None) -> float:
    """Time-averaged reproduction number ``rho([F] V^-1)``."""
    ngm = _assembly(params, f, ngm)
    beta_bar = period_average(params.beta, params.period_lt)
    s_bar = ngm.s_hat.mean()
    f_bar = np.array([[0.0, beta_bar * s_bar * ngm._slope], [0.0, 0.0]])
    return spectral_radius(f_bar @ np.linalg.inv(ngm.V()))


def rho_w(params: ModelParams, f: IncidenceFunction, lam: float,
          cfg: Optional[SolverConfig] = None,
          ngm: Optional[NgmAssembly] = None) -> float:
    """Spectral radius of ``W(LT, 0, lam)``."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    ngm = _assembly(params, f, ngm)
    W = monodromy(ngm.generator(lam=lam), params.period_lt, cfg or LINEAR_CFG)
    return spectral_radius(W)


@dataclass
class R0Report:
    r0: float
    r0_avg: float
    bracket: tuple
    iterations: int
    residual: float
    classification: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bracket"] = [float(x) for x in self.bracket]
        return d


def classify(r0: float, tol: float) -> str:
    if r0 < 1.0 - tol:
        return "extinction"
    if r0 > 1.0 + tol:
        return "persistence"
    return "critical"


def r0_solve(params: ModelParams, f: IncidenceFunction, tol: float = DEFAULT_TOL,
             cfg: Optional[SolverConfig] = None, max_expansions: int = 8) -> R0Report:
    """Solve ``rho(W(LT, 0, lam)) = 1`` for ``lam``.

    The bracket starts at ``[R0_T / 4, 4 R0_T]`` and is widened by factors of 4
    until ``rho - 1`` changes sign; bisection then shrinks it to width
    ``tol``. The returned value is the secant point inside the final bracket.

    Raises
    ------
    NumericalFailure
        If no sign change is found although ``F`` is not identically zero.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    cfg = cfg or LINEAR_CFG
    ngm = assemble(params, f)
    r0_avg = r0_average(params, f, ngm)
    if ngm.is_trivial():
        return R0Report(0.0, r0_avg, (0.0, 0.0), 0, 0.0, "extinction")

    def g(lam):
        return rho_w(params, f, lam, cfg, ngm) - 1.0

    lo = max(r0_avg / 4.0, 1e-6)
    hi = max(4.0 * r0_avg, 2 * lo)
    g_lo, g_hi = g(lo), g(hi)
    n = 0
    while g_lo <= 0 and n < max_expansions:
        hi, g_hi = lo, g_lo
        lo /= 4.0
        g_lo = g(lo)
        n += 1
    n = 0
    while g_hi >= 0 and n < max_expansions:
        lo, g_lo = hi, g_hi
        hi *= 4.0
        g_hi = g(hi)
        n += 1
    if not (g_lo > 0 > g_hi):
        raise NumericalFailure(
            f"no sign change of rho(W)-1 on [{lo:.6g}, {hi:.6g}] "
            f"(values {g_lo + 1:.6g}, {g_hi + 1:.6g})")

    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        it += 1
        if g_mid == 0:
            lo = hi = mid
            g_lo = g_hi = 0.0
            break
        if g_mid > 0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    if hi == lo:
        r0 = lo
    else:
        r0 = lo + g_lo * (hi - lo) / (g_lo - g_hi)
    residual = abs(g(r0))
    log.debug("r0 solve: %d bisections, r0=%.10g, residual=%.3g", it, r0, residual)
    return R0Report(r0=r0, r0_avg=r0_avg, bracket=(lo, hi), iterations=it,
                    residual=residual, classification=classify(r0, tol))


def perturbed_rho(params: ModelParams, f: IncidenceFunction, epsilon: float = 0.0,
                  eta: float = 0.0, alpha: float = 0.0,
                  cfg: Optional[SolverConfig] = None,
                  ngm: Optional[NgmAssembly] = None) -> tuple:
    """Spectral radii of the monodromies of ``F - V + eps H`` and ``F - V - eta H - alpha K``.

    ``K`` is built with the same ``eta`` that is passed here.
    """
    if min(epsilon, eta, alpha) < 0:
        raise DomainError("perturbation sizes must be non-negative")
    if ngm is None or ngm.eta != eta:
        base = _assembly(params, f, ngm)
        if eta >= base.s_hat.minimum():
            raise DomainError("eta must stay below the minimum of S_hat")
        ngm = NgmAssembly(params, f, base.s_hat, eta)
    cfg = cfg or LINEAR_CFG
    lt = params.period_lt
    upper = spectral_radius(monodromy(ngm.generator(epsilon=epsilon), lt, cfg))
    lower = spectral_radius(monodromy(ngm.generator(eta=eta, alpha=alpha), lt, cfg))
    return upper, lower


def extinction_margin(params: ModelParams, f: IncidenceFunction,
                      epsilons=tuple(10.0 ** np.arange(-6, 5)),
                      cfg: Optional[SolverConfig] = None) -> Optional[float]:
    """Largest tested ``epsilon`` with ``rho(F - V + epsilon H) < 1``, or ``None``."""
    ngm = assemble(params, f)
    best = None
    for eps in sorted(epsilons):
        upper, _ = perturbed_rho(params, f, epsilon=eps, eta=ngm.eta, cfg=cfg, ngm=ngm)
        if upper < 1.0:
            best = float(eps)
        else:
            break
    return best


def persistence_margin(params: ModelParams, f: IncidenceFunction, alpha: float,
                       fractions=(1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5),
                       cfg: Optional[SolverConfig] = None) -> Optional[float]:
    """Largest tested ``eta`` (as a fraction of ``min S_hat``) keeping
    ``rho(F - V - eta H - alpha K) > 1``, or ``None`` if even the smallest fails.
    """
    sol = disease_free_solution(params)
    s_min = sol.minimum()
    best = None
    for frac in sorted(fractions):
        eta = frac * s_min
        _, lower = perturbed_rho(params, f, eta=eta, alpha=alpha, cfg=cfg)
        if lower > 1.0:
            best = float(eta)
        else:
            break
    return best

