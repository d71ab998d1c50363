"""Seasonally forced SEIRS model with general incidence: disease-free orbit,
reproduction numbers via evolution operators, and threshold dynamics."""

from .dfe import (PeriodicSolution, disease_free_solution, perturbed_solution,
                  periodic_fixed_point, s_hat, s_hat_initial, s_hat_perturbed, select_eta)
from .errors import AssumptionViolation, DomainError, NumericalFailure
from .incidence import (AssumptionReport, IncidenceFunction, check_assumptions,
                        eval_derivative, eval_incidence)
from .model import ModelParams, PeriodicCoefficient, rhs_full, rhs_reduced, validate
from .odeint import (SolverConfig, Trajectory, evolution_operator, floquet_exponent,
                     integrate, monodromy, poincare_map, spectral_radius)
from .reproduction import (NgmAssembly, R0Report, assemble, perturbed_rho, r0_average,
                           r0_solve, rho_w)

__version__ = "0.1.0"
