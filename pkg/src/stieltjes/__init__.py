"""Stieltjes calculus with respect to a derivator.

A derivator g — nondecreasing and left-continuous, with jumps and flat
stretches — replaces the identity as the measure of time.  This package
provides the resulting g-integral and g-derivative, the g-exponential,
Wronskians and their first-order law, closed-form and variation-of-parameters
solvers for second-order linear equations with constant coefficients, a
piecewise-frequency (Helmholtz-type) specialization, and slow brute-force
oracles plus named verification suites that cross-check all of it.
"""

from .derivator import DensityPiece, Derivator, PointClass, identity_derivator, single_jump_derivator
from .errors import (ConfigError, ContractError, DerivativeError, IntegrationError,
                     NumericError, PreconditionError, RegressivityError,
                     SingularSystemError, StieltjesError)
from .gcalculus import (GExponential, g_derivative, g_derivative2, g_exp_inverse_check,
                        g_exp_product_check, g_exponential, phi_resolvent,
                        product_rule_residual, quotient_rule_residual, regressivity_margin)
from .gmeasure import GFunction, ac_integral, cumulative, integrate, integrate_by_parts_check
from .helmholtz import (AlphaCoefficients, ClassicalLimitRow, HelmholtzSpec,
                        alpha_closed_form, alpha_linear_solve, classical_limit_study,
                        helmholtz_basis, helmholtz_homogeneous, helmholtz_particular,
                        helmholtz_wronskian, transmission_residuals)
from .oracle import OracleReport, riemann_stieltjes_sum, rk4_second_order, step_first_order
from .piecewise import PiecewiseConst
from .solver import (ProblemSpec, SolutionBundle, char_roots, homogeneous_basis_const,
                     particular_solution, residual, second_homogeneous_solution,
                     solve_const_factorization, solve_const_ivp, solve_first_order,
                     solve_ivp, solve_q0_reduction)
from .verify import SUITES, SuiteResult, run_suites, suite_names
from .wronskian import (SolutionPair, check_condPQ, homogeneous_exp_coefficient,
                        independence_test, wronskian_exp_form, wronskian_g,
                        wronskian_inverse, wronskian_relation_residual, wronskian_simplified)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # derivators
    "DensityPiece", "Derivator", "PointClass", "identity_derivator", "single_jump_derivator",
    "PiecewiseConst",
    # measure and integral
    "GFunction", "integrate", "ac_integral", "cumulative", "integrate_by_parts_check",
    # calculus
    "GExponential", "g_exponential", "g_derivative", "g_derivative2",
    "product_rule_residual", "quotient_rule_residual",
    "g_exp_product_check", "g_exp_inverse_check", "regressivity_margin", "phi_resolvent",
    # wronskians
    "SolutionPair", "wronskian_g", "wronskian_simplified", "wronskian_relation_residual",
    "wronskian_exp_form", "wronskian_inverse", "independence_test", "check_condPQ",
    "homogeneous_exp_coefficient",
    # solvers
    "ProblemSpec", "SolutionBundle", "char_roots", "homogeneous_basis_const",
    "solve_first_order", "solve_const_ivp", "solve_const_factorization",
    "second_homogeneous_solution", "particular_solution", "solve_ivp",
    "solve_q0_reduction", "residual",
    # helmholtz
    "HelmholtzSpec", "AlphaCoefficients", "alpha_closed_form", "alpha_linear_solve",
    "transmission_residuals", "helmholtz_basis", "helmholtz_homogeneous",
    "helmholtz_particular", "helmholtz_wronskian", "ClassicalLimitRow",
    "classical_limit_study",
    # oracles and verification
    "OracleReport", "riemann_stieltjes_sum", "step_first_order", "rk4_second_order",
    "SuiteResult", "SUITES", "run_suites", "suite_names",
    # errors
    "StieltjesError", "ConfigError", "NumericError", "IntegrationError", "DerivativeError",
    "PreconditionError", "RegressivityError", "ContractError", "SingularSystemError",
]
