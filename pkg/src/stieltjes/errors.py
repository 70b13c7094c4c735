"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes (see cli.EXIT_*): config errors
exit 2, numeric errors 3, precondition violations 4.  Everything derives from
StieltjesError so callers can catch the whole family at once.
"""


class StieltjesError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(StieltjesError):
    """Malformed or inconsistent configuration (JSON schema, field values)."""


class NumericError(StieltjesError):
    """A numeric computation could not be carried out."""


class IntegrationError(NumericError):
    """Quadrature failed, typically a non-finite integrand sample.

    The message names the offending abscissa.
    """


class DerivativeError(NumericError):
    """No admissible step for a numeric g-derivative quotient at a point."""


class PreconditionError(StieltjesError):
    """A documented precondition of an operation does not hold."""


class RegressivityError(PreconditionError):
    """1 + p(t_j)*dg(t_j) == 0 at some jump: exp_g(p; .) undefined past it."""


class ContractError(PreconditionError):
    """A function object lacks data the operation requires (e.g. deriv1)."""


class SingularSystemError(PreconditionError):
    """A linear system required by a closed form is (numerically) singular."""
