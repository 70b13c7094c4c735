"""g-Wronskians and their identities for second-order equations.

Two determinants matter.  The simplified Wronskian is the classical 2×2 one,
    W̃_g = y1·y2'_g − y2·y1'_g,
and the full g-Wronskian adds jump corrections,
    W_g = W̃_g + [y1·y2''_g − y2·y1''_g]·dg + [y1'_g·y2''_g − y2'_g·y1''_g]·dg²,
which is exactly y1(t+)·y2'_g(t+) − y2(t+)·y1'_g(t+) once the right limits
are expanded through the jump quotients (the y1'·y2' cross terms cancel).
W_g is right-continuous and, for solution pairs of v'' + P v' + Q v = 0,

    W_g = (1 − P·dg + Q·dg²)·W̃_g,     W̃_g = W̃_g(0)·exp_g(−P + Q·dg; ·),

provided 1 − P·dg + Q·dg² ≠ 0 at every jump (condPQ).  Those identities are
exposed both as residual checks and as closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import faults
from .derivator import Derivator
from .errors import ContractError, PreconditionError
from .gcalculus import GExponential, coef_value
from .gmeasure import GFunction
from .piecewise import PiecewiseConst

__all__ = [
    "SolutionPair",
    "wronskian_g",
    "wronskian_simplified",
    "wronskian_relation_residual",
    "wronskian_exp_form",
    "wronskian_inverse",
    "independence_test",
    "check_condPQ",
    "homogeneous_exp_coefficient",
]


@dataclass
class SolutionPair:
    y1: GFunction
    y2: GFunction


def _require(pair: SolutionPair, second: bool, what: str) -> None:
    for name, y in (("y1", pair.y1), ("y2", pair.y2)):
        if y.deriv1 is None:
            raise ContractError(f"{what} needs {name}.deriv1")
        if second and y.deriv2 is None:
            raise ContractError(f"{what} needs {name}.deriv2")


def wronskian_simplified(d: Derivator, pair: SolutionPair, t: float) -> complex:
    """W̃_g(y1,y2)(t) = y1·y2'_g − y2·y1'_g."""
    _require(pair, False, "simplified Wronskian")
    y1, y2 = pair.y1, pair.y2
    return y1.value(t) * y2.deriv1(t) - y2.value(t) * y1.deriv1(t)


def wronskian_g(d: Derivator, pair: SolutionPair, t: float) -> complex:
    """Full g-Wronskian including the dg and dg² jump corrections."""
    _require(pair, True, "g-Wronskian")
    y1, y2 = pair.y1, pair.y2
    dg = d.jump(t)
    v1, v2 = y1.value(t), y2.value(t)
    d1, d2 = y1.deriv1(t), y2.deriv1(t)
    s1, s2 = y1.deriv2(t), y2.deriv2(t)
    w = v1 * d2 - v2 * d1
    if dg != 0.0:
        w += (v1 * s2 - v2 * s1) * dg
        if not faults.active("wronskian-drop-dg2"):
            w += (d1 * s2 - d2 * s1) * dg * dg
    return w


def wronskian_relation_residual(d: Derivator, pair: SolutionPair, P, Q, t: float) -> float:
    """|W_g − (1 − P·dg + Q·dg²)·W̃_g| at t; large when the pair does not
    actually solve the homogeneous equation for (P, Q)."""
    dg = d.jump(t)
    factor = 1.0 - coef_value(P, t) * dg + coef_value(Q, t) * dg * dg
    return abs(wronskian_g(d, pair, t) - factor * wronskian_simplified(d, pair, t))


def check_condPQ(d: Derivator, P, Q) -> None:
    """Raise unless 1 − P(t_j)·d_j + Q(t_j)·d_j² ≠ 0 at every jump."""
    for tj, dj in d.jumps:
        if 1.0 - coef_value(P, tj) * dj + coef_value(Q, tj) * dj * dj == 0.0:
            raise PreconditionError(
                f"condPQ violated at jump t={tj}: 1 - P·Δg + Q·Δg² = 0")


def _neg_ac(P):
    if isinstance(P, (int, float, complex)):
        return -complex(P)
    if isinstance(P, PiecewiseConst):
        return -P
    fn = P.value if isinstance(P, GFunction) else P
    return lambda s: -complex(fn(s))


def homogeneous_exp_coefficient(d: Derivator, P, Q) -> GExponential:
    """exp_g(−P + Q·dg; ·): a.c. part −P, at a jump −P(t_j) + Q(t_j)·d_j.

    This is the exponential W̃_g is proportional to; its jump factors are
    1 + (−P + Q·d_j)·d_j = 1 − P·d_j + Q·d_j², i.e. the condPQ expression.
    """
    at = {tj: -coef_value(P, tj) + coef_value(Q, tj) * dj for tj, dj in d.jumps}
    return GExponential(d, _neg_ac(P), jump_values=at, label="-P+QΔg")


def wronskian_exp_form(d: Derivator, P, Q, w0: complex, t: float) -> complex:
    """W̃_g(t) = W̃_g(0)·exp_g(−P + Q·dg; t) with W̃_g(0) = w0."""
    check_condPQ(d, P, Q)
    if w0 == 0.0:
        return 0.0 + 0.0j
    return w0 * homogeneous_exp_coefficient(d, P, Q).value(t)


def wronskian_inverse(d: Derivator, P, Q, w0: complex, t: float) -> complex:
    """1/W_g(t) in closed form:

        [w0·(1 − P·dg + Q·dg²)(t)]⁻¹ · exp_g(−(−P+Q·dg)/(1−P·dg+Q·dg²); t)

    so that wronskian_g · wronskian_inverse ≡ 1 for exp-form pairs.
    """
    if w0 == 0.0:
        raise PreconditionError("wronskian_inverse needs W̃(0) = w0 ≠ 0")
    check_condPQ(d, P, Q)
    base = homogeneous_exp_coefficient(d, P, Q)
    inv = base.inverse()
    dg = d.jump(t)
    factor = 1.0 - coef_value(P, t) * dg + coef_value(Q, t) * dg * dg
    return inv.value(t) / (w0 * factor)


def independence_test(d: Derivator, pair: SolutionPair, n: int = 256) -> str:
    """"independent" when a Wronskian clears a scale-aware threshold at some
    grid point; "inconclusive" otherwise (dependence is never claimed)."""
    _require(pair, False, "independence test")
    grid = d.grid(n)
    y1v = [pair.y1.value(t) for t in grid]
    d2v = [pair.y2.deriv1(t) for t in grid]
    scale = max(1.0, max(abs(v) for v in y1v) * max(abs(v) for v in d2v))
    threshold = 1e-12 * scale
    has_second = pair.y1.deriv2 is not None and pair.y2.deriv2 is not None
    for t in grid:
        if abs(wronskian_simplified(d, pair, t)) > threshold:
            return "independent"
        if has_second and abs(wronskian_g(d, pair, t)) > threshold:
            return "independent"
    return "inconclusive"
