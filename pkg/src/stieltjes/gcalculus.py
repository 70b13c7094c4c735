"""g-derivatives, g-exponentials and the resolvent-style φ constructions.

The g-derivative is a limit of difference quotients *in g*: numerically the
step is the largest one that stays clear of structural points (jumps, piece
boundaries) and still sees g-variation above a floor — large steps matter
because the sampled function may carry a small absolute error (e.g. from
quadrature), which the quotient divides by the g-increment.  One-sided
quotients use a smaller step balancing their O(h) truncation against that
amplification.  At a jump the derivative is not a limit at all — it is the
exact quotient (f(t+) − f(t))/dg(t) — and inside a constancy interval the
definition redirects to the right endpoint t*.

The g-exponential is kept symbolic: exp_g(p;t) = exp(A(t) + J(t)) with A the
a.c. part of ∫ p̃ dmu_g (exact for constant and piecewise-constant p) and
J(t) = Σ_{t_j<t} Log(1 + p(t_j) dg(t_j)) on the principal branch.  Nonreal
and negative factors are fine; a vanishing factor means p is not regressive
past that jump and evaluation beyond it raises.
"""

from __future__ import annotations

import cmath
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Mapping

from . import faults
from .derivator import Derivator
from .errors import ContractError, DerivativeError, RegressivityError
from .gmeasure import GFunction, ac_integral, cumulative, integrate
from .piecewise import PiecewiseConst

__all__ = [
    "RegressiveFn",
    "GExponential",
    "g_derivative",
    "g_derivative2",
    "product_rule_residual",
    "quotient_rule_residual",
    "g_exponential",
    "g_exp_product_check",
    "g_exp_inverse_check",
    "regressivity_margin",
    "as_regressive",
    "phi_resolvent",
    "polynomial_exp_solution",
]

Coefficient = object  # complex scalar | PiecewiseConst | callable


def coef_value(p: Coefficient, t: float) -> complex:
    """Evaluate a coefficient (scalar, step function, or callable) at t."""
    if isinstance(p, (int, float, complex)):
        return complex(p)
    return complex(p(t))


# ---------------------------------------------------------------------------
# numeric g-derivatives


@dataclass(frozen=True)
class _StepPolicy:
    h0_scale: float = 1e-5      # central step = h0_scale * max(T, 1)
    h1_scale: float = 1e-7      # one-sided step (O(h) truncation: keep smaller)
    var_floor: float = 1e-9     # required |g(t±h) − g(t)|
    jump_offset: float = 1e-11  # right offset scale at jump quotients

    # At a jump the quotient has an O(dg) numerator — no cancellation — so the
    # offset can sit near the rounding floor; its only cost is an O(h) bias.


_DEFAULT_POLICY = _StepPolicy()
# numeric-on-numeric second quotients amplify noise ~ eps/h²; a coarser
# ladder trades truncation error for stability (documented tolerance 1e-4)
_COARSE_POLICY = _StepPolicy(h0_scale=1e-3, h1_scale=1e-4, var_floor=1e-6, jump_offset=1e-8)


def _gaps(d: Derivator, t: float) -> tuple[float, float]:
    """Distance from t to the nearest structural point strictly left/right
    (the domain ends when there is none)."""
    pts = d.structural_points()
    i = bisect_left(pts, t)
    left = t - pts[i - 1] if i > 0 and pts[i - 1] < t else t
    j = i
    while j < len(pts) and pts[j] <= t:
        j += 1
    right = pts[j] - t if j < len(pts) else d.T - t
    return left, right


def _right_offset(d: Derivator, t: float, policy: _StepPolicy) -> float:
    gap = d.T - t
    for s in d.structural_points():
        if s > t:
            gap = s - t
            break
    return min(policy.jump_offset * max(d.T, 1.0), 0.5 * gap)


def _quotient(fn, d: Derivator, a: float, b: float) -> complex:
    return (complex(fn(b)) - complex(fn(a))) / (d.eval_g(b) - d.eval_g(a))


def _one_sided(fn, d: Derivator, t: float, h: float, sign: int) -> complex:
    """One-sided quotient with its O(Δg) truncation term eliminated.

    Two plain quotients at steps h and h/2 expand as f'_g + (Δg_i/2)·f''_g +
    O(Δg_i²); eliminating the middle term in g (not in h — the two need not
    be proportional) leaves an O(Δg²) error without shrinking the step, which
    matters because tiny g-increments amplify any absolute error in f."""
    gt = d.eval_g(t)
    b1, b2 = t + sign * h, t + sign * 0.5 * h
    d1, d2 = d.eval_g(b1) - gt, d.eval_g(b2) - gt
    ft = complex(fn(t))
    q1 = (complex(fn(b1)) - ft) / d1
    if abs(d1 - d2) <= 1e-3 * abs(d1):
        return q1
    q2 = (complex(fn(b2)) - ft) / d2
    return (q2 * d1 - q1 * d2) / (d1 - d2)


def _ladder(d: Derivator, t: float, hmax: float, policy: _StepPolicy, sides: str) -> float | None:
    """Largest step h <= hmax whose g-variation clears the floor on the
    requested side(s); None when no step is admissible.  Variation grows with
    h, so this normally succeeds at hmax or not at all; the halving loop only
    guards against floating-point raggedness near plateau edges."""
    h = hmax
    gt = d.eval_g(t)
    while h >= 1e-13 * max(d.T, 1.0):
        ok = True
        if "r" in sides:
            ok = ok and abs(d.eval_g(t + h) - gt) >= policy.var_floor
        if "l" in sides:
            ok = ok and abs(gt - d.eval_g(t - h)) >= policy.var_floor
        if ok:
            return h
        h *= 0.5
    return None


def _numeric_g_derivative(d: Derivator, fn: Callable[[float], complex], t: float,
                          policy: _StepPolicy = _DEFAULT_POLICY) -> complex:
    cls = d.classify(t)
    if cls.kind == "constancy":
        t = d.star(t)
        cls = d.classify(t)
    if cls.kind == "jump":
        h = _right_offset(d, t, policy)
        if h <= 0.0:
            raise DerivativeError(f"derivative undefined at t={t}: no room right of jump")
        return _quotient(fn, d, t, t + h)

    scale = max(d.T, 1.0)
    h0, h1 = policy.h0_scale * scale, policy.h1_scale * scale
    gap_l, gap_r = _gaps(d, t)
    if cls.kind == "ng-plus" or t == 0.0:
        h = _ladder(d, t, min(h1, 0.5 * gap_r, d.T - t), policy, "r")
        if h is None:
            raise DerivativeError(f"derivative undefined at t={t}: g locally constant on the right")
        return _one_sided(fn, d, t, h, +1)
    if cls.kind == "ng-minus" or t == d.T:
        h = _ladder(d, t, min(h1, 0.5 * gap_l, t), policy, "l")
        if h is None:
            raise DerivativeError(f"derivative undefined at t={t}: g locally constant on the left")
        return _one_sided(fn, d, t, h, -1)

    # A density seam is a kink in g: a symmetric quotient straddling it keeps
    # an O(Δg) truncation term (the half-increments differ), so step off to
    # one smooth side instead.  Jumps never reach here; plateau edges hit by
    # star() land on a seam too and their dead side is skipped for free.
    pts = d.structural_points()
    i = bisect_left(pts, t - 1e-12 * scale)
    on_kink = i < len(pts) and abs(pts[i] - t) <= 1e-12 * scale

    if not on_kink:
        h = _ladder(d, t, min(h0, 0.5 * gap_l, 0.5 * gap_r, t, d.T - t), policy, "lr")
        if h is not None:
            return _quotient(fn, d, t - h, t + h)
    # straddling a kink, or no symmetric step sees variation: go one-sided
    h = _ladder(d, t, min(h1, 0.5 * gap_r, d.T - t), policy, "r")
    if h is not None:
        return _one_sided(fn, d, t, h, +1)
    h = _ladder(d, t, min(h1, 0.5 * gap_l, t), policy, "l")
    if h is not None:
        return _one_sided(fn, d, t, h, -1)
    raise DerivativeError(f"derivative undefined at t={t}: no admissible step sees g-variation")


def g_derivative(d: Derivator, f, t: float) -> complex:
    """First g-derivative of f at t; analytic deriv1 preferred when attached."""
    if isinstance(f, GFunction) and f.deriv1 is not None:
        return complex(f.deriv1(t))
    fn = f.value if isinstance(f, GFunction) else f
    return _numeric_g_derivative(d, fn, t)


def g_derivative2(d: Derivator, f, t: float) -> complex:
    """Second g-derivative; degrades gracefully by differentiation depth.

    deriv2 attached → exact; deriv1 attached → one numeric quotient on it;
    neither → numeric-on-numeric with a coarse outer ladder (low accuracy,
    ~1e-4, inherent to second differences of sampled data).
    """
    if isinstance(f, GFunction) and f.deriv2 is not None:
        return complex(f.deriv2(t))
    if isinstance(f, GFunction) and f.deriv1 is not None:
        return _numeric_g_derivative(d, f.deriv1, t)
    fn = f.value if isinstance(f, GFunction) else f
    inner = lambda s: _numeric_g_derivative(d, fn, s)
    return _numeric_g_derivative(d, inner, t, policy=_COARSE_POLICY)


def product_rule_residual(d: Derivator, f1: GFunction, f2: GFunction, t: float) -> float:
    """|(f1·f2)'_g(t) − product-rule right-hand side|, left side numeric.

    Right side: f1'_g(t) f2(t*) + f2'_g(t) f1(t*) + f1'_g(t) f2'_g(t) dg(t*).
    """
    for f in (f1, f2):
        if not isinstance(f, GFunction) or f.deriv1 is None:
            raise ContractError("product rule residual needs GFunctions with deriv1")
    prod = lambda s: f1.value(s) * f2.value(s)
    lhs = _numeric_g_derivative(d, prod, t)
    ts = d.star(t)
    d1, d2 = f1.deriv1(t), f2.deriv1(t)
    rhs = d1 * f2.value(ts) + d2 * f1.value(ts) + d1 * d2 * d.jump(ts)
    return abs(lhs - rhs)


def quotient_rule_residual(d: Derivator, f1: GFunction, f2: GFunction, t: float) -> float:
    """Same idea for f1/f2; denominator f2(t*)·(f2(t*) + f2'_g(t)·dg(t*))."""
    for f in (f1, f2):
        if not isinstance(f, GFunction) or f.deriv1 is None:
            raise ContractError("quotient rule residual needs GFunctions with deriv1")
    quot = lambda s: f1.value(s) / f2.value(s)
    lhs = _numeric_g_derivative(d, quot, t)
    ts = d.star(t)
    d1, d2 = f1.deriv1(t), f2.deriv1(t)
    den = f2.value(ts) * (f2.value(ts) + d2 * d.jump(ts))
    rhs = (d1 * f2.value(ts) - d2 * f1.value(ts)) / den
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# the g-exponential


@dataclass(frozen=True)
class RegressiveFn:
    """A coefficient together with its regressivity margin min_j |1+p(t_j)dg|."""

    p: Coefficient
    regressivity_margin: float


class GExponential:
    """exp_g(p; ·) with exact a.c. exponent for constant/step coefficients.

    ``jump_values`` optionally overrides the coefficient exactly at jump
    abscissas — that is how compound coefficients like −P + Q·dg enter, whose
    a.c. part (−P) differs from their at-jump value (−P(t_j) + Q(t_j)d_j).

    Regressivity is checked lazily: evaluation at t only requires the factors
    at jumps strictly before t, so exp_g(p;t) is well-defined up to the first
    singular jump and raises past it.
    """

    def __init__(self, d: Derivator, p: Coefficient,
                 jump_values: Mapping[float, complex] | Callable[[float], complex] | None = None,
                 label: str = ""):
        self.d = d
        self.p = p
        self.jump_values = jump_values
        self.label = label or "p"
        self._jump_ts = [t for t, _ in d.jumps]
        self._prefix = [0.0 + 0.0j]
        self._first_singular: int | None = None
        self._singular_at: float | None = None
        for k, (tj, dj) in enumerate(d.jumps):
            factor = 1.0 + self.p_at(tj) * dj
            if factor == 0.0:
                if self._first_singular is None:
                    self._first_singular = k
                    self._singular_at = tj
                self._prefix.append(self._prefix[-1])
            else:
                self._prefix.append(self._prefix[-1] + cmath.log(factor))

    def p_at(self, t: float) -> complex:
        if self.jump_values is not None and self.d.jump(t) > 0.0:
            if callable(self.jump_values):
                return complex(self.jump_values(t))
            if t in self.jump_values:
                return complex(self.jump_values[t])
        return coef_value(self.p, t)

    def factor_at(self, t: float) -> complex:
        return 1.0 + self.p_at(t) * self.d.jump(t)

    def exponent_ac(self, t: float) -> complex:
        if isinstance(self.p, (int, float, complex)):
            return complex(self.p) * self.d.ac_increment(0.0, t)
        if isinstance(self.p, PiecewiseConst):
            return self.p.ac_gintegral(self.d, t)
        return ac_integral(self.d, self.p, t, tol=1e-12)

    def value(self, t: float) -> complex:
        i = bisect_left(self._jump_ts, min(t, self.d.T))
        if self._first_singular is not None and i > self._first_singular:
            raise RegressivityError(
                f"1 + p·Δg vanishes at jump t={self._singular_at}; "
                f"exp_g({self.label};t) undefined for t > {self._singular_at}")
        exponent = self.exponent_ac(t)
        if not faults.active("gexp-drop-jump"):
            exponent = exponent + self._prefix[i]
        return cmath.exp(exponent)

    def right(self, t: float) -> complex:
        """exp_g(p; t+) = (1 + p(t)·dg(t)) · exp_g(p; t)."""
        v = self.value(t)
        if faults.active("gexp-drop-jump"):
            return v
        return v * self.factor_at(t)

    def inverse(self) -> "GExponential":
        """exp_g(p;·)^{-1} = exp_g(−p/(1+p·dg);·), by the inverse law."""
        if isinstance(self.p, (int, float, complex)):
            ac = -complex(self.p)
        elif isinstance(self.p, PiecewiseConst):
            ac = -self.p
        else:
            ac = lambda s: -coef_value(self.p, s)
        inv_at = {}
        for tj, dj in self.d.jumps:
            factor = 1.0 + self.p_at(tj) * dj
            if factor != 0.0:
                inv_at[tj] = -self.p_at(tj) / factor
        return GExponential(self.d, ac, jump_values=inv_at, label=f"inv({self.label})")

    def as_gfunction(self) -> GFunction:
        d = self.d
        deriv2 = None
        if isinstance(self.p, (int, float, complex)):
            lam = complex(self.p)
            deriv2 = lambda s: lam * lam * self.value(d.star(s))
        breaks = tuple(self.p.breaks) if isinstance(self.p, PiecewiseConst) else ()
        return GFunction(
            value=self.value,
            deriv1=lambda s: self.p_at(d.star(s)) * self.value(d.star(s)),
            deriv2=deriv2,
            label=f"exp_g({self.label})",
            breakpoints=breaks,
        )


def regressivity_margin(d: Derivator, p: Coefficient,
                        jump_values=None) -> float:
    """min over jumps of |1 + p(t_j)·dg(t_j)| (inf when g has no jumps)."""
    e = GExponential(d, p, jump_values=jump_values)
    margins = [abs(e.factor_at(tj)) for tj, _ in d.jumps]
    return min(margins) if margins else math.inf


def as_regressive(d: Derivator, p: Coefficient) -> RegressiveFn:
    margin = regressivity_margin(d, p)
    if margin == 0.0:
        bad = next(tj for tj, dj in d.jumps if 1.0 + coef_value(p, tj) * dj == 0.0)
        raise RegressivityError(f"1 + p·Δg vanishes at jump t={bad}")
    return RegressiveFn(p=p, regressivity_margin=margin)


def g_exponential(d: Derivator, p: Coefficient, t: float, jump_values=None) -> complex:
    """exp_g(p; t).  Regressivity is required only at jumps strictly below t."""
    return GExponential(d, p, jump_values=jump_values).value(t)


def _circle_plus(d: Derivator, p: Coefficient, q: Coefficient):
    """Coefficient p ⊕ q = p + q + p·q·dg: a.c. part p+q, adjusted at jumps."""
    if isinstance(p, (int, float, complex)) and isinstance(q, (int, float, complex)):
        ac = complex(p) + complex(q)
    elif isinstance(p, PiecewiseConst) and isinstance(q, (PiecewiseConst, int, float, complex)):
        ac = p + q
    elif isinstance(q, PiecewiseConst) and isinstance(p, (int, float, complex)):
        ac = q + p
    else:
        ac = lambda s: coef_value(p, s) + coef_value(q, s)
    at = {tj: coef_value(p, tj) + coef_value(q, tj) + coef_value(p, tj) * coef_value(q, tj) * dj
          for tj, dj in d.jumps}
    return ac, at


def g_exp_product_check(d: Derivator, p: Coefficient, q: Coefficient, t: float) -> float:
    """|exp_g(p;t)·exp_g(q;t) − exp_g(p+q+pq·dg;t)|."""
    lhs = g_exponential(d, p, t) * g_exponential(d, q, t)
    ac, at = _circle_plus(d, p, q)
    rhs = g_exponential(d, ac, t, jump_values=at)
    return abs(lhs - rhs)


def g_exp_inverse_check(d: Derivator, p: Coefficient, t: float) -> float:
    """|exp_g(p;t) · exp_g(−p/(1+p·dg);t) − 1|."""
    e = GExponential(d, p)
    return abs(e.value(t) * e.inverse().value(t) - 1.0)


# ---------------------------------------------------------------------------
# φ constructions


def _check_lambda_regressive(d: Derivator, lam: complex, what: str) -> None:
    for tj, dj in d.jumps:
        if 1.0 + lam * dj == 0.0:
            raise RegressivityError(f"{what}: 1 + λ·Δg vanishes at jump t={tj} (λ={lam})")


def phi_resolvent(d: Derivator, eta, lam: complex, t: float, n: int = 4096) -> complex:
    """φ(t) = ∫_{[0,t)} η(s)/(1 + λ·dg(s)) dmu_g(s).

    For constant η the value is exact: the a.c. part integrates η directly
    (dg = 0 there) and each jump contributes η(t_j)·d_j/(1+λ d_j).
    """
    _check_lambda_regressive(d, lam, "phi_resolvent")
    if isinstance(eta, (int, float, complex)):
        eta_c = complex(eta)
        total = eta_c * d.ac_increment(0.0, t)
        for tj, dj in d.jumps:
            if tj >= t:
                break
            total += eta_c * dj / (1.0 + lam * dj)
        return total
    fn = eta.value if isinstance(eta, GFunction) else eta
    integrand = lambda s: fn(s) / (1.0 + lam * d.jump(s))
    return integrate(d, integrand, t, breakpoints=getattr(eta, "breakpoints", ()))


def phi_resolvent_fn(d: Derivator, lam: complex) -> GFunction:
    """φ for η ≡ 1 as a GFunction with exact evaluation and derivatives.

    φ'_g(t) = 1/(1 + λ·dg(t*)): classical FTC plus the exact jump quotient.
    Second derivative is 0 off jumps; at a jump the quotient of φ' gives 0 as
    well since φ' is the same constant 1 on both sides off D_g — except the
    quotient [φ'(t+)−φ'(t)]/dg = [1 − 1/(1+λd)]/d = λ/(1+λd), which is what
    the double-root basis algebra needs.
    """
    _check_lambda_regressive(d, lam, "phi_resolvent")

    def val(t: float) -> complex:
        return phi_resolvent(d, 1.0, lam, t)

    def d1(t: float) -> complex:
        ts = d.star(t)
        return 1.0 / (1.0 + lam * d.jump(ts))

    def d2(t: float) -> complex:
        ts = d.star(t)
        dj = d.jump(ts)
        if dj == 0.0:
            return 0.0
        return (1.0 - 1.0 / (1.0 + lam * dj)) / dj

    return GFunction(value=val, deriv1=d1, deriv2=d2, label=f"phi(λ={lam})")


def polynomial_exp_solution(d: Derivator, lam: complex, n: int, t: float) -> complex:
    """n-th g-derivative of v = φ·exp_g(λ;·) by the closed recursion:
    v_g^{(n)}(t) = n·λ^{n−1}·exp_g(λ;t) + λ^n·v(t);  n = 0 returns v(t)."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    _check_lambda_regressive(d, lam, "polynomial_exp_solution")
    e = GExponential(d, lam)
    v = phi_resolvent(d, 1.0, lam, t) * e.value(t)
    if n == 0:
        return v
    return n * lam ** (n - 1) * e.value(t) + lam ** n * v
