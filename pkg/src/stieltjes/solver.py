"""Second-order linear Stieltjes IVPs:  v''_g + P v'_g + Q v = f.

Three construction routes are implemented and kept deliberately independent
so they can be played against each other:

* closed forms for constant coefficients (distinct and double roots of the
  characteristic polynomial), assembled from g-exponentials and resolvent
  integrals with analytic derivative attachments;
* a factorization route that peels the equation into two chained first-order
  solves  v1'_g = λ1 v1 + f,  v'_g = λ2 v + v1  (equal to the nested-integral
  closed form because exp_g(λ1;·)/exp_g(λ2;·) is itself a g-exponential);
* variation of parameters for an arbitrary solution basis: a second
  homogeneous solution y2 = φ·y1 and a particular solution c1·y1 + c2·y2
  with Wronskian-weighted coefficient integrals.

Every route returns a SolutionBundle whose deriv1/deriv2 come from the
theorem identities, not from numeric differentiation, so residual checks
against the equation stay meaningful.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from . import faults
from .derivator import Derivator
from .errors import ContractError, PreconditionError, RegressivityError
from .gcalculus import GExponential, coef_value, phi_resolvent
from .gmeasure import GFunction, cumulative, integrate
from .piecewise import PiecewiseConst
from .wronskian import SolutionPair, check_condPQ, homogeneous_exp_coefficient, wronskian_g, wronskian_simplified

__all__ = [
    "ProblemSpec",
    "SolutionBundle",
    "solve_first_order",
    "char_roots",
    "homogeneous_basis_const",
    "solve_const_ivp",
    "solve_const_factorization",
    "second_homogeneous_solution",
    "particular_solution",
    "solve_ivp",
    "solve_q0_reduction",
    "residual",
]

NEAR_DOUBLE = 1e-8


@dataclass
class ProblemSpec:
    """Data of the IVP: coefficients P, Q, forcing f, and v(0)=x0, v'_g(0)=v0.

    P, Q, f may each be a complex constant, a PiecewiseConst, a GFunction, or
    a plain callable; they must be bounded on [0, T].
    """

    P: object
    Q: object
    f: object
    x0: complex
    v0: complex


@dataclass
class SolutionBundle:
    v: GFunction
    method: str  # closed-form-distinct | closed-form-double | varpar | factorization | first-order


def _fn(f):
    if isinstance(f, (int, float, complex)):
        c = complex(f)
        return lambda s: c
    if isinstance(f, GFunction):
        return f.value
    return f


def _breaks(*fs) -> tuple[float, ...]:
    out: list[float] = []
    for f in fs:
        out.extend(getattr(f, "breakpoints", ()) or getattr(f, "breaks", ()))
    return tuple(out)


def _is_zero_forcing(f) -> bool:
    return isinstance(f, (int, float, complex)) and complex(f) == 0.0


def _check_root_regressive(d: Derivator, lam: complex) -> None:
    for tj, dj in d.jumps:
        if 1.0 + lam * dj == 0.0:
            raise RegressivityError(
                f"condlambda2 violated for root λ={lam} at jump t={tj}")


# ---------------------------------------------------------------------------
# first order


def solve_first_order(d: Derivator, p, f, u0: complex, n: int = 4096) -> SolutionBundle:
    """u'_g = p·u + f, u(0) = u0:

        u(t) = u0·exp_g(p;t) + exp_g(p;t)·∫_{[0,t)} exp_g(p;s)^{-1} f(s)/(1+p(s)dg(s)) dmu_g

    Regressivity of p is required at *all* jumps up front (unlike the bare
    g-exponential, which only needs the jumps it actually crosses).
    """
    E = GExponential(d, p, label="p")
    for tj, dj in d.jumps:
        if E.factor_at(tj) == 0.0:
            raise RegressivityError(f"1 + p·Δg vanishes at jump t={tj}")
    ff = _fn(f)

    if _is_zero_forcing(f):
        K = GFunction.const(0.0)
    else:
        def kern(s: float) -> complex:
            return ff(s) / (E.value(s) * (1.0 + E.p_at(s) * d.jump(s)))

        K = cumulative(d, kern, n, breakpoints=_breaks(f, p))

    def val(t: float) -> complex:
        return E.value(t) * (u0 + K.value(t))

    def d1(t: float) -> complex:
        ts = d.star(t)
        return E.p_at(ts) * val(ts) + ff(ts)

    u = GFunction(value=val, deriv1=d1, label="first-order solution",
                  breakpoints=_breaks(f, p))
    return SolutionBundle(v=u, method="first-order")


# ---------------------------------------------------------------------------
# constant coefficients


def char_roots(P: complex, Q: complex) -> tuple[complex, complex]:
    """Roots of λ² + Pλ + Q = 0, sorted by (Re, Im); double root −P/2 twice."""
    P, Q = complex(P), complex(Q)
    disc = cmath.sqrt(P * P - 4.0 * Q)
    r1 = (-P - disc) / 2.0
    r2 = (-P + disc) / 2.0
    return tuple(sorted((r1, r2), key=lambda z: (z.real, z.imag)))  # type: ignore[return-value]


def homogeneous_basis_const(d: Derivator, P: complex, Q: complex) -> SolutionPair:
    """Fundamental pair for constant P, Q.

    Distinct roots: (exp_g(λ1;·), exp_g(λ2;·)).  A (near-)double root λ
    replaces the second element by φ·exp_g(λ;·) with φ = ∫ 1/(1+λ·dg) dmu_g,
    whose derivatives obey the recursion y2^(n) = n·λ^{n-1}·exp + λ^n·y2.
    """
    lam1, lam2 = char_roots(P, Q)
    if abs(lam1 - lam2) < NEAR_DOUBLE:
        lam = -complex(P) / 2.0
        _check_root_regressive(d, lam)
        E = GExponential(d, lam, label=f"λ={lam}")
        y1 = E.as_gfunction()

        def val(t: float) -> complex:
            return phi_resolvent(d, 1.0, lam, t) * E.value(t)

        def d1(t: float) -> complex:
            ts = d.star(t)
            return E.value(ts) + lam * val(ts)

        def d2(t: float) -> complex:
            ts = d.star(t)
            return 2.0 * lam * E.value(ts) + lam * lam * val(ts)

        y2 = GFunction(value=val, deriv1=d1, deriv2=d2, label=f"φ·exp_g(λ={lam})")
        return SolutionPair(y1=y1, y2=y2)

    for lam in (lam1, lam2):
        _check_root_regressive(d, lam)
    y1 = GExponential(d, lam1, label=f"λ={lam1}").as_gfunction()
    y2 = GExponential(d, lam2, label=f"λ={lam2}").as_gfunction()
    return SolutionPair(y1=y1, y2=y2)


def _forcing_kernel(d: Derivator, E: GExponential, lam: complex, f, n: int) -> GFunction:
    """cumulative of exp_g(λ;s)^{-1}·f(s)/(1+λ·dg(s))."""
    ff = _fn(f)

    def kern(s: float) -> complex:
        return ff(s) / (E.value(s) * (1.0 + lam * d.jump(s)))

    return cumulative(d, kern, n, breakpoints=_breaks(f))


def solve_const_ivp(d: Derivator, P: complex, Q: complex, f, x0: complex, v0: complex,
                    n: int = 4096) -> SolutionBundle:
    """Closed-form solution for constant coefficients.

    Distinct roots λ1 ≠ λ2:

        v = (λ2 x0 − v0)/(λ2−λ1)·E1 + (v0 − λ1 x0)/(λ2−λ1)·E2
            + [E1·I1 − E2·I2]/(λ1−λ2),
        I_k(t) = ∫_{[0,t)} E_k(s)^{-1} f(s)/(1+λ_k dg(s)) dmu_g(s);

    double root λ (taken when |λ1−λ2| < 1e-8):

        v = x0·E + (v0−λx0)·φ·E − E·J + φ·E·K,
        J = ∫ E^{-1}[φ·f/(1+λdg) + f·dg/(1+λdg)²],   K = ∫ E^{-1} f/(1+λdg),

    with derivatives assembled via the variation-of-parameters cancellation
    (the forcing integrals differentiate as if they were constants, plus one
    +f in the second derivative).
    """
    lam1, lam2 = char_roots(P, Q)
    ff = _fn(f)
    zero_f = _is_zero_forcing(f)

    if abs(lam1 - lam2) >= NEAR_DOUBLE:
        for lam in (lam1, lam2):
            _check_root_regressive(d, lam)
        E1 = GExponential(d, lam1)
        E2 = GExponential(d, lam2)
        A1 = (lam2 * x0 - v0) / (lam2 - lam1)
        A2 = (v0 - lam1 * x0) / (lam2 - lam1)
        if zero_f:
            I1 = I2 = GFunction.const(0.0)
        else:
            I1 = _forcing_kernel(d, E1, lam1, f, n)
            I2 = _forcing_kernel(d, E2, lam2, f, n)
        den = lam1 - lam2

        def combo(t: float, k1: complex, k2: complex, extra: complex) -> complex:
            return (A1 * k1 * E1.value(t) + A2 * k2 * E2.value(t)
                    + (k1 * E1.value(t) * I1.value(t) - k2 * E2.value(t) * I2.value(t)) / den
                    + extra)

        def val(t: float) -> complex:
            return combo(t, 1.0, 1.0, 0.0)

        def d1(t: float) -> complex:
            ts = d.star(t)
            return combo(ts, lam1, lam2, 0.0)

        def d2(t: float) -> complex:
            ts = d.star(t)
            return combo(ts, lam1 * lam1, lam2 * lam2, ff(ts))

        v = GFunction(value=val, deriv1=d1, deriv2=d2,
                      label="const-coefficient solution", breakpoints=_breaks(f))
        return SolutionBundle(v=v, method="closed-form-distinct")

    lam = -complex(P) / 2.0
    _check_root_regressive(d, lam)
    E = GExponential(d, lam)
    phi = lambda t: phi_resolvent(d, 1.0, lam, t)
    if zero_f:
        J = K = GFunction.const(0.0)
    else:
        def kernJ(s: float) -> complex:
            dg = d.jump(s)
            fac = 1.0 + lam * dg
            return ff(s) * (phi(s) / fac + dg / (fac * fac)) / E.value(s)

        def kernK(s: float) -> complex:
            return ff(s) / (E.value(s) * (1.0 + lam * d.jump(s)))

        J = cumulative(d, kernJ, n, breakpoints=_breaks(f))
        K = cumulative(d, kernK, n, breakpoints=_breaks(f))

    # y1 = E, y2 = φ·E;  v = x0·y1 + (v0−λx0)·y2 + c1·y1 + c2·y2 with
    # c1 = −J, c2 = K; derivatives via y1' = λE, y2' = E + λ·y2, plus +f.
    def parts(t: float):
        e = E.value(t)
        y2 = phi(t) * e
        c1 = x0 - J.value(t)
        c2 = (v0 - lam * x0) + K.value(t)
        return e, y2, c1, c2

    def val(t: float) -> complex:
        e, y2, c1, c2 = parts(t)
        return c1 * e + c2 * y2

    def d1(t: float) -> complex:
        ts = d.star(t)
        e, y2, c1, c2 = parts(ts)
        return c1 * lam * e + c2 * (e + lam * y2)

    def d2(t: float) -> complex:
        ts = d.star(t)
        e, y2, c1, c2 = parts(ts)
        return c1 * lam * lam * e + c2 * (2.0 * lam * e + lam * lam * y2) + ff(ts)

    v = GFunction(value=val, deriv1=d1, deriv2=d2,
                  label="const-coefficient solution (double root)", breakpoints=_breaks(f))
    return SolutionBundle(v=v, method="closed-form-double")


def solve_const_factorization(d: Derivator, P: complex, Q: complex, f, x0: complex,
                              v0: complex, n: int = 4096) -> SolutionBundle:
    """The same IVP via the operator factorization (D − λ2)(D − λ1):

        v1'_g = λ1·v1 + f,   v1(0) = v0 − λ2·x0,
        v'_g  = λ2·v + v1,   v(0)  = x0,

    each solved by the first-order formula.  Expanding the composition gives
    the nested-integral closed form; keeping it as two passes makes this an
    independent cross-check of solve_const_ivp with exact derivatives
    v' = λ2 v + v1 and v'' = λ2² v + (λ1+λ2) v1 + f.
    """
    lam1, lam2 = char_roots(P, Q)
    for lam in (lam1, lam2):
        _check_root_regressive(d, lam)
    ff = _fn(f)
    inner = solve_first_order(d, lam1, f, v0 - lam2 * x0, n=n)
    v1 = inner.v
    outer = solve_first_order(d, lam2, v1, x0, n=n)
    val = outer.v.value

    def d1(t: float) -> complex:
        ts = d.star(t)
        return lam2 * val(ts) + v1.value(ts)

    def d2(t: float) -> complex:
        ts = d.star(t)
        return lam2 * lam2 * val(ts) + (lam1 + lam2) * v1.value(ts) + ff(ts)

    v = GFunction(value=val, deriv1=d1, deriv2=d2,
                  label="factorization solution", breakpoints=_breaks(f))
    return SolutionBundle(v=v, method="factorization")


# ---------------------------------------------------------------------------
# variation of parameters


def second_homogeneous_solution(d: Derivator, P, Q, y1: GFunction, n: int = 4096) -> GFunction:
    """Reduction of order: y2 = φ·y1 with

        φ(t) = ∫_{[0,t)} exp_g(−P+Q·dg; s) / (y1(s)·[y1(s) + y1'_g(s)·dg(s)]) dmu_g,

    giving W̃_g(y1, y2) = exp_g(−P+Q·dg; ·) exactly.  y1 and y1(t+) must stay
    away from zero; that is sampled on a grid rather than proven.
    """
    if y1.deriv1 is None:
        raise ContractError("second_homogeneous_solution needs y1.deriv1")
    check_condPQ(d, P, Q)
    E = homogeneous_exp_coefficient(d, P, Q)

    probe = d.grid(max(n // 16, 64))
    for t in probe:
        base = abs(y1.value(t))
        shifted = abs(y1.value(t) + y1.deriv1(t) * d.jump(t))
        if min(base, shifted) <= 1e-9:
            raise PreconditionError(f"y1 (or its right limit) vanishes near t={t}")

    def kern(s: float) -> complex:
        y = y1.value(s)
        return E.value(s) / (y * (y + y1.deriv1(s) * d.jump(s)))

    phi = cumulative(d, kern, n, breakpoints=_breaks(y1, P, Q))

    def val(t: float) -> complex:
        return phi.value(t) * y1.value(t)

    def d1(t: float) -> complex:
        ts = d.star(t)
        return y1.deriv1(ts) * phi.value(ts) + E.value(ts) / y1.value(ts)

    d2 = None
    if y1.deriv2 is not None:
        def d2(t: float) -> complex:
            ts = d.star(t)
            return y1.deriv2(ts) * phi.value(ts) - coef_value(P, ts) * E.value(ts) / y1.value(ts)

    return GFunction(value=val, deriv1=d1, deriv2=d2, label=f"φ·{y1.label or 'y1'}",
                     breakpoints=_breaks(y1, P, Q))


def particular_solution(d: Derivator, P, Q, f, pair: SolutionPair, n: int = 4096) -> SolutionBundle:
    """Variation of parameters: v_p = c1·y1 + c2·y2 with

        c1(t) = ∫_{[0,t)} −(y2 + y2'_g·dg)·f / W_g dmu_g,
        c2(t) = ∫_{[0,t)}  (y1 + y1'_g·dg)·f / W_g dmu_g,

    and the proven cancellations v_p' = c1·y1' + c2·y2',
    v_p'' = c1·y1'' + c2·y2'' + f.  W_g must stay away from zero.
    """
    check_condPQ(d, P, Q)
    y1, y2 = pair.y1, pair.y2
    ff = _fn(f)

    probe = d.grid(max(n // 16, 64))
    wmin, wat = min(((abs(wronskian_g(d, pair, t)), float(t)) for t in probe), key=lambda z: z[0])
    if wmin <= 1e-12:
        raise PreconditionError(f"g-Wronskian vanishes near t={wat} (|W|={wmin:.3e})")

    sign = 1.0 if faults.active("c1-sign") else -1.0

    def kern1(s: float) -> complex:
        dg = d.jump(s)
        return sign * (y2.value(s) + y2.deriv1(s) * dg) * ff(s) / wronskian_g(d, pair, s)

    def kern2(s: float) -> complex:
        dg = d.jump(s)
        return (y1.value(s) + y1.deriv1(s) * dg) * ff(s) / wronskian_g(d, pair, s)

    bp = _breaks(f, y1, y2, P, Q)
    c1 = cumulative(d, kern1, n, breakpoints=bp)
    c2 = cumulative(d, kern2, n, breakpoints=bp)

    def val(t: float) -> complex:
        return c1.value(t) * y1.value(t) + c2.value(t) * y2.value(t)

    def d1(t: float) -> complex:
        ts = d.star(t)
        return c1.value(ts) * y1.deriv1(ts) + c2.value(ts) * y2.deriv1(ts)

    d2fn = None
    if y1.deriv2 is not None and y2.deriv2 is not None:
        def d2fn(t: float) -> complex:
            ts = d.star(t)
            return (c1.value(ts) * y1.deriv2(ts) + c2.value(ts) * y2.deriv2(ts) + ff(ts))

    v = GFunction(value=val, deriv1=d1, deriv2=d2fn, label="particular solution",
                  breakpoints=bp)
    return SolutionBundle(v=v, method="varpar")


def solve_ivp(d: Derivator, spec: ProblemSpec, pair: SolutionPair, n: int = 4096) -> SolutionBundle:
    """Full IVP solution v = v_p + c1·y1 + c2·y2 for a given fundamental pair;
    the homogeneous coefficients come from the initial data through W̃(0)."""
    y1, y2 = pair.y1, pair.y2
    w0 = wronskian_simplified(d, pair, 0.0)
    if w0 == 0.0:
        raise PreconditionError("W̃(0) = 0: the pair cannot match arbitrary initial data")

    if _is_zero_forcing(spec.f):
        vp = SolutionBundle(v=GFunction.const(0.0), method="varpar")
    else:
        vp = particular_solution(d, spec.P, spec.Q, spec.f, pair, n=n)
    c1 = (spec.x0 * y2.deriv1(0.0) - spec.v0 * y2.value(0.0)) / w0
    c2 = (spec.v0 * y1.value(0.0) - spec.x0 * y1.deriv1(0.0)) / w0
    vpv = vp.v

    def val(t: float) -> complex:
        return vpv.value(t) + c1 * y1.value(t) + c2 * y2.value(t)

    def d1(t: float) -> complex:
        ts = d.star(t)
        return vpv.deriv1(ts) + c1 * y1.deriv1(ts) + c2 * y2.deriv1(ts)

    d2fn = None
    if vpv.deriv2 is not None and y1.deriv2 is not None and y2.deriv2 is not None:
        def d2fn(t: float) -> complex:
            ts = d.star(t)
            return vpv.deriv2(ts) + c1 * y1.deriv2(ts) + c2 * y2.deriv2(ts)

    v = GFunction(value=val, deriv1=d1, deriv2=d2fn, label="solution",
                  breakpoints=_breaks(spec.f, y1, y2))
    return SolutionBundle(v=v, method="varpar")


def solve_q0_reduction(d: Derivator, P, f, x0: complex, v0: complex, n: int = 4096) -> SolutionBundle:
    """The Q ≡ 0 equation v'' + P v' = f by first-order reduction:
    w = v'_g solves w'_g = −P·w + f, then v = x0 + ∫_{[0,t)} w dmu_g.

    Expanding the composition reproduces the closed form

        v(t) = x0 + v0·∫ exp_g(−P;s) dmu_g
                  + ∫ exp_g(−P;s)·[∫_{[0,s)} exp_g(−P;u)^{-1} f(u)/(1−P·dg(u)) dmu_g(u)] dmu_g(s).
    """
    negP = -P if isinstance(P, PiecewiseConst) else (
        -complex(P) if isinstance(P, (int, float, complex)) else (lambda s, _fnP=_fn(P): -_fnP(s)))
    w = solve_first_order(d, negP, f, v0, n=n).v
    V = cumulative(d, w, n, breakpoints=_breaks(f, P))

    def val(t: float) -> complex:
        return x0 + V.value(t)

    v = GFunction(value=val,
                  deriv1=lambda s: w.value(d.star(s)),
                  deriv2=lambda s: w.deriv1(d.star(s)),
                  label="Q=0 reduction solution", breakpoints=_breaks(f, P))
    return SolutionBundle(v=v, method="first-order")


# ---------------------------------------------------------------------------
# residual check


def residual(d: Derivator, sol: SolutionBundle, spec: ProblemSpec, n: int = 256) -> float:
    """max over grid(d, n) of |v''_g + P·v'_g + Q·v − f|.

    Analytic derivatives are used when attached, numeric quotients otherwise;
    points inside constancy components are redirected to t* (the equation
    constrains them only through their redirection point).
    """
    from .gcalculus import g_derivative, g_derivative2

    v = sol.v
    fP, fQ, ffn = spec.P, spec.Q, _fn(spec.f)
    worst = 0.0
    for t in d.grid(n):
        ts = d.star(float(t))
        v2 = v.deriv2(ts) if v.deriv2 is not None else g_derivative2(d, v, ts)
        v1 = v.deriv1(ts) if v.deriv1 is not None else g_derivative(d, v, ts)
        r = abs(v2 + coef_value(fP, ts) * v1 + coef_value(fQ, ts) * v.value(ts) - ffn(ts))
        worst = max(worst, r)
    return worst
