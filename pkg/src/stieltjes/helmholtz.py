"""Helmholtz equation v''_g + w0(t)²·v = f with a frequency switch at a jump.

w0 equals w1 on [0, t1] and w2 on (t1, T], where t1 is a jump point of the
derivator (typically g(t) = t + δ·χ_{t>t1}).  The homogeneous equation has a
piecewise-exponential basis

    y_k(t) = exp_g(λ_1^k; t)                                   on [0, t1],
    y_k(t) = α_1^k·exp_g(λ_2^1; t) + α_2^k·exp_g(λ_2^2; t)     on (t1, T],

with λ_j^1 = i·w_j, λ_j^2 = −i·w_j, and transmission coefficients α chosen so
value and first g-derivative match across t1 (the second derivative then
matches through the equation itself).  δ = 0 collapses everything to the
classical transmission problem, which is what classical_limit_study sweeps
towards.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .derivator import Derivator, single_jump_derivator
from .errors import SingularSystemError
from .gcalculus import GExponential
from .gmeasure import GFunction, cumulative
from .piecewise import PiecewiseConst
from .solver import SolutionBundle, _fn, _is_zero_forcing
from .wronskian import SolutionPair

__all__ = [
    "HelmholtzSpec",
    "AlphaCoefficients",
    "alpha_closed_form",
    "alpha_linear_solve",
    "transmission_residuals",
    "helmholtz_basis",
    "helmholtz_homogeneous",
    "helmholtz_particular",
    "helmholtz_wronskian",
    "ClassicalLimitRow",
    "classical_limit_study",
]


@dataclass
class HelmholtzSpec:
    """w1, w2: frequencies left/right of the switch point t1 (which should be
    a jump abscissa of the derivator; Δg(t1)=0 degenerates to the classical
    interface problem).  x0, v0: initial data.  f: forcing (scalar,
    PiecewiseConst, GFunction, or callable)."""

    w1: float
    w2: float
    t1: float
    x0: complex = 1.0
    v0: complex = 0.0
    f: object = 0.0

    def roots(self) -> tuple[complex, complex, complex, complex]:
        """(λ_1^1, λ_1^2, λ_2^1, λ_2^2) = (i·w1, −i·w1, i·w2, −i·w2)."""
        return 1j * self.w1, -1j * self.w1, 1j * self.w2, -1j * self.w2

    def omega(self) -> PiecewiseConst:
        return PiecewiseConst(breaks=(self.t1,), values=(self.w1, self.w2))


@dataclass
class AlphaCoefficients:
    """a_jk is the weight of the transmitted mode exp_g(λ_2^j;·) in y_k."""

    a11: complex
    a21: complex
    a12: complex
    a22: complex

    def for_basis(self, k: int) -> tuple[complex, complex]:
        return (self.a11, self.a21) if k == 1 else (self.a12, self.a22)


def _mode_data(d: Derivator, spec: HelmholtzSpec):
    lam11, lam12, lam21, lam22 = spec.roots()
    dg1 = d.jump(spec.t1)
    E = {lam: GExponential(d, lam) for lam in {lam11, lam12, lam21, lam22}}
    return (lam11, lam12, lam21, lam22), dg1, E


def alpha_closed_form(d: Derivator, spec: HelmholtzSpec) -> AlphaCoefficients:
    """Transmission coefficients in closed form:

        α_1^k = exp_g(λ_1^k;t1)(1+λ_1^k·dg)(λ_2^2−λ_1^k)
                / [exp_g(λ_2^1;t1)(1+λ_2^1·dg)(λ_2^2−λ_2^1)],

    and symmetrically for α_2^k (swap the transmitted modes).  The shared
    denominator factor λ_2^2 − λ_2^1 = −2i·w2 forbids w2 = 0.
    """
    if spec.w2 == 0.0:
        raise SingularSystemError("w2 = 0: the transmitted modes coincide")
    (lam11, lam12, lam21, lam22), dg1, E = _mode_data(d, spec)

    def pair_for(lam1k: complex) -> tuple[complex, complex]:
        B = E[lam1k].value(spec.t1) * (1.0 + lam1k * dg1)
        a1 = B * (lam22 - lam1k) / (E[lam21].value(spec.t1) * (1.0 + lam21 * dg1) * (lam22 - lam21))
        a2 = B * (lam21 - lam1k) / (E[lam22].value(spec.t1) * (1.0 + lam22 * dg1) * (lam21 - lam22))
        return a1, a2

    a11, a21 = pair_for(lam11)
    a12, a22 = pair_for(lam12)
    return AlphaCoefficients(a11=a11, a21=a21, a12=a12, a22=a22)


def alpha_linear_solve(d: Derivator, spec: HelmholtzSpec) -> AlphaCoefficients:
    """The same coefficients by solving the 2×2 matching system

        [ m1        m2      ] [α_1^k]   [    B_k    ]
        [ λ_2^1·m1  λ_2^2·m2] [α_2^k] = [ λ_1^k·B_k ],

    m_j = exp_g(λ_2^j;t1)·(1+λ_2^j·dg(t1)), with partial pivoting; a pivot
    below 1e-14 of the matrix scale is reported as singular.
    """
    (lam11, lam12, lam21, lam22), dg1, E = _mode_data(d, spec)
    m1 = E[lam21].value(spec.t1) * (1.0 + lam21 * dg1)
    m2 = E[lam22].value(spec.t1) * (1.0 + lam22 * dg1)
    A = [[m1, m2], [lam21 * m1, lam22 * m2]]
    scale = max(abs(A[i][j]) for i in range(2) for j in range(2))

    def solve2(rhs: list[complex]) -> tuple[complex, complex]:
        a = [row[:] for row in A]
        b = rhs[:]
        if abs(a[1][0]) > abs(a[0][0]):
            a[0], a[1] = a[1], a[0]
            b[0], b[1] = b[1], b[0]
        if abs(a[0][0]) <= 1e-14 * scale:
            raise SingularSystemError("transmission system is singular")
        m = a[1][0] / a[0][0]
        a[1][1] -= m * a[0][1]
        b[1] -= m * b[0]
        if abs(a[1][1]) <= 1e-14 * scale:
            raise SingularSystemError(
                f"transmission system is numerically singular (pivot {abs(a[1][1]):.3e})")
        x2 = b[1] / a[1][1]
        x1 = (b[0] - a[0][1] * x2) / a[0][0]
        return x1, x2

    B1 = E[lam11].value(spec.t1) * (1.0 + lam11 * dg1)
    B2 = E[lam12].value(spec.t1) * (1.0 + lam12 * dg1)
    a11, a21 = solve2([B1, lam11 * B1])
    a12, a22 = solve2([B2, lam12 * B2])
    return AlphaCoefficients(a11=a11, a21=a21, a12=a12, a22=a22)


def transmission_residuals(d: Derivator, spec: HelmholtzSpec,
                           alpha: AlphaCoefficients) -> tuple[float, float, float, float]:
    """|LHS − RHS| of the two matching conditions for each basis function:
    right limits of the value and of the first g-derivative at t1."""
    (lam11, lam12, lam21, lam22), dg1, E = _mode_data(d, spec)
    out = []
    for k, lam1k in ((1, lam11), (2, lam12)):
        a1, a2 = alpha.for_basis(k)
        B = E[lam1k].value(spec.t1) * (1.0 + lam1k * dg1)
        m1 = a1 * E[lam21].value(spec.t1) * (1.0 + lam21 * dg1)
        m2 = a2 * E[lam22].value(spec.t1) * (1.0 + lam22 * dg1)
        out.append(abs(B - (m1 + m2)))
        out.append(abs(lam1k * B - (lam21 * m1 + lam22 * m2)))
    return tuple(out)  # type: ignore[return-value]


def helmholtz_basis(d: Derivator, spec: HelmholtzSpec) -> SolutionPair:
    """The piecewise fundamental pair (y1, y2) with analytic derivatives.

    On [0, t1] each y_k is a single g-exponential; past t1 it is the
    α-combination of the two w2-modes.  Derivatives follow the branch (the
    value at t1 itself uses the left expression; its g-derivative there is
    the jump quotient, which the matching conditions make equal to
    λ_1^k·y_k(t1)).
    """
    alpha = alpha_closed_form(d, spec)
    (lam11, lam12, lam21, lam22), _, E = _mode_data(d, spec)
    t1 = spec.t1

    def make(k: int, lam1k: complex) -> GFunction:
        a1, a2 = alpha.for_basis(k)
        E1k, E21, E22 = E[lam1k], E[lam21], E[lam22]

        def val(t: float) -> complex:
            if t <= t1:
                return E1k.value(t)
            return a1 * E21.value(t) + a2 * E22.value(t)

        def d1(t: float) -> complex:
            ts = d.star(t)
            if ts <= t1:
                return lam1k * E1k.value(ts)
            return a1 * lam21 * E21.value(ts) + a2 * lam22 * E22.value(ts)

        def d2(t: float) -> complex:
            ts = d.star(t)
            if ts <= t1:
                return lam1k * lam1k * E1k.value(ts)
            return a1 * lam21 * lam21 * E21.value(ts) + a2 * lam22 * lam22 * E22.value(ts)

        return GFunction(value=val, deriv1=d1, deriv2=d2,
                         label=f"helmholtz y{k}", breakpoints=(t1,))

    return SolutionPair(y1=make(1, lam11), y2=make(2, lam12))


def helmholtz_homogeneous(d: Derivator, spec: HelmholtzSpec) -> SolutionBundle:
    """v_h = [(λ_1^2·x0 − v0)·y1 + (v0 − λ_1^1·x0)·y2] / (λ_1^2 − λ_1^1),
    matching v(0) = x0 and v'_g(0) = v0 exactly."""
    if spec.w1 == 0.0:
        raise SingularSystemError("w1 = 0: the basis pair is degenerate at 0")
    lam11, lam12 = 1j * spec.w1, -1j * spec.w1
    pair = helmholtz_basis(d, spec)
    c1 = (lam12 * spec.x0 - spec.v0) / (lam12 - lam11)
    c2 = (spec.v0 - lam11 * spec.x0) / (lam12 - lam11)
    y1, y2 = pair.y1, pair.y2

    v = GFunction(
        value=lambda t: c1 * y1.value(t) + c2 * y2.value(t),
        deriv1=lambda t: c1 * y1.deriv1(t) + c2 * y2.deriv1(t),
        deriv2=lambda t: c1 * y1.deriv2(t) + c2 * y2.deriv2(t),
        label="helmholtz homogeneous solution",
        breakpoints=(spec.t1,),
    )
    return SolutionBundle(v=v, method="closed-form-distinct")


def helmholtz_wronskian(d: Derivator, spec: HelmholtzSpec) -> GFunction:
    """W_g(y1, y2) in closed form:

        W_g(t) = (λ_1^2 − λ_1^1)·(1 + w0(t)²·dg(t)²)·exp_g(w0²·dg; t),

    where the exponential's coefficient vanishes off jumps, so its value is
    the running product of (1 + w0(t_j)²·d_j²) over crossed jumps.
    """
    w0 = spec.omega()
    lam11, lam12 = 1j * spec.w1, -1j * spec.w1
    jv = {tj: w0(tj) ** 2 * dj for tj, dj in d.jumps}
    Ew = GExponential(d, 0.0, jump_values=jv, label="w0²Δg")

    def val(t: float) -> complex:
        dg = d.jump(t)
        return (lam12 - lam11) * (1.0 + w0(t) ** 2 * dg * dg) * Ew.value(t)

    return GFunction(value=val, label="helmholtz Wronskian", breakpoints=(spec.t1,))


def helmholtz_particular(d: Derivator, spec: HelmholtzSpec, n: int = 4096) -> SolutionBundle:
    """Variation of parameters written against the closed-form Wronskian:

        v_p = c1·y1 + c2·y2,
        c1(t) = −∫_{[0,t)} (y2 + y2'_g·dg)·f / W_g dmu_g,
        c2(t) =  ∫_{[0,t)} (y1 + y1'_g·dg)·f / W_g dmu_g.

    Expanding y_k by branch recovers the piecewise integral formulas (region-1
    kernels up to t1, an atom at t1, transmitted-mode kernels past it); the
    expansion is left to the integrator, which splits at t1 anyway.
    """
    pair = helmholtz_basis(d, spec)
    y1, y2 = pair.y1, pair.y2
    W = helmholtz_wronskian(d, spec)
    ff = _fn(spec.f)

    if _is_zero_forcing(spec.f):
        zero = GFunction.const(0.0)
        return SolutionBundle(v=zero, method="varpar")

    def kern1(s: float) -> complex:
        dg = d.jump(s)
        return -(y2.value(s) + y2.deriv1(s) * dg) * ff(s) / W.value(s)

    def kern2(s: float) -> complex:
        dg = d.jump(s)
        return (y1.value(s) + y1.deriv1(s) * dg) * ff(s) / W.value(s)

    bp = (spec.t1,) + tuple(getattr(spec.f, "breakpoints", ()) or getattr(spec.f, "breaks", ()))
    c1 = cumulative(d, kern1, n, breakpoints=bp)
    c2 = cumulative(d, kern2, n, breakpoints=bp)

    def val(t: float) -> complex:
        return c1.value(t) * y1.value(t) + c2.value(t) * y2.value(t)

    def d1(t: float) -> complex:
        ts = d.star(t)
        return c1.value(ts) * y1.deriv1(ts) + c2.value(ts) * y2.deriv1(ts)

    def d2(t: float) -> complex:
        ts = d.star(t)
        return c1.value(ts) * y1.deriv2(ts) + c2.value(ts) * y2.deriv2(ts) + ff(ts)

    v = GFunction(value=val, deriv1=d1, deriv2=d2,
                  label="helmholtz particular solution", breakpoints=bp)
    return SolutionBundle(v=v, method="varpar")


# ---------------------------------------------------------------------------
# classical limit


@dataclass
class ClassicalLimitRow:
    delta: float
    max_error: float
    at: float = field(default=0.0)


def classical_limit_study(w1: float, w2: float, t1: float, x0: complex, v0: complex,
                          deltas: list[float], n: int = 512,
                          T: float = 3.0) -> list[ClassicalLimitRow]:
    """For each δ, solve the homogeneous problem on g(t) = t + δ·χ_{t>t1} and
    measure the sup distance on a uniform grid to the δ = 0 (classical
    transmission) solution.  Returns one row per δ, in the given order."""
    ref_d = single_jump_derivator(T, t1, 0.0)
    ref = helmholtz_homogeneous(ref_d, HelmholtzSpec(w1=w1, w2=w2, t1=t1, x0=x0, v0=v0))
    ts = np.linspace(0.0, T, n + 1)
    ref_vals = [ref.v.value(float(t)) for t in ts]

    rows: list[ClassicalLimitRow] = []
    for delta in deltas:
        d = single_jump_derivator(T, t1, float(delta))
        sol = helmholtz_homogeneous(d, HelmholtzSpec(w1=w1, w2=w2, t1=t1, x0=x0, v0=v0))
        err, at = max(
            (abs(sol.v.value(float(t)) - rv), float(t)) for t, rv in zip(ts, ref_vals))
        rows.append(ClassicalLimitRow(delta=float(delta), max_error=err, at=at))
    return rows
