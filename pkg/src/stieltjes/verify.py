"""Self-verification suites: each one checks a calculus identity or a
cross-path agreement at desk scale and reports its worst residual.

The suites are deterministic (fixed seeds, fixed derivators) so a run is
reproducible byte for byte.  ``quick`` runs the ten core identities; ``full``
adds the slower or more specialised ones.  Every suite is built either on an
exact identity (tolerance near machine precision, scaled for quadrature) or
on an independent oracle (tolerance set by the oracle's own discretization
error) — a failure therefore indicates a defect, not noise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .derivator import Derivator, DensityPiece, single_jump_derivator
from .gcalculus import (GExponential, g_derivative, g_exp_inverse_check, g_exp_product_check,
                        product_rule_residual)
from .gmeasure import GFunction, cumulative, integrate, integrate_by_parts_check
from .helmholtz import (HelmholtzSpec, alpha_closed_form, alpha_linear_solve,
                        classical_limit_study, helmholtz_basis, helmholtz_homogeneous,
                        helmholtz_particular, transmission_residuals)
from .oracle import riemann_stieltjes_sum, rk4_second_order, step_first_order
from .piecewise import PiecewiseConst
from .solver import (ProblemSpec, SolutionBundle, homogeneous_basis_const, particular_solution,
                     residual, solve_const_factorization, solve_const_ivp, solve_first_order,
                     solve_ivp)
from .wronskian import wronskian_exp_form, wronskian_relation_residual, wronskian_simplified

__all__ = ["SuiteResult", "SUITES", "run_suites", "suite_names"]


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    error: str = ""

    @property
    def passed(self) -> bool:
        return not self.error and self.max_residual <= self.tolerance


def _d_one_jump() -> Derivator:
    return single_jump_derivator(2.0, 1.0, 0.5)


def _d_plateau() -> Derivator:
    """Identity density with a plateau on (1, 2) and a jump at the plateau's
    left endpoint: exercises C_g, N_g± and D_g in one derivator."""
    return Derivator(
        T=3.0,
        density_pieces=(DensityPiece(0.0, 1.0, "const", 1.0),
                        DensityPiece(1.0, 2.0, "zero", None),
                        DensityPiece(2.0, 3.0, "const", 1.0)),
        jumps=((1.0, 0.25),),
    )


def _d_two_jumps() -> Derivator:
    return Derivator(
        T=2.0,
        density_pieces=(DensityPiece(0.0, 2.0, "poly", (0.5, 0.75)),),
        jumps=((0.7, 0.3), (1.4, 0.2)),
    )


def _corpus_derivators() -> list[Derivator]:
    return [_d_one_jump(), _d_plateau(), _d_two_jumps()]


def _exp_corpus(rng: random.Random, count: int):
    """(derivator, λ) pairs with |Re λ| small enough that magnitudes stay
    O(10) — keeps quotient noise under the identity tolerances."""
    ds = _corpus_derivators()
    out = []
    for _ in range(count):
        d = rng.choice(ds)
        lam = complex(rng.uniform(-0.6, 0.6), rng.uniform(-1.5, 1.5))
        out.append((d, lam))
    return out


# ---------------------------------------------------------------------------
# suites


def suite_ftc_roundtrip() -> float:
    worst = 0.0
    for d in _corpus_derivators():
        for lam in (0.4, -0.3 + 1.1j, 0.25 - 0.8j):
            F = GExponential(d, lam).as_gfunction()
            for t in [0.3 * d.T, 0.5 * d.T, 0.9 * d.T, d.T]:
                lhs = integrate(d, F.deriv1, t)
                worst = max(worst, abs(lhs - (F.value(t) - F.value(0.0))))
    return worst


def suite_integrate_vs_riemann() -> float:
    worst = 0.0
    for d in _corpus_derivators():
        for f in (lambda s: s, lambda s: math.sin(1.3 * s) + 0.5):
            ref = riemann_stieltjes_sum(d, GFunction(value=f), d.T, 1 << 15)
            val = integrate(d, f, d.T)
            worst = max(worst, abs(val - ref))
    return worst


def suite_gexp_vs_stepping() -> float:
    worst = 0.0
    rng = random.Random(7)
    for d, lam in _exp_corpus(rng, 6):
        E = GExponential(d, lam)
        p = GFunction(value=lambda s, lam=lam: lam)
        ref = step_first_order(d, p, 1.0, d.T, 1 << 15)
        worst = max(worst, abs(E.value(d.T) - ref))
    return worst


def suite_exp_product_law() -> float:
    rng = random.Random(11)
    worst = 0.0
    for d, lam in _exp_corpus(rng, 12):
        q = complex(rng.uniform(-0.6, 0.6), rng.uniform(-1.5, 1.5))
        for t in (0.4 * d.T, 0.8 * d.T, d.T):
            worst = max(worst, g_exp_product_check(d, lam, q, t))
    return worst


def suite_exp_inverse_law() -> float:
    rng = random.Random(13)
    worst = 0.0
    for d, lam in _exp_corpus(rng, 12):
        for t in (0.4 * d.T, 0.8 * d.T, d.T):
            worst = max(worst, g_exp_inverse_check(d, lam, t))
    return worst


def suite_product_rule() -> float:
    worst = 0.0
    for d in _corpus_derivators():
        f1 = GExponential(d, 0.25).as_gfunction()
        f2 = GExponential(d, -0.2 + 0.9j).as_gfunction()
        pts = {0.25 * d.T, 0.6 * d.T}
        pts.update(tj for tj, _ in d.jumps)
        for a, b in d.constancy_components:
            pts.add(0.5 * (a + b))
        for t in sorted(pts):
            worst = max(worst, product_rule_residual(d, f1, f2, t))
    return worst


def suite_wronskian_relation() -> float:
    worst = 0.0
    for d in _corpus_derivators():
        for P, Q in ((0.0, 1.0), (1.0, 0.25 + 1.0), (0.3, -0.1)):
            pair = homogeneous_basis_const(d, P, Q)
            for t in list(d.grid(64)) + [tj for tj, _ in d.jumps]:
                worst = max(worst, wronskian_relation_residual(d, pair, P, Q, float(t)))
    return worst


def suite_wronskian_exp_form() -> float:
    worst = 0.0
    for d in _corpus_derivators():
        for P, Q in ((0.0, 1.0), (1.0, 1.25)):
            pair = homogeneous_basis_const(d, P, Q)
            w0 = wronskian_simplified(d, pair, 0.0)
            for t in d.grid(64):
                lhs = wronskian_simplified(d, pair, float(t))
                worst = max(worst, abs(lhs - wronskian_exp_form(d, P, Q, w0, float(t))))
    return worst


def _cross_path_specs() -> list[tuple[Derivator, ProblemSpec]]:
    d1, d2 = _d_one_jump(), _d_two_jumps()
    return [
        (d1, ProblemSpec(P=0.0, Q=1.0, f=0.5, x0=1.0, v0=0.0)),
        (d1, ProblemSpec(P=2.0, Q=1.0, f=0.3, x0=1.0, v0=0.5)),     # double root
        (d2, ProblemSpec(P=3.0, Q=2.0, f=0.0, x0=0.5, v0=-0.2)),    # distinct real
        (d2, ProblemSpec(P=1.0, Q=1.25, f=1.0, x0=0.0, v0=1.0)),    # complex pair
    ]


def suite_solver_cross_path(n: int = 1024) -> float:
    worst = 0.0
    for d, spec in _cross_path_specs():
        a = solve_const_ivp(d, spec.P, spec.Q, spec.f, spec.x0, spec.v0, n=n)
        b = solve_const_factorization(d, spec.P, spec.Q, spec.f, spec.x0, spec.v0, n=n)
        pair = homogeneous_basis_const(d, spec.P, spec.Q)
        c = solve_ivp(d, spec, pair, n=n)
        for t in d.grid(40):
            va, vb, vc = (s.v.value(float(t)) for s in (a, b, c))
            worst = max(worst, abs(va - vb), abs(vb - vc), abs(va - vc))
    return worst


def suite_particular_solution_residual(n: int = 1024) -> float:
    """Residual of the variation-of-parameters particular solution with the
    second derivative recomputed numerically from the attached first one.
    This closes the loop the analytic attachment cannot check: the attached
    deriv2 repeats the coefficient integrals, but the quotient of deriv1
    feels their actual slopes."""
    worst = 0.0
    for d, spec in _cross_path_specs()[:2]:
        pair = homogeneous_basis_const(d, spec.P, spec.Q)
        vp = particular_solution(d, spec.P, spec.Q, spec.f, pair, n=n)
        probe = GFunction(value=vp.v.value, deriv1=vp.v.deriv1, deriv2=None,
                          breakpoints=vp.v.breakpoints)
        pspec = ProblemSpec(P=spec.P, Q=spec.Q, f=spec.f, x0=0.0, v0=0.0)
        worst = max(worst, residual(d, SolutionBundle(v=probe, method=vp.method), pspec, n=48))
    return worst


def suite_solution_residual(n: int = 1024) -> float:
    worst = 0.0
    for d, spec in _cross_path_specs():
        for sol in (solve_const_ivp(d, spec.P, spec.Q, spec.f, spec.x0, spec.v0, n=n),
                    solve_const_factorization(d, spec.P, spec.Q, spec.f, spec.x0, spec.v0, n=n)):
            worst = max(worst, residual(d, sol, spec, n=64))
    return worst


def suite_first_order_residual(n: int = 2048) -> float:
    """u from the first-order formula, differentiated numerically from its
    values, against p·u + f."""
    worst = 0.0
    for d in (_d_one_jump(), _d_two_jumps()):
        for p, f in ((0.8, 0.3), (-0.4 + 1.0j, 1.0)):
            u = solve_first_order(d, p, f, 1.0, n=n).v
            bare = GFunction(value=u.value, breakpoints=u.breakpoints)
            for t in d.grid(24):
                ts = d.star(float(t))
                got = g_derivative(d, bare, ts)
                worst = max(worst, abs(got - (p * u.value(ts) + f)))
    return worst


def suite_ibp_identity() -> float:
    worst = 0.0
    for d in _corpus_derivators():
        w1 = GExponential(d, 0.3).as_gfunction()
        w2 = GExponential(d, -0.25 + 0.7j).as_gfunction()
        for t in (0.5 * d.T, d.T):
            worst = max(worst, integrate_by_parts_check(d, w1, w2, t))
    return worst


_HSPEC = HelmholtzSpec(w1=1.0, w2=2.0, t1=1.0, x0=1.0, v0=0.0)
_HD = single_jump_derivator(3.0, 1.0, 0.5)


def suite_alpha_consistency() -> float:
    worst = 0.0
    for delta in (0.5, 0.2, 0.0):
        d = single_jump_derivator(3.0, 1.0, delta)
        a = alpha_closed_form(d, _HSPEC)
        b = alpha_linear_solve(d, _HSPEC)
        for k in ("a11", "a21", "a12", "a22"):
            va, vb = getattr(a, k), getattr(b, k)
            worst = max(worst, abs(va - vb) / max(abs(va), 1e-30))
        worst = max(worst, *transmission_residuals(d, _HSPEC, a))
    return worst


def suite_helmholtz_basis_residual() -> float:
    pair = helmholtz_basis(_HD, _HSPEC)
    Q = _HSPEC.omega() * _HSPEC.omega()
    spec = ProblemSpec(P=0.0, Q=Q, f=0.0, x0=0.0, v0=0.0)
    return max(residual(_HD, SolutionBundle(v=y, method="closed-form-distinct"), spec, n=64)
               for y in (pair.y1, pair.y2))


def suite_helmholtz_vs_varpar(n: int = 1024) -> float:
    spec = HelmholtzSpec(w1=1.0, w2=2.0, t1=1.0, x0=1.0, v0=0.0, f=1.0)
    vp = helmholtz_particular(_HD, spec, n=n)
    pair = helmholtz_basis(_HD, spec)
    Q = spec.omega() * spec.omega()
    ref = particular_solution(_HD, 0.0, Q, 1.0, pair, n=n)
    return max(abs(vp.v.value(float(t)) - ref.v.value(float(t))) for t in _HD.grid(48))


def suite_classical_limit() -> float:
    """0 when the δ-sweep decreases strictly to ≤ 10% of its start; otherwise
    the sweep is reported as an outright failure.  The δ=0 curve is measured
    against segment-aware RK4 and that error is the suite residual."""
    rows = classical_limit_study(1.0, 2.0, 1.0, 1.0, 0.0, [0.4, 0.2, 0.1, 0.05, 0.025], n=192)
    errs = [r.max_error for r in rows]
    if any(b >= a for a, b in zip(errs, errs[1:])) or errs[-1] > 0.1 * errs[0]:
        return math.inf

    d0 = single_jump_derivator(3.0, 1.0, 0.0)
    sol = helmholtz_homogeneous(d0, _HSPEC)
    worst = 0.0
    for t in (0.5, 1.0, 1.5, 2.25, 3.0):
        ref = rk4_second_order(0.0, lambda s: 1.0 if s <= 1.0 else 4.0, lambda s: 0.0,
                               1.0, 0.0, t, 4000, breakpoints=(1.0,))
        worst = max(worst, abs(sol.v.value(t) - ref))
    return worst


# name -> (runner, tolerance, in quick level?)
SUITES: dict[str, tuple] = {
    "ftc-roundtrip": (suite_ftc_roundtrip, 1e-8, True),
    "integrate-vs-riemann": (suite_integrate_vs_riemann, 1e-2, True),
    "gexp-vs-stepping": (suite_gexp_vs_stepping, 1e-2, True),
    "exp-product-law": (suite_exp_product_law, 1e-10, True),
    "exp-inverse-law": (suite_exp_inverse_law, 1e-10, True),
    "product-rule": (suite_product_rule, 1e-6, True),
    "wronskian-relation": (suite_wronskian_relation, 1e-8, True),
    "solver-cross-path": (suite_solver_cross_path, 1e-7, True),
    "particular-solution residual": (suite_particular_solution_residual, 1e-6, True),
    "alpha-consistency": (suite_alpha_consistency, 1e-10, True),
    "wronskian-exp-form": (suite_wronskian_exp_form, 1e-8, False),
    "solution-residual": (suite_solution_residual, 1e-9, False),
    "first-order-residual": (suite_first_order_residual, 1e-6, False),
    "ibp-identity": (suite_ibp_identity, 1e-8, False),
    "helmholtz-basis-residual": (suite_helmholtz_basis_residual, 1e-6, False),
    "helmholtz-vs-varpar": (suite_helmholtz_vs_varpar, 1e-7, False),
    "classical-limit": (suite_classical_limit, 1e-7, False),
}


def suite_names(level: str = "quick") -> list[str]:
    if level not in ("quick", "full"):
        raise ValueError(f"unknown verification level {level!r}")
    return [name for name, (_, _, quick) in SUITES.items() if quick or level == "full"]


def run_suites(level: str = "quick") -> list[SuiteResult]:
    """Run the suites for the level, in declaration order.  A suite that
    raises is reported as failed (residual ∞) rather than aborting the run —
    a verification pass must survive the very defects it is hunting."""
    results = []
    for name in suite_names(level):
        runner, tol, _ = SUITES[name]
        try:
            results.append(SuiteResult(name=name, max_residual=float(runner()), tolerance=tol))
        except Exception as e:  # noqa: BLE001 — deliberate: report, don't die
            results.append(SuiteResult(name=name, max_residual=math.inf, tolerance=tol,
                                       error=f"{type(e).__name__}: {e}"))
    return results
