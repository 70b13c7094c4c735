"""Acceptance gate: the eleven headline checks, one test each.

Every test prints a single `criterion NN: PASS — detail` line (visible with
-s or -rA) and enforces the stated tolerance and, where given, the runtime
budget.  Tolerances here are contractual; do not loosen them.
"""

import math
import os
import random
import subprocess
import sys
import time

import pytest

from stieltjes import (DensityPiece, Derivator, GExponential, GFunction, HelmholtzSpec,
                       PiecewiseConst, ProblemSpec, SolutionBundle, SolutionPair,
                       alpha_closed_form, alpha_linear_solve, classical_limit_study,
                       cumulative, g_exp_inverse_check, g_exp_product_check,
                       helmholtz_basis, helmholtz_homogeneous, homogeneous_basis_const,
                       identity_derivator, integrate, product_rule_residual, residual,
                       riemann_stieltjes_sum, rk4_second_order, second_homogeneous_solution,
                       single_jump_derivator, solve_const_factorization, solve_const_ivp,
                       solve_ivp, solve_q0_reduction, step_first_order,
                       transmission_residuals, wronskian_exp_form,
                       wronskian_relation_residual, wronskian_simplified)


def _corpus():
    return [
        identity_derivator(2.0),
        single_jump_derivator(2.0, 1.0, 0.5),
        Derivator(T=3.0,
                  density_pieces=(DensityPiece(0.0, 1.0, "const", 1.0),
                                  DensityPiece(1.0, 2.0, "zero"),
                                  DensityPiece(2.0, 3.0, "const", 1.0)),
                  jumps=((1.0, 0.25),)),
        Derivator(T=2.0,
                  density_pieces=(DensityPiece(0.0, 1.0, "const", 0.5),
                                  DensityPiece(1.0, 2.0, "poly", (0.5, 0.75))),
                  jumps=((0.7, 0.3), (1.4, 0.2))),
    ]


def _report(num, detail):
    print(f"criterion {num:02d}: PASS — {detail}")


# ---------------------------------------------------------------------------


def test_c01_ftc_roundtrip():
    """∫_[0,t) F'_g dμ_g == F(t) − F(0) for 20 pairs with analytic F'_g."""
    start = time.perf_counter()
    worst, pairs = 0.0, 0
    for d in _corpus():
        g, dg = d.eval_g, d.jump
        fns = []
        for lam in (0.5, -0.4 + 0.9j, 1.1):
            E = GExponential(d, lam)
            fns.append((E.value, lambda s, l=lam, E=E: l * E.value(s)))
        fns.append((g, lambda s: 1.0))
        fns.append((lambda s: g(s) ** 2, lambda s: 2 * g(s) + dg(s)))
        for F, Fp in fns:
            pairs += 1
            Phi = cumulative(d, Fp, 4096)
            F0 = complex(F(0.0))
            for t in d.grid(4096):
                t = float(t)
                worst = max(worst, abs(Phi.value(t) - (complex(F(t)) - F0)))
    elapsed = time.perf_counter() - start
    assert pairs >= 20
    assert worst <= 1e-8
    assert elapsed < 5.0
    _report(1, f"{pairs} pairs, max deviation {worst:.3e}, {elapsed:.2f}s")


def test_c02_exponential_algebra():
    """Product and inverse laws for 50 random triples with 0–3 jumps."""
    start = time.perf_counter()
    rng = random.Random(20260814)
    worst = 0.0
    for _ in range(50):
        T = rng.uniform(1.0, 3.0)
        njumps = rng.randrange(4)
        ts = sorted(rng.uniform(0.15 * T, 0.85 * T) for _ in range(njumps))
        jumps = tuple((t, rng.uniform(0.1, 0.6)) for t in ts)
        d = Derivator(T=T, density_pieces=(DensityPiece(0.0, T, "const", 1.0),),
                      jumps=jumps)
        p = complex(rng.uniform(-0.6, 0.6), rng.uniform(-1.5, 1.5))
        q = complex(rng.uniform(-0.6, 0.6), rng.uniform(-1.5, 1.5))
        if any(abs(1 + c * dj) < 0.05 for c in (p, q) for _, dj in jumps):
            p, q = 0.5 * p, 0.5 * q
        for t in (0.3 * T, 0.7 * T, T):
            worst = max(worst,
                        g_exp_product_check(d, p, q, t),
                        g_exp_inverse_check(d, p, t))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-10
    assert elapsed < 2.0
    _report(2, f"50 triples, max law residual {worst:.3e}, {elapsed:.2f}s")


def test_c03_product_rule():
    """Residual at regular points, jump abscissas, and t* redirections."""
    worst = 0.0
    for d in _corpus():
        g, dg = d.eval_g, d.jump
        f1 = GExponential(d, 0.5).as_gfunction()
        f2 = GExponential(d, -0.3 + 0.8j).as_gfunction()
        f3 = GFunction(value=g, deriv1=lambda s: 1.0, deriv2=lambda s: 0.0)
        pts = {0.0, d.T, 0.45 * d.T}
        pts.update(tj for tj, _ in d.jumps)
        pts.update(0.5 * (a + b) for a, b in d.constancy_components)
        for t in sorted(pts):
            for a, b in ((f1, f2), (f1, f3), (f3, f2)):
                worst = max(worst, product_rule_residual(d, a, b, t))
    assert worst <= 1e-6
    _report(3, f"max product-rule residual {worst:.3e}")


def test_c04_wronskian_identities():
    """W vs (1−PΔg+QΔg²)·W̃, and W̃ vs its exponential form, everywhere."""
    worst_rel = worst_exp = 0.0

    def sweep(d, pair, P, Q):
        nonlocal worst_rel, worst_exp
        w0 = wronskian_simplified(d, pair, 0.0)
        for t in d.grid(128):
            t = float(t)
            worst_rel = max(worst_rel, wronskian_relation_residual(d, pair, P, Q, t))
            got = wronskian_exp_form(d, P, Q, w0, t)
            worst_exp = max(worst_exp, abs(got - wronskian_simplified(d, pair, t)))

    dj = single_jump_derivator(3.0, 1.0, 0.5)
    spec = HelmholtzSpec(w1=1.0, w2=2.0, t1=1.0)
    sweep(dj, helmholtz_basis(dj, spec), 0.0, spec.omega() * spec.omega())
    for d in _corpus():
        for P, Q in ((1.5, 0.5), (1.0, 1.25), (2.0, 1.0)):
            sweep(d, homogeneous_basis_const(d, P, Q), P, Q)
    assert worst_rel <= 1e-8
    assert worst_exp <= 1e-8
    _report(4, f"relation {worst_rel:.3e}, exp-form {worst_exp:.3e}")


SOLVE_SPECS = [
    # (P, Q, f, x0, v0): distinct real, complex pair, double — forced and not
    (1.5, 0.5, 0.0, 1.0, -1.0),
    (1.5, 0.5, 0.5, 0.0, 1.0),
    (1.0, 1.25, 0.0, 1.0, 0.0),
    (1.0, 1.25, 1.0, 1.0, 0.5),
    (2.0, 1.0, 0.0, 1.0, 0.0),
    (2.0, 1.0, 0.3, 0.5, -0.5),
]
_BUNDLES = []  # filled by c05, reused by c06


def test_c05_solver_cross_path():
    start = time.perf_counter()
    worst, count = 0.0, 0
    for d in (_corpus()[0], _corpus()[1], _corpus()[3]):
        for P, Q, f, x0, v0 in SOLVE_SPECS[:4]:
            count += 1
            spec = ProblemSpec(P=P, Q=Q, f=f, x0=x0, v0=v0)
            a = solve_const_ivp(d, P, Q, f, x0, v0, n=512)
            b = solve_const_factorization(d, P, Q, f, x0, v0, n=512)
            c = solve_ivp(d, spec, homogeneous_basis_const(d, P, Q), n=512)
            _BUNDLES.append((d, spec, a))
            _BUNDLES.append((d, spec, b))
            _BUNDLES.append((d, spec, c))
            for t in d.grid(64):
                t = float(t)
                va, vb, vc = a.v.value(t), b.v.value(t), c.v.value(t)
                worst = max(worst, abs(va - vb), abs(va - vc), abs(vb - vc))
    # the double-root cases go through their own closed form
    for P, Q, f, x0, v0 in SOLVE_SPECS[4:]:
        count += 1
        d = _corpus()[1]
        spec = ProblemSpec(P=P, Q=Q, f=f, x0=x0, v0=v0)
        a = solve_const_ivp(d, P, Q, f, x0, v0, n=512)
        b = solve_const_factorization(d, P, Q, f, x0, v0, n=512)
        _BUNDLES.append((d, spec, a))
        _BUNDLES.append((d, spec, b))
        for t in d.grid(64):
            t = float(t)
            worst = max(worst, abs(a.v.value(t) - b.v.value(t)))
    elapsed = time.perf_counter() - start
    assert count >= 10
    assert worst <= 1e-7
    assert elapsed < 10.0
    _report(5, f"{count} specs, max pairwise gap {worst:.3e}, {elapsed:.2f}s")


def test_c06_residual_acceptance():
    assert _BUNDLES, "cross-path run must populate the bundle pool first"
    worst_analytic = worst_numeric = 0.0
    for d, spec, sol in _BUNDLES:
        worst_analytic = max(worst_analytic, residual(d, sol, spec, n=48))
        stripped = SolutionBundle(
            v=GFunction(value=sol.v.value, deriv1=sol.v.deriv1,
                        breakpoints=sol.v.breakpoints),
            method=sol.method)
        worst_numeric = max(worst_numeric, residual(d, stripped, spec, n=24))
    assert worst_analytic <= 1e-9
    assert worst_numeric <= 1e-6
    _report(6, f"{len(_BUNDLES)} bundles, analytic {worst_analytic:.3e}, "
               f"numeric {worst_numeric:.3e}")


def test_c07_alpha_consistency():
    cases = [
        (HelmholtzSpec(w1=1.0, w2=2.0, t1=1.0), 0.5),
        (HelmholtzSpec(w1=1.5, w2=0.7, t1=0.8), 0.3),
        (HelmholtzSpec(w1=1.0, w2=2.0, t1=1.0), 0.0),
    ]
    worst_rel = worst_match = worst_res = 0.0
    for spec, delta in cases:
        d = single_jump_derivator(3.0, spec.t1, delta)
        a, b = alpha_closed_form(d, spec), alpha_linear_solve(d, spec)
        for x, y in ((a.a11, b.a11), (a.a21, b.a21), (a.a12, b.a12), (a.a22, b.a22)):
            worst_rel = max(worst_rel, abs(x - y) / max(abs(x), 1e-30))
        worst_match = max(worst_match, *transmission_residuals(d, spec, a))
        pair = helmholtz_basis(d, spec)
        prob = ProblemSpec(P=0.0, Q=spec.omega() * spec.omega(), f=0.0, x0=0.0, v0=0.0)
        for y in (pair.y1, pair.y2):
            worst_res = max(worst_res, residual(
                d, SolutionBundle(v=y, method="varpar"), prob, n=96))
    assert worst_rel <= 1e-12
    assert worst_match <= 1e-10
    assert worst_res <= 1e-6
    _report(7, f"α rel {worst_rel:.3e}, matching {worst_match:.3e}, "
               f"basis residual {worst_res:.3e}")


def test_c08_classical_limit():
    start = time.perf_counter()
    deltas = (0.4, 0.2, 0.1, 0.05, 0.025)
    rows = classical_limit_study(1.0, 2.0, 1.0, 1.0, 0.0, deltas=deltas, n=512)
    errs = [r.max_error for r in rows]
    assert all(a > b for a, b in zip(errs, errs[1:])), errs
    assert errs[-1] <= 0.1 * errs[0]

    # δ=0 series against the segment-wise RK4 oracle
    d0 = single_jump_derivator(3.0, 1.0, 0.0)
    spec = HelmholtzSpec(w1=1.0, w2=2.0, t1=1.0, x0=1.0, v0=0.0)
    sol0 = helmholtz_homogeneous(d0, spec)
    w = lambda s: 1.0 if s <= 1.0 else 2.0
    worst_rk4 = 0.0
    for t in [3.0 * k / 32.0 for k in range(1, 33)]:
        ref = rk4_second_order(0.0, lambda s: w(s) ** 2, lambda s: 0.0,
                               1.0, 0.0, t, 4096, breakpoints=(1.0,))
        worst_rk4 = max(worst_rk4, abs(complex(sol0.v.value(t)) - ref))
    assert worst_rk4 <= 1e-7

    # second derivative: jump of |w2²−w1²|·|v(1)| at δ=0 ...
    left, right = complex(sol0.v.deriv2(1.0)), complex(sol0.v.deriv2(1.0 + 1e-12))
    expected = abs(2.0 ** 2 - 1.0 ** 2) * abs(complex(sol0.v.value(1.0)))
    assert abs(right - left) == pytest.approx(expected, rel=1e-3)
    # ... and g-continuity for every δ > 0
    for delta in deltas:
        dd = single_jump_derivator(3.0, 1.0, delta)
        sol = helmholtz_homogeneous(dd, spec)
        dev = abs(complex(sol.v.deriv2(1.0)) - complex(sol.v.deriv2(1.0 - 1e-9)))
        assert dev <= 1e-6, (delta, dev)

    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report(8, f"errors {['%.3f' % e for e in errs]}, rk4 gap {worst_rk4:.3e}, "
               f"{elapsed:.1f}s")


def test_c09_variable_coefficient_reduction():
    """Q ≡ 0 with a genuinely nonconstant P: reduction of order from y1 ≡ 1
    must land on the first-order closed form."""
    d = single_jump_derivator(2.0, 1.0, 0.5)
    P = PiecewiseConst(breaks=(1.2,), values=(1.0, 2.0))
    f, x0, v0 = 0.5, 1.0, 0.5
    y1 = GFunction.const(1.0)
    y2 = second_homogeneous_solution(d, P, 0.0, y1, n=1024)
    pair = SolutionPair(y1=y1, y2=y2)
    spec = ProblemSpec(P=P, Q=0.0, f=f, x0=x0, v0=v0)
    via_pair = solve_ivp(d, spec, pair, n=1024)
    closed = solve_q0_reduction(d, P, f, x0, v0, n=1024)
    worst = max(abs(via_pair.v.value(float(t)) - closed.v.value(float(t)))
                for t in d.grid(64))
    assert worst <= 1e-7
    _report(9, f"max deviation from closed form {worst:.3e}")


def test_c10_oracle_convergence():
    d = single_jump_derivator(2.0, 1.0, 0.5)
    f = lambda s: math.sin(2 * s)
    ref = integrate(d, f, 2.0)
    errs = [abs(riemann_stieltjes_sum(d, f, 2.0, 2 ** k) - ref) for k in range(8, 15)]
    ratios_rs = [b / a for a, b in zip(errs, errs[1:])]
    assert all(0.375 <= r <= 0.625 for r in ratios_rs), ratios_rs

    p = 0.8
    want = GExponential(d, p).value(2.0)
    errs = [abs(step_first_order(d, lambda s: p, 1.0, 2.0, 2 ** k) - want)
            for k in range(8, 15)]
    ratios_exp = [b / a for a, b in zip(errs, errs[1:])]
    assert all(0.375 <= r <= 0.625 for r in ratios_exp), ratios_exp
    _report(10, f"halving ratios: integrate {min(ratios_rs):.3f}–{max(ratios_rs):.3f}, "
                f"exp {min(ratios_exp):.3f}–{max(ratios_exp):.3f}")


def test_c11_mutation_sensitivity():
    flagged = {}
    for fault in ("c1-sign", "wronskian-drop-dg2", "gexp-drop-jump"):
        env = dict(os.environ, STIELTJES_FAULTS=fault)
        proc = subprocess.run([sys.executable, "-m", "stieltjes", "verify",
                               "--level", "quick"],
                              capture_output=True, text=True, env=env, timeout=300)
        assert proc.returncode == 1, f"{fault}: exit {proc.returncode}"
        fails = [l for l in proc.stdout.splitlines() if l.startswith("FAIL")]
        flagged[fault] = fails
        if fault == "c1-sign":
            assert any("particular-solution residual" in l for l in fails)
    _report(11, "; ".join(f"{k} → {len(v)} suite(s)" for k, v in flagged.items()))
