"""Wronskians of solution pairs and the first-order law they satisfy."""

import math

import pytest
from hypothesis import assume, given, strategies as st

from stieltjes import (GFunction, PreconditionError, ProblemSpec, SolutionPair,
                       char_roots, check_condPQ, homogeneous_basis_const,
                       identity_derivator, independence_test, single_jump_derivator,
                       solve_ivp, wronskian_exp_form, wronskian_g, wronskian_inverse,
                       wronskian_relation_residual, wronskian_simplified)


def test_abel_identity_on_identity_g():
    # P=3, Q=2: roots -2, -1; simplified Wronskian is (λ2-λ1)·e^{-Pt}
    d = identity_derivator(2.0)
    pair = homogeneous_basis_const(d, 3.0, 2.0)
    for t in (0.0, 0.5, 1.3, 2.0):
        assert wronskian_simplified(d, pair, t) == pytest.approx(
            math.exp(-3.0 * t), rel=1e-12)
        # with no jumps the two Wronskians coincide
        assert wronskian_g(d, pair, t) == pytest.approx(
            wronskian_simplified(d, pair, t), rel=1e-12)


def test_relation_residual_vanishes_including_jump(d_jump):
    pair = homogeneous_basis_const(d_jump, 1.0, 1.25)
    for t in [float(x) for x in d_jump.grid(32)]:
        assert wronskian_relation_residual(d_jump, pair, 1.0, 1.25, t) < 1e-10


def test_exp_form_reproduces_simplified_wronskian(d_jump):
    P, Q = 2.0, 0.75
    pair = homogeneous_basis_const(d_jump, P, Q)
    w0 = wronskian_simplified(d_jump, pair, 0.0)
    for t in (0.0, 0.6, 1.0, 1.2, 2.0):
        got = wronskian_exp_form(d_jump, P, Q, w0, t)
        assert got == pytest.approx(wronskian_simplified(d_jump, pair, t), rel=1e-10)


def test_exp_form_jump_factor(d_jump):
    # crossing the jump multiplies the simplified Wronskian by 1+(-P+Q·δ)·δ
    P, Q = 2.0, 0.75
    w0 = -1.0  # λ2 - λ1 for roots -1.5, -0.5
    before = wronskian_exp_form(d_jump, P, Q, w0, 1.0)
    after = wronskian_exp_form(d_jump, P, Q, w0, 1.0 + 1e-13)
    factor = 1 + (-P + Q * 0.5) * 0.5
    assert after / before == pytest.approx(factor, rel=1e-9)


def test_inverse_is_reciprocal(d_jump):
    P, Q = 1.0, 0.5
    pair = homogeneous_basis_const(d_jump, P, Q)
    w0 = wronskian_simplified(d_jump, pair, 0.0)
    for t in (0.2, 1.0, 1.7):
        prod = wronskian_g(d_jump, pair, t) * wronskian_inverse(d_jump, P, Q, w0, t)
        assert prod == pytest.approx(1.0, rel=1e-9)


def test_condPQ_violation_raises(d_jump):
    # 1 - P·δ + Q·δ² = 1 - 2 + 1 = 0 for P=4, Q=4, δ=1/2
    with pytest.raises(PreconditionError, match="condPQ"):
        check_condPQ(d_jump, 4.0, 4.0)
    check_condPQ(d_jump, 1.0, 1.0)  # fine


def _g_and_g_squared(d):
    """y1 = g, y2 = g²: a pair whose simplified Wronskian vanishes at 0
    (g(0) = 0) while the functions are plainly independent."""
    g, dg = d.eval_g, d.jump
    y1 = GFunction(value=g, deriv1=lambda t: 1.0, deriv2=lambda t: 0.0)
    y2 = GFunction(value=lambda t: g(t) ** 2, deriv1=lambda t: 2 * g(t) + dg(t))
    return SolutionPair(y1=y1, y2=y2)


def test_vanishing_wronskian_does_not_mean_dependence(d_jump):
    pair = _g_and_g_squared(d_jump)
    assert wronskian_simplified(d_jump, pair, 0.0) == 0.0
    assert abs(wronskian_simplified(d_jump, pair, 1.5)) > 1.0
    assert independence_test(d_jump, pair) == "independent"


def test_degenerate_initial_data_is_rejected(d_jump):
    # W̃(0) = 0: the pair cannot match arbitrary (x0, v0), even though
    # it is linearly independent
    pair = _g_and_g_squared(d_jump)
    spec = ProblemSpec(P=0.0, Q=0.0, f=0.0, x0=1.0, v0=0.0)
    with pytest.raises(PreconditionError):
        solve_ivp(d_jump, spec, pair)


def test_dependent_pair_is_inconclusive(d_jump):
    pair = homogeneous_basis_const(d_jump, 1.5, 0.5)
    scaled = SolutionPair(y1=pair.y1, y2=GFunction(
        value=lambda t: 3.0 * pair.y1.value(t),
        deriv1=lambda t: 3.0 * pair.y1.deriv1(t),
        deriv2=lambda t: 3.0 * pair.y1.deriv2(t)))
    assert independence_test(d_jump, scaled) == "inconclusive"


@given(st.floats(-1.5, 1.5), st.floats(-1.0, 1.5), st.floats(0.0, 2.0))
def test_relation_residual_random_const_coefficients(P, Q, t):
    d = single_jump_derivator(2.0, 1.0, 0.5)
    assume(abs(1 - P * 0.5 + Q * 0.25) > 1e-3)
    # both characteristic roots must stay regressive at the jump
    assume(all(abs(1 + lam * 0.5) > 1e-2 for lam in char_roots(P, Q)))
    pair = homogeneous_basis_const(d, P, Q)
    assert wronskian_relation_residual(d, pair, P, Q, t) < 1e-8
