"""Derivator structure: evaluation, point classification, validation."""

import math

import pytest
from hypothesis import given, strategies as st

from stieltjes import DensityPiece, Derivator, identity_derivator, single_jump_derivator


def test_identity_is_the_identity():
    d = identity_derivator(2.0)
    for t in (0.0, 0.3, 1.0, 2.0):
        assert d.eval_g(t) == t
    assert d.jumps == ()
    assert d.constancy_components == ()
    assert d.validate() == []


def test_left_continuity_at_jump(d_jump):
    assert d_jump.eval_g(1.0) == 1.0
    assert d_jump.eval_g_right(1.0) == 1.5
    assert d_jump.eval_g(1.0 + 1e-12) == pytest.approx(1.5, abs=1e-11)
    assert d_jump.jump(1.0) == 0.5
    assert d_jump.jump(0.5) == 0.0


def test_g0_offsets_everything():
    d = single_jump_derivator(2.0, 1.0, 0.5, g0=3.0)
    assert d.eval_g(0.0) == 3.0
    assert d.eval_g(2.0) == 5.5


def test_poly_density_exact_prefix():
    # rho(s) = 0.5 + 0.75 s on [1, 2): antiderivative 0.5 s + 0.375 s^2
    d = Derivator(
        T=2.0,
        density_pieces=(DensityPiece(0.0, 1.0, "const", 0.5),
                        DensityPiece(1.0, 2.0, "poly", (0.5, 0.75))),
        jumps=((0.7, 0.3), (1.4, 0.2)),
    )
    expected = 0.5 + (0.5 * 2 + 0.375 * 4) - (0.5 + 0.375) + 0.3 + 0.2
    assert d.eval_g(2.0) == pytest.approx(expected, abs=1e-14)
    assert d.ac_increment(0.0, 2.0) == pytest.approx(expected - 0.5, abs=1e-14)


def test_classification(d_plateau):
    assert d_plateau.classify(0.5).kind == "regular"
    c = d_plateau.classify(1.0)
    assert c.kind == "jump" and c.jump == 0.25
    assert d_plateau.classify(1.5).kind == "constancy"
    assert d_plateau.classify(1.5).component == (1.0, 2.0)
    # right endpoint of the flat stretch is not a jump, so it is ng-plus
    assert d_plateau.classify(2.0).kind == "ng-plus"
    assert d_plateau.classify(2.5).kind == "regular"


def test_star_redirects_constancy_to_right_endpoint(d_plateau):
    assert d_plateau.star(1.5) == 2.0
    assert d_plateau.star(0.5) == 0.5
    assert d_plateau.star(2.0) == 2.0


def test_constancy_split_at_interior_jump():
    d = Derivator(
        T=2.0,
        density_pieces=(DensityPiece(0.0, 0.5, "const", 1.0),
                        DensityPiece(0.5, 1.5, "zero"),
                        DensityPiece(1.5, 2.0, "const", 1.0)),
        jumps=((1.0, 0.1),),
    )
    assert d.constancy_components == ((0.5, 1.0), (1.0, 1.5))
    assert d.validate() == []


def test_validate_standing_hypotheses():
    bad0 = Derivator(T=1.0, density_pieces=(DensityPiece(0.0, 1.0, "const", 1.0),),
                     jumps=((0.0, 0.5),))
    assert any("0 ∈ D_g" in p for p in bad0.validate())

    badT = Derivator(T=1.0, density_pieces=(DensityPiece(0.0, 1.0, "const", 1.0),),
                     jumps=((1.0, 0.5),))
    assert any("T ∈ D_g" in p for p in badT.validate())

    flat_end = Derivator(T=1.0, density_pieces=(DensityPiece(0.0, 0.5, "const", 1.0),
                                                DensityPiece(0.5, 1.0, "zero")))
    assert any("N_g⁺" in p for p in flat_end.validate())

    flat_start = Derivator(T=1.0, density_pieces=(DensityPiece(0.0, 0.5, "zero"),
                                                  DensityPiece(0.5, 1.0, "const", 1.0)))
    assert any("N_g⁻" in p for p in flat_start.validate())


def test_validate_structure():
    gap = Derivator(T=2.0, density_pieces=(DensityPiece(0.0, 0.8, "const", 1.0),
                                           DensityPiece(1.0, 2.0, "const", 1.0)))
    assert any("tile" in p for p in gap.validate())

    neg = Derivator(T=1.0, density_pieces=(DensityPiece(0.0, 1.0, "const", -1.0),))
    assert any("negative" in p for p in neg.validate())

    bad_jump = Derivator(T=1.0, density_pieces=(DensityPiece(0.0, 1.0, "const", 1.0),),
                         jumps=((0.5, -0.1),))
    assert any("nonpositive" in p for p in bad_jump.validate())


def test_grid_contains_structural_points(d_two_jumps):
    grid = d_two_jumps.grid(64)
    for pt in (0.0, 0.7, 1.0, 1.4, 2.0):
        assert any(math.isclose(x, pt, abs_tol=1e-12) for x in grid)
    assert all(b >= a for a, b in zip(grid, grid[1:]))


def test_dict_roundtrip(d_two_jumps):
    doc = d_two_jumps.to_dict()
    back = Derivator.from_dict(doc)
    assert back.T == d_two_jumps.T
    assert back.jumps == d_two_jumps.jumps
    for t in (0.0, 0.35, 0.7, 1.2, 1.9, 2.0):
        assert back.eval_g(t) == pytest.approx(d_two_jumps.eval_g(t), abs=1e-14)


@given(st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_g_is_nondecreasing(s, t):
    d = single_jump_derivator(2.0, 1.0, 0.5)
    lo, hi = min(s, t), max(s, t)
    assert d.eval_g(hi) >= d.eval_g(lo)


@given(st.floats(0.0, 3.0))
def test_right_limit_dominates(t):
    d = Derivator(
        T=3.0,
        density_pieces=(DensityPiece(0.0, 1.0, "const", 1.0),
                        DensityPiece(1.0, 2.0, "zero"),
                        DensityPiece(2.0, 3.0, "const", 1.0)),
        jumps=((1.0, 0.25),),
    )
    assert d.eval_g_right(t) == pytest.approx(d.eval_g(t) + d.jump(t), abs=1e-14)


@given(st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_ac_increment_plus_atoms_is_total(s, t):
    d = single_jump_derivator(2.0, 1.0, 0.5)
    lo, hi = min(s, t), max(s, t)
    atoms = 0.5 if lo <= 1.0 < hi else 0.0
    total = d.eval_g(hi) - d.eval_g(lo)
    assert d.ac_increment(lo, hi) + atoms == pytest.approx(total, abs=1e-12)
