"""Integration against the Lebesgue–Stieltjes measure mu_g.

The measure splits into an absolutely continuous part (density rho dt) and
atoms d_j at the jump abscissas.  All integrals here are over the half-open
interval [0, t): the atom at the left endpoint of a cell counts, the one at
t itself does not.  That convention is what makes the fundamental theorem
  F(t) = F(0) + ∫_{[0,t)} F'_g dmu_g
hold exactly across jumps, so it is applied with no exceptions anywhere in
the package.

The a.c. part uses memoized adaptive Simpson with Richardson correction
(acceptance test |S_fine - S_coarse| <= 15 eps, correction delta/15), never
across a structural point of the derivator.  Integrands are sampled at a
hair's width inside each smooth segment because functions in this calculus
take their *atom* value exactly at a jump abscissa — the a.c. integral needs
the one-sided limit instead.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .derivator import Derivator
from .errors import ContractError, IntegrationError, PreconditionError

__all__ = ["GFunction", "integrate", "ac_integral", "cumulative", "integrate_by_parts_check"]

MAX_DEPTH = 40
DEFAULT_TOL = 1e-10


@dataclass
class GFunction:
    """A function on [0, T] bundled with optional analytic g-derivatives.

    ``value`` is the function itself; ``deriv1``/``deriv2`` are its first and
    second g-derivatives when known in closed form (None otherwise).  When
    deriv1 is present it must satisfy deriv1(t_j)*dg(t_j) = value(t_j+) -
    value(t_j) at every jump — the jump quotient is not a limit, it *is* the
    g-derivative there.  ``breakpoints`` lists abscissas where the function
    (or a coefficient inside it) is allowed to be discontinuous beyond the
    derivator's own structure; quadrature splits cells there.
    """

    value: Callable[[float], complex]
    deriv1: Callable[[float], complex] | None = None
    deriv2: Callable[[float], complex] | None = None
    label: str = ""
    breakpoints: tuple[float, ...] = ()

    def __call__(self, t: float) -> complex:
        return self.value(t)

    @classmethod
    def const(cls, c: complex, label: str = "") -> "GFunction":
        return cls(value=lambda t: c, deriv1=lambda t: 0.0, deriv2=lambda t: 0.0,
                   label=label or f"const({c})")

    @classmethod
    def wrap(cls, f, label: str = "") -> "GFunction":
        """Accept a GFunction as-is, else wrap a plain callable."""
        if isinstance(f, GFunction):
            return f
        extra = tuple(getattr(f, "breaks", ()))
        return cls(value=f, label=label or getattr(f, "__name__", ""), breakpoints=extra)


def _sample(f, s: float) -> complex:
    v = complex(f(s))
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise IntegrationError(f"non-finite sample at t={s!r}")
    return v


def _simpson_mem(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = _sample(f, m)
    return m, fm, abs(b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _asr(f, a, fa, b, fb, eps, whole, m, fm, depth):
    lm, flm, left = _simpson_mem(f, a, fa, m, fm)
    rm, frm, right = _simpson_mem(f, m, fm, b, fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    return (_asr(f, a, fa, m, fm, eps / 2.0, left, lm, flm, depth - 1)
            + _asr(f, m, fm, b, fb, eps / 2.0, right, rm, frm, depth - 1))


def _adaptive_simpson(f, a, b, eps):
    fa = _sample(f, a)
    fb = _sample(f, b)
    m, fm, whole = _simpson_mem(f, a, fa, b, fb)
    return _asr(f, a, fa, b, fb, eps, whole, m, fm, MAX_DEPTH)


def _nudge(lo: float, hi: float) -> float:
    # a few ulps: enough that lo+eta > lo in floats, small enough that the
    # skipped sliver's measure stays far below the 1e-10 budget
    scale = max(abs(lo), abs(hi), 1.0)
    return max((hi - lo) * 1e-14, scale * 1e-15)


def _ac_over_segment(d: Derivator, f, lo: float, hi: float, piece, eps: float) -> complex:
    """Quadrature of f * rho over one smooth segment, endpoints pulled inward."""
    if piece.is_zero() or hi <= lo:
        return 0.0
    eta = _nudge(lo, hi)
    if hi - lo <= 4.0 * eta:
        mid = 0.5 * (lo + hi)
        return _sample(f, mid) * d.ac_increment(lo, hi)
    if piece.kind == "const":
        rho = float(piece.value)
        return rho * _adaptive_simpson(f, lo + eta, hi - eta, eps / max(rho, 1e-300))
    integrand = lambda s: f(s) * piece.rho(s)
    return _adaptive_simpson(integrand, lo + eta, hi - eta, eps)


def _split_segments(d: Derivator, upto: float, extra: Iterable[float]):
    """Smooth segments of [0, upto): structural points plus caller breakpoints."""
    pts = {0.0, upto}
    pts.update(x for x in d.structural_points() if 0.0 < x < upto)
    pts.update(float(x) for x in extra if 0.0 < x < upto)
    cuts = sorted(pts)
    segs = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        i = bisect_right(d._piece_starts, lo) - 1
        segs.append((lo, hi, d.density_pieces[max(i, 0)]))
    return segs


def ac_integral(d: Derivator, f, t: float, tol: float = DEFAULT_TOL,
                breakpoints: Iterable[float] = ()) -> complex:
    """∫ over [0, t) of f against the a.c. part of mu_g only (no atoms)."""
    if t <= 0.0:
        return 0.0
    fn = f.value if isinstance(f, GFunction) else f
    extra = tuple(breakpoints) + tuple(getattr(f, "breakpoints", ()))
    segs = _split_segments(d, t, extra)
    width = sum(hi - lo for lo, hi, _ in segs) or 1.0
    total: complex = 0.0
    for lo, hi, piece in segs:
        total += _ac_over_segment(d, fn, lo, hi, piece, tol * (hi - lo) / width)
    return total


def integrate(d: Derivator, f, t: float, tol: float = DEFAULT_TOL,
              breakpoints: Iterable[float] = ()) -> complex:
    """∫_{[0,t)} f dmu_g: adaptive quadrature on the a.c. part plus exact
    atom terms f(t_j)*d_j for every jump t_j < t."""
    if not (0.0 <= t <= d.T):
        raise PreconditionError(f"integration endpoint t={t} outside [0, {d.T}]")
    fn = f.value if isinstance(f, GFunction) else f
    total = ac_integral(d, f, t, tol=tol, breakpoints=breakpoints)
    for tj, dj in d.jumps:
        if tj >= t:
            break
        total += _sample(fn, tj) * dj
    return total


def cumulative(d: Derivator, f, n: int = 4096, tol: float = DEFAULT_TOL,
               breakpoints: Iterable[float] = ()) -> GFunction:
    """Prefix integral Phi(t) = ∫_{[0,t)} f dmu_g as a GFunction.

    Builds per-cell quadrature on grid(n) once; evaluation between grid
    points performs one extra partial-cell quadrature (no polynomial
    interpolation, so the half-open jump bookkeeping stays exact).  Phi is
    g-continuous with Phi(0) = 0 and g-derivative f.
    """
    fn = f.value if isinstance(f, GFunction) else f
    extra = tuple(breakpoints) + tuple(getattr(f, "breakpoints", ()))
    pts = set(d.grid(n).tolist())
    pts.update(float(x) for x in extra if 0.0 < x < d.T)
    grid = sorted(pts)

    starts = d._piece_starts
    pieces = d.density_pieces
    prefix = [0.0 + 0.0j]
    for lo, hi in zip(grid[:-1], grid[1:]):
        cell = 0.0 + 0.0j
        dj = d.jump(lo)
        if dj > 0.0:
            cell += _sample(fn, lo) * dj
        piece = pieces[max(bisect_right(starts, lo) - 1, 0)]
        cell += _ac_over_segment(d, fn, lo, hi, piece, tol * max(hi - lo, 1e-16) / d.T)
        prefix.append(prefix[-1] + cell)

    label = getattr(f, "label", "") or getattr(f, "__name__", "f")

    def phi(t: float) -> complex:
        if t <= grid[0]:
            return 0.0 + 0.0j
        t = min(t, d.T)
        i = bisect_right(grid, t) - 1
        if i >= len(grid) - 1:
            return prefix[-1] if t >= d.T else prefix[i]
        acc = prefix[i]
        if t == grid[i]:
            return acc
        dj = d.jump(grid[i])
        if dj > 0.0:
            acc += _sample(fn, grid[i]) * dj
        piece = pieces[max(bisect_right(starts, grid[i]) - 1, 0)]
        acc += _ac_over_segment(d, fn, grid[i], t, piece, tol * 1e-3)
        return acc

    return GFunction(value=phi,
                     deriv1=lambda s: fn(d.star(s)),
                     label=f"cumulative({label})",
                     breakpoints=tuple(extra))


def integrate_by_parts_check(d: Derivator, w1: GFunction, w2: GFunction, t: float,
                             tol: float = DEFAULT_TOL) -> float:
    """Residual of the g-integration-by-parts identity at t.

    | w1(t)w2(t) - w1(0)w2(0) - ∫_{[0,t)} (w1'_g w2 + w1 w2'_g + w1'_g w2'_g dg) dmu_g |

    Both factors need analytic first g-derivatives; raising on missing data
    beats silently differentiating numerically inside an identity check.
    """
    for w in (w1, w2):
        if not isinstance(w, GFunction) or w.deriv1 is None:
            raise ContractError("integration-by-parts check needs GFunctions with deriv1")

    def integrand(s: float) -> complex:
        d1 = w1.deriv1(s)
        d2 = w2.deriv1(s)
        return d1 * w2.value(s) + w1.value(s) * d2 + d1 * d2 * d.jump(s)

    breaks = tuple(w1.breakpoints) + tuple(w2.breakpoints)
    lhs = w1.value(t) * w2.value(t) - w1.value(0.0) * w2.value(0.0)
    rhs = integrate(d, integrand, t, tol=tol, breakpoints=breaks)
    return abs(lhs - rhs)
