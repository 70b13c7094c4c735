"""Brute-force reference computations.

These are the independent checks the rest of the package is judged against,
so they stay deliberately naive: left Riemann–Stieltjes sums, an explicit
product-integral stepper, and a classical RK4 for the no-jump limit.  They
import nothing from the quadrature or calculus modules — the Derivator type
(for g itself and its grids) is the only shared code, which keeps their
correctness argument separate from the implementation they check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .derivator import Derivator

__all__ = ["OracleReport", "riemann_stieltjes_sum", "step_first_order", "rk4_second_order"]


@dataclass(frozen=True)
class OracleReport:
    computed: complex
    reference: complex
    abs_error: float
    resolution: int

    @classmethod
    def compare(cls, computed: complex, reference: complex, resolution: int) -> "OracleReport":
        return cls(computed=complex(computed), reference=complex(reference),
                   abs_error=abs(complex(computed) - complex(reference)),
                   resolution=resolution)


def _partition(d: Derivator, t: float, n: int) -> list[float]:
    """grid(d, n) restricted to [0, t), closed with t itself."""
    pts = [float(x) for x in d.grid(n) if x < t]
    pts.append(float(t))
    return pts


def riemann_stieltjes_sum(d: Derivator, f: Callable[[float], complex], t: float, n: int) -> complex:
    """Left-point Riemann–Stieltjes sum Σ f(s_i)·(g(s_{i+1}) − g(s_i)).

    Jump abscissas are grid points, so each atom lands in a cell whose left
    endpoint is the jump itself and f is sampled exactly there — the atom
    contribution f(t_j)·d_j is picked up without any special casing.
    """
    if n < 1:
        raise ValueError("resolution must be at least 1")
    pts = _partition(d, t, n)
    total = 0.0 + 0.0j
    for a, b in zip(pts[:-1], pts[1:]):
        total += complex(f(a)) * (d.eval_g(b) - d.eval_g(a))
    return total


def step_first_order(d: Derivator, p: Callable[[float], complex], u0: complex,
                     t: float, n: int) -> complex:
    """Explicit product-integral stepper for u'_g = p·u, u(0) = u0:

        u_{i+1} = u_i · (1 + p(s_i)·(g(s_{i+1}) − g(s_i)))

    Across a jump cell the factor is (1 + p(t_j)·(d_j + ac sliver)), so the
    jump part is exact up to the cell's own a.c. width; only the continuous
    segments carry real discretization error.
    """
    if n < 1:
        raise ValueError("resolution must be at least 1")
    u = complex(u0)
    pts = _partition(d, t, n)
    for a, b in zip(pts[:-1], pts[1:]):
        u = u * (1.0 + complex(p(a)) * (d.eval_g(b) - d.eval_g(a)))
    return u


def rk4_second_order(P: float, Q_fn: Callable[[float], float], f_fn: Callable[[float], complex],
                     x0: complex, v0: complex, t: float, n: int,
                     breakpoints: Iterable[float] = ()) -> complex:
    """Classical RK4 for x'' + P x' + Q(s) x = f(s) on [0, t].

    Integrates each smooth segment between coefficient breakpoints with its
    own uniform step count (proportional share of n, at least 4), sampling
    Q and f clamped a hair inside the segment so a piecewise coefficient is
    never read on the wrong side of its switch.  That keeps the scheme at
    order 4 through step-aligned switches.
    """
    if n < 1:
        raise ValueError("resolution must be at least 1")
    cuts = sorted({0.0, float(t)} | {float(b) for b in breakpoints if 0.0 < b < t})
    x = complex(x0)
    y = complex(v0)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        steps = max(4, math.ceil(n * (hi - lo) / t))
        h = (hi - lo) / steps
        eta = (hi - lo) * 1e-12

        def rhs(s: float, xs: complex, ys: complex) -> tuple[complex, complex]:
            sc = min(max(s, lo + eta), hi - eta)
            return ys, -P * ys - Q_fn(sc) * xs + complex(f_fn(sc))

        s = lo
        for _ in range(steps):
            k1x, k1y = rhs(s, x, y)
            k2x, k2y = rhs(s + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y)
            k3x, k3y = rhs(s + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y)
            k4x, k4y = rhs(s + h, x + h * k3x, y + h * k3y)
            x = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            s += h
    return x
