"""Piecewise-constant coefficient functions on [0, T].

Coefficients like the Helmholtz w0(t) (= w1 up to the switch, w2 after) are
left-continuous step functions.  Keeping them symbolic — breakpoints plus
values — lets g-exponentials and solvers integrate them exactly instead of
pushing a discontinuous integrand through quadrature.

Convention: ``value(t)`` is the left-continuous evaluation (the value on
``(b_{k-1}, b_k]``), matching how the equations sample coefficients at jump
points; ``right(t)`` gives the limit from the right.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

__all__ = ["PiecewiseConst"]


@dataclass(frozen=True)
class PiecewiseConst:
    """Step function: values[i] on (breaks[i-1], breaks[i]], open-ended outside."""

    breaks: tuple[float, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise ValueError("need exactly len(breaks)+1 values")
        if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breaks must be strictly increasing")

    @classmethod
    def const(cls, value: complex) -> "PiecewiseConst":
        return cls((), (value,))

    def __call__(self, t: float) -> complex:
        return self.values[bisect_left(self.breaks, t)]

    def right(self, t: float) -> complex:
        return self.values[bisect_right(self.breaks, t)]

    def is_const(self) -> bool:
        return len(set(self.values)) == 1

    # -- algebra (used to assemble coefficient combinations) -------------

    def _binary(self, other, op) -> "PiecewiseConst":
        if not isinstance(other, PiecewiseConst):
            other = PiecewiseConst.const(other)
        merged = tuple(sorted(set(self.breaks) | set(other.breaks)))
        vals = [op(self.values[0], other.values[0])]
        for b in merged:
            vals.append(op(self.right(b), other.right(b)))
        return PiecewiseConst(merged, tuple(vals))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    def __neg__(self):
        return PiecewiseConst(self.breaks, tuple(-v for v in self.values))

    def __sub__(self, other):
        return self + (-other if isinstance(other, PiecewiseConst) else PiecewiseConst.const(-other))

    # -- exact integration against the a.c. part of mu_g -----------------

    def ac_gintegral(self, d, t: float) -> complex:
        """Exact integral of this step function against the absolutely
        continuous part of mu_g over [0, t)."""
        if t <= 0.0:
            return 0.0
        total: complex = 0.0
        edges = [0.0] + [b for b in self.breaks if 0.0 < b < t] + [t]
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi > lo:
                # value on (lo, hi]: constant, take it just right of lo
                total += self.right(lo) * d.ac_increment(lo, hi)
        return total
