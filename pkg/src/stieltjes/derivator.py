"""Derivators: nondecreasing, left-continuous g on [0, T].

A derivator is parametrized by a piecewise density (the absolutely continuous
part), a finite list of jumps, and the offset g(0) = g0:

    g(t) = g0 + integral_0^t rho(s) ds + sum_{t_j < t} d_j

The jump at t_j contributes only for t > t_j, which makes g left-continuous.
Pieces whose density is literally zero produce constancy intervals; these are
derived at construction time (detecting rho == 0 numerically is hopeless, so
only declared zeros count).  All structural queries — g(t), g(t+), the jump
size, the redirection point t*, point classification — live here.

Everything downstream (quadrature, g-derivatives, solvers, oracles) shares
this one type and nothing else.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError

__all__ = [
    "DensityPiece",
    "PointClass",
    "Derivator",
    "identity_derivator",
    "single_jump_derivator",
]


@dataclass(frozen=True)
class DensityPiece:
    """Density rho on [a, b): a constant, a polynomial, zero, or a callable.

    ``kind`` is one of ``"const"``, ``"poly"``, ``"zero"``, ``"callable"``.
    For ``poly``, ``value`` holds coefficients in increasing powers of t
    (absolute t, not t - a).  ``callable`` is a library-only convenience and
    falls back to scipy quadrature for integrals; the JSON config contract
    only knows the first three kinds.
    """

    a: float
    b: float
    kind: str
    value: object = 0.0

    def __post_init__(self):
        if self.kind not in ("const", "poly", "zero", "callable"):
            raise ConfigError(f"unknown density kind {self.kind!r}")
        if self.kind == "poly":
            object.__setattr__(self, "value", tuple(float(c) for c in self.value))

    def rho(self, s: float) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "const":
            return float(self.value)
        if self.kind == "poly":
            acc = 0.0
            for c in reversed(self.value):
                acc = acc * s + c
            return acc
        return float(self.value(s))

    def is_zero(self) -> bool:
        """Whether this piece is *declared* constant (literal zero density)."""
        if self.kind == "zero":
            return True
        if self.kind == "const":
            return float(self.value) == 0.0
        if self.kind == "poly":
            return all(c == 0.0 for c in self.value)
        return False

    def integral(self, lo: float, hi: float) -> float:
        """Exact integral of rho over [lo, hi] for const/poly/zero pieces."""
        if hi <= lo:
            return 0.0
        if self.kind == "zero":
            return 0.0
        if self.kind == "const":
            return float(self.value) * (hi - lo)
        if self.kind == "poly":
            acc_hi = 0.0
            acc_lo = 0.0
            for k in range(len(self.value) - 1, -1, -1):
                c = self.value[k] / (k + 1)
                acc_hi = acc_hi * hi + c
                acc_lo = acc_lo * lo + c
            return acc_hi * hi - acc_lo * lo
        from scipy.integrate import quad

        val, _ = quad(self.value, lo, hi, epsabs=1e-13, limit=200)
        return val


@dataclass(frozen=True)
class PointClass:
    """Classification of a point relative to the structure of g.

    ``kind`` is one of ``"regular"``, ``"jump"``, ``"constancy"``,
    ``"ng-minus"`` (left endpoint of a constancy component that is not a
    jump), ``"ng-plus"`` (right endpoint, not a jump).  ``jump`` carries the
    jump size for kind ``"jump"``; ``component`` carries (a_n, b_n) for kind
    ``"constancy"``.
    """

    kind: str
    jump: float = 0.0
    component: tuple[float, float] | None = None


@dataclass(frozen=True)
class Derivator:
    """Immutable derivator on [0, T]; all operations are pure."""

    T: float
    density_pieces: tuple[DensityPiece, ...]
    jumps: tuple[tuple[float, float], ...] = ()
    g0: float = 0.0

    # derived, filled in __post_init__
    _jump_ts: tuple[float, ...] = field(default=(), repr=False, compare=False)
    _jump_prefix: tuple[float, ...] = field(default=(), repr=False, compare=False)
    _piece_starts: tuple[float, ...] = field(default=(), repr=False, compare=False)
    _piece_prefix: tuple[float, ...] = field(default=(), repr=False, compare=False)
    _constancy: tuple[tuple[float, float], ...] = field(default=(), repr=False, compare=False)
    _structural: tuple[float, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        pieces = tuple(sorted(self.density_pieces, key=lambda p: p.a))
        object.__setattr__(self, "density_pieces", pieces)
        jumps = tuple(sorted((float(t), float(d)) for t, d in self.jumps))
        object.__setattr__(self, "jumps", jumps)

        jump_ts = tuple(t for t, _ in jumps)
        prefix = [0.0]
        for _, d in jumps:
            prefix.append(prefix[-1] + d)
        object.__setattr__(self, "_jump_ts", jump_ts)
        object.__setattr__(self, "_jump_prefix", tuple(prefix))

        pp = [0.0]
        for p in pieces:
            pp.append(pp[-1] + p.integral(p.a, p.b))
        object.__setattr__(self, "_piece_starts", tuple(p.a for p in pieces))
        object.__setattr__(self, "_piece_prefix", tuple(pp))

        object.__setattr__(self, "_constancy", self._derive_constancy())

        pts = {0.0, float(self.T)}
        pts.update(jump_ts)
        for p in pieces:
            pts.add(p.a)
            pts.add(p.b)
        for a, b in self._constancy:
            pts.add(a)
            pts.add(b)
        structural = tuple(sorted(x for x in pts if 0.0 <= x <= self.T))
        object.__setattr__(self, "_structural", structural)

    def _derive_constancy(self) -> tuple[tuple[float, float], ...]:
        # maximal runs of zero-density pieces, split at interior jumps
        runs: list[list[float]] = []
        for p in self.density_pieces:
            if not p.is_zero() or p.b <= p.a:
                continue
            if runs and runs[-1][1] == p.a:
                runs[-1][1] = p.b
            else:
                runs.append([p.a, p.b])
        comps: list[tuple[float, float]] = []
        for a, b in runs:
            cuts = [a] + [t for t in self._jump_ts if a < t < b] + [b]
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                if hi > lo:
                    comps.append((lo, hi))
        return tuple(comps)

    # ------------------------------------------------------------------
    # pointwise structure

    def eval_g(self, t: float) -> float:
        """g(t), left-continuous: jumps at t_j < t included, the one at t not."""
        t = min(max(t, 0.0), self.T)
        i = bisect_right(self._piece_starts, t) - 1
        ac = 0.0
        if i >= 0:
            p = self.density_pieces[i]
            ac = self._piece_prefix[i] + p.integral(p.a, min(t, p.b))
        return self.g0 + ac + self._jump_prefix[bisect_left(self._jump_ts, t)]

    def eval_g_right(self, t: float) -> float:
        """g(t+) = g(t) + jump(t)."""
        return self.eval_g(t) + self.jump(t)

    def jump(self, t: float) -> float:
        """dg(t): the jump size at t (exact abscissa match), else 0."""
        i = bisect_left(self._jump_ts, t)
        if i < len(self._jump_ts) and self._jump_ts[i] == t:
            return self.jumps[i][1]
        return 0.0

    def star(self, t: float) -> float:
        """t* = b_n when t lies inside a constancy component (a_n, b_n), else t."""
        for a, b in self._constancy:
            if a < t < b:
                return b
        return t

    def classify(self, t: float) -> PointClass:
        if self.jump(t) > 0.0:
            return PointClass("jump", jump=self.jump(t))
        for a, b in self._constancy:
            if a < t < b:
                return PointClass("constancy", component=(a, b))
        for a, b in self._constancy:
            if t == a:
                return PointClass("ng-minus", component=(a, b))
            if t == b:
                return PointClass("ng-plus", component=(a, b))
        return PointClass("regular")

    @property
    def constancy_components(self) -> tuple[tuple[float, float], ...]:
        return self._constancy

    def ac_increment(self, lo: float, hi: float) -> float:
        """Measure of [lo, hi) under the absolutely continuous part of mu_g."""
        if hi <= lo:
            return 0.0
        i0 = bisect_left(self._jump_ts, lo)
        i1 = bisect_left(self._jump_ts, hi)
        atoms = self._jump_prefix[i1] - self._jump_prefix[i0]
        return (self.eval_g(hi) - self.eval_g(lo)) - atoms

    # ------------------------------------------------------------------
    # validation and grids

    def validate(self) -> list[str]:
        """Structural and standing-hypothesis violations; empty list means ok.

        Returns messages rather than raising so that the CLI (and tests) can
        report all problems at once.
        """
        problems: list[str] = []
        if not self.T > 0:
            problems.append("T must be positive")
        pieces = self.density_pieces
        if not pieces:
            problems.append("no density pieces")
        else:
            if pieces[0].a != 0.0:
                problems.append(f"density pieces start at {pieces[0].a}, not 0")
            if pieces[-1].b != self.T:
                problems.append(f"density pieces end at {pieces[-1].b}, not T={self.T}")
            for p, q in zip(pieces[:-1], pieces[1:]):
                if p.b != q.a:
                    problems.append(f"density pieces do not tile [0,T] at {p.b} / {q.a}")
            for p in pieces:
                if p.b <= p.a:
                    problems.append(f"empty density piece [{p.a}, {p.b})")
                elif not p.is_zero():
                    width = p.b - p.a
                    samples = [p.a + width * x for x in (0.0, 0.25, 0.5, 0.75, 0.999999)]
                    if any(p.rho(s) < 0.0 for s in samples):
                        problems.append(f"density negative on piece [{p.a}, {p.b})")
        seen = None
        for t, d in self.jumps:
            if d <= 0.0:
                problems.append(f"jump at {t} has nonpositive size {d}")
            if seen is not None and t <= seen:
                problems.append(f"jump abscissas not strictly increasing at {t}")
            seen = t
            if t == 0.0:
                problems.append("0 ∈ D_g")
            elif t == self.T:
                problems.append("T ∈ D_g")
            elif not (0.0 < t < self.T):
                problems.append(f"jump abscissa {t} outside (0, {self.T})")
        for a, b in self._constancy:
            if a == 0.0 and self.jump(a) == 0.0:
                problems.append("0 ∈ N_g⁻")
            if b == self.T:
                problems.append("T ∈ N_g⁺")
        return problems

    def structural_points(self) -> tuple[float, ...]:
        """0, T, jump abscissas, piece boundaries, constancy endpoints."""
        return self._structural

    def segments(self) -> list[tuple[float, float, DensityPiece]]:
        """Intervals between consecutive structural points with their piece.

        Each segment lies inside a single density piece and contains no jump
        abscissa in its interior.
        """
        out = []
        for lo, hi in zip(self._structural[:-1], self._structural[1:]):
            if hi <= lo:
                continue
            i = bisect_right(self._piece_starts, lo) - 1
            out.append((lo, hi, self.density_pieces[max(i, 0)]))
        return out

    def grid(self, n: int) -> np.ndarray:
        """Partition of [0, T] with >= n cells, each at most 2T/n wide,
        containing every structural point."""
        if n < 1:
            raise ValueError(f"grid size must be positive, got {n}")
        h = self.T / n
        pts = [0.0]
        for lo, hi in zip(self._structural[:-1], self._structural[1:]):
            if hi <= lo:
                continue
            k = max(1, math.ceil((hi - lo) / h - 1e-12))
            pts.extend(np.linspace(lo, hi, k + 1)[1:].tolist())
        return np.array(pts)

    # ------------------------------------------------------------------
    # (de)serialization — field names are part of the CLI contract

    def to_dict(self) -> dict:
        pieces = []
        for p in self.density_pieces:
            if p.kind == "callable":
                raise ConfigError("callable densities cannot be serialized")
            density: dict[str, object] = {"kind": p.kind}
            if p.kind == "const":
                density["value"] = float(p.value)
            elif p.kind == "poly":
                density["coeffs"] = list(p.value)
            pieces.append({"from": p.a, "to": p.b, "density": density})
        return {
            "T": self.T,
            "g0": self.g0,
            "pieces": pieces,
            "jumps": [{"t": t, "d": d} for t, d in self.jumps],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Derivator":
        try:
            T = float(doc["T"])
            g0 = float(doc.get("g0", 0.0))
            pieces = []
            for raw in doc["pieces"]:
                dens = raw["density"]
                kind = dens["kind"]
                if kind == "const":
                    piece = DensityPiece(float(raw["from"]), float(raw["to"]), "const", float(dens["value"]))
                elif kind == "poly":
                    piece = DensityPiece(float(raw["from"]), float(raw["to"]), "poly", [float(c) for c in dens["coeffs"]])
                elif kind == "zero":
                    piece = DensityPiece(float(raw["from"]), float(raw["to"]), "zero")
                else:
                    raise ConfigError(f"unknown density kind {kind!r}")
                pieces.append(piece)
            jumps = [(float(j["t"]), float(j["d"])) for j in doc.get("jumps", [])]
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad derivator config: {exc}") from exc
        return cls(T=T, density_pieces=tuple(pieces), jumps=tuple(jumps), g0=g0)


def identity_derivator(T: float = 1.0) -> Derivator:
    """g(t) = t on [0, T]: classical calculus."""
    return Derivator(T=T, density_pieces=(DensityPiece(0.0, T, "const", 1.0),))


def single_jump_derivator(T: float, t1: float, delta: float, g0: float = 0.0) -> Derivator:
    """g(t) = t + delta*chi_{t>t1} on [0, T]; delta = 0 gives the identity."""
    pieces = (DensityPiece(0.0, T, "const", 1.0),)
    jumps = ((t1, delta),) if delta > 0.0 else ()
    return Derivator(T=T, density_pieces=pieces, jumps=jumps, g0=g0)
