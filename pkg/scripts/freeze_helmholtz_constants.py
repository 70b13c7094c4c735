"""Regenerate the frozen regression constants in tests/test_helmholtz.py.

Evaluates the two-frequency transmission coefficients at 50-digit precision
from the interface-matching closed form written directly in elementary
functions — no imports from the package under test, so the constants are an
independent oracle.  Derivation: on the left of t1 the modes are e^{±i·w1·t};
on the right, e^{±i·w2·t} scaled by (1 + λ·δ) jump factors.  Matching the
right limits of value and first g-derivative at t1 gives a 2×2 system per
left mode whose solution is the α display below.

Run:  python3 scripts/freeze_helmholtz_constants.py
"""

import mpmath as mp

mp.mp.dps = 50


def alphas(w1, w2, t1, delta):
    """α_m^k: weight of transmitted mode m (λ_2^m = ±i·w2) in left mode k."""
    w1, w2, t1, delta = map(mp.mpf, (w1, w2, t1, delta))
    i = mp.mpc(0, 1)
    lam1 = (i * w1, -i * w1)    # left modes  λ_1^1, λ_1^2
    lam2 = (i * w2, -i * w2)    # right modes λ_2^1, λ_2^2
    out = {}
    for k, lk in enumerate(lam1, start=1):
        # value and derivative right-limits carried across the jump by mode k
        B = mp.e ** (lk * t1) * (1 + lk * delta)
        for m, (lm, lo) in enumerate(zip(lam2, reversed(lam2)), start=1):
            num = B * (lo - lk)
            den = mp.e ** (lm * t1) * (1 + lm * delta) * (lo - lm)
            out[(m, k)] = num / den
    return out


def emit(tag, w1, w2, t1, delta):
    a = alphas(w1, w2, t1, delta)
    print(f"# w1={w1}, w2={w2}, t1={t1}, delta={delta}")
    for (m, k), v in sorted(a.items()):
        c = complex(v)
        print(f"ALPHA_{tag}_{m}{k} = complex({c.real!r}, {c.imag!r})")
    print()


if __name__ == "__main__":
    emit("A", 1.0, 2.0, 1.0, 0.5)
    emit("B", 1.5, 0.7, 0.8, 0.3)
