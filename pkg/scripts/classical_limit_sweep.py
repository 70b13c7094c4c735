#!/usr/bin/env python3
"""Sweep the jump size of a single-jump time scale toward zero and watch the
Helmholtz transmission solution converge to its classical limit.

For each delta in the sweep the homogeneous problem

    v'' + w(t)^2 v = 0,   w = w1 on [0, t1],  w2 after,   g(t) = t + delta*[t > t1]

is solved in closed form and compared (sup norm on a uniform grid) against the
delta = 0 solution, i.e. the ordinary transmission problem.  The sup error
should shrink like O(delta); the observed order is printed alongside.

Writes a CSV of (delta, max_error, location) rows, optionally a second CSV of
solution profiles Re v(t) per delta, and optionally a PNG with both panels.

Typical run:

    python3 scripts/classical_limit_sweep.py --out sweep.csv --plot sweep.png
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from stieltjes import (
    HelmholtzSpec,
    classical_limit_study,
    helmholtz_homogeneous,
    single_jump_derivator,
)


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--w1", type=float, default=1.0, help="frequency left of t1")
    ap.add_argument("--w2", type=float, default=2.0, help="frequency right of t1")
    ap.add_argument("--t1", type=float, default=1.0, help="interface location")
    ap.add_argument("--x0", type=float, default=1.0, help="v(0)")
    ap.add_argument("--v0", type=float, default=0.0, help="v'(0)")
    ap.add_argument("--T", type=float, default=3.0, help="horizon")
    ap.add_argument("--deltas", type=str, default="0.4,0.2,0.1,0.05,0.025,0.0125",
                    help="comma-separated jump sizes, largest first")
    ap.add_argument("--n", type=int, default=1024, help="comparison grid cells")
    ap.add_argument("--out", type=str, default=None, help="sweep CSV path")
    ap.add_argument("--profiles", type=str, default=None,
                    help="CSV of Re v(t) per delta (plus the classical limit)")
    ap.add_argument("--plot", type=str, default=None, help="PNG with both panels")
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    deltas = [float(s) for s in args.deltas.split(",") if s.strip()]
    if any(d <= 0 for d in deltas):
        print("deltas must be positive (the classical limit is the reference)",
              file=sys.stderr)
        return 2

    rows = classical_limit_study(args.w1, args.w2, args.t1, args.x0, args.v0,
                                 deltas, n=args.n, T=args.T)

    print(f"classical limit sweep  w1={args.w1} w2={args.w2} t1={args.t1} "
          f"T={args.T} n={args.n}")
    print(f"{'delta':>10}  {'max |v_d - v_0|':>16}  {'at t':>8}  {'order':>6}")
    prev = None
    for r in rows:
        order = ""
        if prev is not None and r.max_error > 0 and prev.max_error > 0:
            order = f"{math.log(prev.max_error / r.max_error) / math.log(prev.delta / r.delta):6.3f}"
        print(f"{r.delta:10.4f}  {r.max_error:16.6e}  {r.at:8.4f}  {order:>6}")
        prev = r

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["delta", "max_error", "at"])
            for r in rows:
                w.writerow([repr(r.delta), repr(r.max_error), repr(r.at)])
        print(f"wrote {args.out}")

    profiles = None
    if args.profiles or args.plot:
        ts = [args.T * i / args.n for i in range(args.n + 1)]
        profiles = {}
        for delta in [0.0] + deltas:
            d = single_jump_derivator(args.T, args.t1, delta)
            spec = HelmholtzSpec(w1=args.w1, w2=args.w2, t1=args.t1,
                                 x0=args.x0, v0=args.v0)
            sol = helmholtz_homogeneous(d, spec)
            profiles[delta] = [sol.v.value(t).real for t in ts]

    if args.profiles:
        with open(args.profiles, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"delta={d:g}" for d in profiles])
            for i, t in enumerate(ts):
                w.writerow([repr(t)] + [repr(profiles[d][i]) for d in profiles])
        print(f"wrote {args.profiles}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
        for delta, vals in profiles.items():
            style = dict(lw=2, color="k") if delta == 0.0 else dict(lw=1)
            label = "classical" if delta == 0.0 else f"$\\delta={delta:g}$"
            ax1.plot(ts, vals, label=label, **style)
        ax1.axvline(args.t1, color="gray", ls=":", lw=0.8)
        ax1.set_xlabel("t")
        ax1.set_ylabel("Re v(t)")
        ax1.set_title("solution profiles")
        ax1.legend(fontsize=8)

        ax2.loglog([r.delta for r in rows], [r.max_error for r in rows], "o-")
        ref = [r.max_error for r in rows][0] / rows[0].delta
        ax2.loglog([r.delta for r in rows], [ref * r.delta for r in rows],
                   "--", color="gray", label="O(delta)")
        ax2.set_xlabel("delta")
        ax2.set_ylabel("sup error vs classical")
        ax2.set_title("convergence")
        ax2.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")

    return 0


if __name__ == "__main__":
    sys.exit(main())
