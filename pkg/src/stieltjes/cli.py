"""Command-line front end.

Subcommands::

    integrate   cumulative g-integral of f over the grid      (t, Re I, Im I)
    gexp        g-exponential of a coefficient                 (t, Re E, Im E)
    wronskian   W̃ and W of the constant-coefficient basis      (+ identity residual)
    solve2      second-order IVP solve                         (t, v, v', v'', residual)
    helmholtz   frequency-switch problem, one series per δ     (columns as solve2)
    verify      run the self-verification suites

Configs are JSON documents; series are CSV (default) or JSON.  Floats are
emitted with repr — shortest round-trip form — so output is byte-identical
across runs.  Complex quantities become paired Re/Im columns in CSV and
[re, im] arrays in JSON.

Exit codes: 0 success, 1 verification failure, 2 config error, 3 numeric
error, 4 precondition violation, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

from .derivator import Derivator, single_jump_derivator
from .errors import (ConfigError, ContractError, NumericError, PreconditionError,
                     RegressivityError, SingularSystemError, StieltjesError)
from .gcalculus import GExponential, coef_value
from .gmeasure import GFunction, cumulative
from .helmholtz import HelmholtzSpec, helmholtz_homogeneous, helmholtz_particular
from .piecewise import PiecewiseConst
from .solver import (ProblemSpec, SolutionBundle, char_roots, homogeneous_basis_const,
                     solve_const_ivp, solve_ivp, solve_q0_reduction)
from .verify import run_suites
from .wronskian import wronskian_g, wronskian_relation_residual, wronskian_simplified

__all__ = ["RunConfig", "main"]


# ---------------------------------------------------------------------------
# config parsing


def _parse_complex(v, what: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{what}: expected a number or [re, im], got {v!r}")


def _parse_coef(spec, what: str):
    """Coefficient documents: {"kind": "const", "value": c} or
    {"kind": "piecewise-const", "breaks": [...], "values": [...]}."""
    if spec is None:
        return 0.0
    if isinstance(spec, (int, float)):
        return complex(spec)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"{what}: expected a coefficient object with a 'kind'")
    kind = spec["kind"]
    if kind == "const":
        return _parse_complex(spec.get("value", 0.0), f"{what}.value")
    if kind == "piecewise-const":
        try:
            breaks = tuple(float(b) for b in spec["breaks"])
            values = tuple(_parse_complex(v, f"{what}.values") for v in spec["values"])
            return PiecewiseConst(breaks=breaks, values=values)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"{what}: bad piecewise-const coefficient: {e}") from e
    raise ConfigError(f"{what}: unknown coefficient kind {kind!r}")


@dataclass
class RunConfig:
    derivator: Derivator | None
    problem: dict
    grid_n: int = 4096
    output: str | None = None
    format: str = "csv"
    tolerance: float | None = None

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed JSON in {path}: {e}") from e
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")

        d = None
        if "derivator" in doc:
            d = Derivator.from_dict(doc["derivator"])
            problems = d.validate()
            if problems:
                raise ConfigError("derivator violates standing hypotheses: " + "; ".join(problems))
        grid_n = int(doc.get("grid_n", 4096))
        if grid_n < 16:
            raise ConfigError(f"grid_n must be >= 16, got {grid_n}")
        fmt = doc.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {fmt!r}")
        tol = doc.get("tolerance")
        return cls(derivator=d, problem=doc.get("problem", {}), grid_n=grid_n,
                   output=doc.get("output"), format=fmt,
                   tolerance=None if tol is None else float(tol))

    def require_derivator(self) -> Derivator:
        if self.derivator is None:
            raise ConfigError("config needs a 'derivator' section")
        return self.derivator


def _apply_flags(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "grid_n", None) is not None:
        if args.grid_n < 16:
            raise ConfigError(f"grid_n must be >= 16, got {args.grid_n}")
        cfg.grid_n = args.grid_n
    if getattr(args, "out", None) is not None:
        cfg.output = args.out
    if getattr(args, "format", None) is not None:
        cfg.format = args.format
    return cfg


# ---------------------------------------------------------------------------
# emission


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass
class Series:
    columns: list[str]
    rows: list[list]                 # entries: float or complex
    meta: dict = field(default_factory=dict)

    def csv_lines(self) -> list[str]:
        lines = []
        if self.meta:
            lines.append("# " + " ".join(f"{k}={v}" for k, v in self.meta.items()))
        header, flat_rows = self._flatten()
        lines.append(",".join(header))
        lines.extend(",".join(_fmt(x) for x in row) for row in flat_rows)
        return lines

    def _flatten(self):
        header: list[str] = []
        for name, probe in zip(self.columns, self.rows[0] if self.rows else self.columns):
            if isinstance(probe, complex):
                header.extend((f"Re {name}", f"Im {name}"))
            else:
                header.append(name)
        flat = []
        for row in self.rows:
            out = []
            for x in row:
                if isinstance(x, complex):
                    out.extend((x.real, x.imag))
                else:
                    out.append(float(x))
            flat.append(out)
        return header, flat

    def json_obj(self) -> dict:
        rows = [[[x.real, x.imag] if isinstance(x, complex) else float(x) for x in row]
                for row in self.rows]
        obj = {"columns": self.columns, "rows": rows}
        obj.update(self.meta)
        return obj


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(output, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _check_finite(series: list[Series]) -> None:
    """Closed-form paths can propagate NaN/inf without ever sampling a
    quadrature (which would raise); refuse to emit such a series."""
    for s in series:
        for row in s.rows:
            for name, x in zip(s.columns, row):
                z = complex(x)
                if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                    raise NumericError(
                        f"non-finite value in column {name!r} at t={float(row[0].real)!r}")


def _emit(series: list[Series], cfg: RunConfig) -> None:
    _check_finite(series)
    if cfg.format == "json":
        doc = series[0].json_obj() if len(series) == 1 else {"series": [s.json_obj() for s in series]}
        _write(json.dumps(doc, indent=2, sort_keys=True), cfg.output)
    else:
        blocks = ["\n".join(s.csv_lines()) for s in series]
        _write("\n\n".join(blocks), cfg.output)


# ---------------------------------------------------------------------------
# subcommands


def cmd_integrate(cfg: RunConfig) -> int:
    d = cfg.require_derivator()
    f = _parse_coef(cfg.problem.get("f", 1.0), "problem.f")
    fn = (lambda s: f) if isinstance(f, complex) else f
    bp = tuple(getattr(f, "breaks", ()))
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-10
    F = cumulative(d, fn, cfg.grid_n, tol=tol, breakpoints=bp)
    rows = [[float(t), complex(F.value(float(t)))] for t in d.grid(cfg.grid_n)]
    _emit([Series(columns=["t", "integral"], rows=rows)], cfg)
    return 0


def cmd_gexp(cfg: RunConfig) -> int:
    d = cfg.require_derivator()
    p = _parse_coef(cfg.problem.get("p"), "problem.p")
    E = GExponential(d, p)
    rows = [[float(t), complex(E.value(float(t)))] for t in d.grid(cfg.grid_n)]
    _emit([Series(columns=["t", "exp_g"], rows=rows)], cfg)
    return 0


def cmd_wronskian(cfg: RunConfig) -> int:
    d = cfg.require_derivator()
    P = _parse_coef(cfg.problem.get("P", 0.0), "problem.P")
    Q = _parse_coef(cfg.problem.get("Q", 0.0), "problem.Q")
    if not isinstance(P, complex) or not isinstance(Q, complex):
        raise ConfigError("wronskian needs constant P and Q (the basis is built from them)")
    pair = homogeneous_basis_const(d, P, Q)
    rows = []
    worst = 0.0
    for t in d.grid(cfg.grid_n):
        t = float(t)
        wt = wronskian_simplified(d, pair, t)
        w = wronskian_g(d, pair, t)
        r = wronskian_relation_residual(d, pair, P, Q, t)
        worst = max(worst, r)
        rows.append([t, complex(wt), complex(w), r])
    lam1, lam2 = char_roots(P, Q)
    meta = {"roots": f"{lam1};{lam2}", "max_relation_residual": _fmt(worst)}
    _emit([Series(columns=["t", "Wtilde", "W", "relation residual"], rows=rows, meta=meta)], cfg)
    return 0


def _bundle_series(d: Derivator, bundle: SolutionBundle, P, Q, f, grid_n: int,
                   extra_meta: dict | None = None) -> Series:
    ffn = (lambda s: f) if isinstance(f, (int, float, complex)) else \
        f.value if isinstance(f, GFunction) else f
    v = bundle.v
    rows = []
    worst = 0.0
    for t in d.grid(grid_n):
        t = float(t)
        ts = d.star(t)
        val, d1, d2 = v.value(t), v.deriv1(ts), v.deriv2(ts)
        r = abs(d2 + coef_value(P, ts) * d1 + coef_value(Q, ts) * v.value(ts) - complex(ffn(ts)))
        worst = max(worst, r)
        rows.append([t, complex(val), complex(d1), complex(d2), r])
    meta = dict(extra_meta or {})
    meta.update({"method": bundle.method, "max_residual": _fmt(worst)})
    return Series(columns=["t", "v", "v'", "v''", "residual"], rows=rows, meta=meta)


def cmd_solve2(cfg: RunConfig) -> int:
    d = cfg.require_derivator()
    prob = cfg.problem
    P = _parse_coef(prob.get("P", 0.0), "problem.P")
    Q = _parse_coef(prob.get("Q", 0.0), "problem.Q")
    f = _parse_coef(prob.get("f", 0.0), "problem.f")
    x0 = _parse_complex(prob.get("x0", 0.0), "problem.x0")
    v0 = _parse_complex(prob.get("v0", 0.0), "problem.v0")

    if isinstance(P, complex) and isinstance(Q, complex):
        bundle = solve_const_ivp(d, P, Q, f, x0, v0, n=cfg.grid_n)
    elif isinstance(Q, complex) and Q == 0.0:
        bundle = solve_q0_reduction(d, P, f, x0, v0, n=cfg.grid_n)
    else:
        raise ConfigError(
            "solve2 handles constant P and Q, or piecewise-constant P with Q = 0")
    _emit([_bundle_series(d, bundle, P, Q, f, cfg.grid_n)], cfg)
    return 0


def cmd_helmholtz(cfg: RunConfig, deltas: list[float]) -> int:
    prob = cfg.problem
    try:
        w1, w2, t1 = float(prob["w1"]), float(prob["w2"]), float(prob["t1"])
    except KeyError as e:
        raise ConfigError(f"helmholtz problem needs w1, w2, t1 (missing {e})") from e
    x0 = _parse_complex(prob.get("x0", 1.0), "problem.x0")
    v0 = _parse_complex(prob.get("v0", 0.0), "problem.v0")
    f = _parse_coef(prob.get("f", 0.0), "problem.f")
    T = float(prob.get("T", cfg.derivator.T if cfg.derivator is not None else 3.0))
    if not 0.0 < t1 < T:
        raise ConfigError(f"t1 must lie strictly inside (0, {T}), got {t1}")

    spec = HelmholtzSpec(w1=w1, w2=w2, t1=t1, x0=x0, v0=v0, f=f)
    Q = spec.omega() * spec.omega()
    series = []
    for delta in deltas:
        d = single_jump_derivator(T, t1, delta)
        vh = helmholtz_homogeneous(d, spec)
        if isinstance(f, complex) and f == 0.0:
            bundle = vh
        else:
            vp = helmholtz_particular(d, spec, n=cfg.grid_n)
            bundle = SolutionBundle(
                v=GFunction(
                    value=lambda t, a=vh.v, b=vp.v: a.value(t) + b.value(t),
                    deriv1=lambda t, a=vh.v, b=vp.v: a.deriv1(t) + b.deriv1(t),
                    deriv2=lambda t, a=vh.v, b=vp.v: a.deriv2(t) + b.deriv2(t),
                    breakpoints=(t1,)),
                method="varpar")
        series.append(_bundle_series(d, bundle, 0.0, Q, f, cfg.grid_n,
                                     extra_meta={"delta": _fmt(delta)}))
    _emit(series, cfg)
    return 0


def cmd_verify(level: str, output: str | None, fmt: str) -> int:
    results = run_suites(level)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        note = f"  [{r.error}]" if r.error else ""
        sys.stdout.write(
            f"{status}  {r.name:<{width}}  max residual {r.max_residual:.3e}"
            f"  (tolerance {r.tolerance:.0e}){note}\n")
    failed = [r for r in results if not r.passed]
    sys.stdout.write(f"{len(results) - len(failed)}/{len(results)} suites passed ({level})\n")

    if output is not None:
        rows = [[r.name, _fmt(r.max_residual), _fmt(r.tolerance),
                 "pass" if r.passed else "fail", r.error] for r in results]
        if fmt == "json":
            doc = {"level": level,
                   "suites": [{"name": r.name, "max_residual": r.max_residual,
                               "tolerance": r.tolerance, "passed": r.passed,
                               "error": r.error} for r in results]}
            _write(json.dumps(doc, indent=2, sort_keys=True), output)
        else:
            lines = ["suite,max_residual,tolerance,status,error"]
            lines.extend(",".join(str(c) for c in row) for row in rows)
            _write("\n".join(lines), output)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stieltjes",
        description="Stieltjes calculus: g-integrals, g-exponentials, and "
                    "second-order Stieltjes differential equations.")
    sub = p.add_subparsers(dest="command", required=True)

    def series_flags(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="JSON config path")
        sp.add_argument("--grid-n", type=int, default=None, help="grid resolution (>= 16)")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)

    series_flags(sub.add_parser("integrate", help="cumulative g-integral of problem.f"))
    series_flags(sub.add_parser("gexp", help="g-exponential of problem.p"))
    series_flags(sub.add_parser("wronskian", help="Wronskians of the constant-coefficient basis"))
    series_flags(sub.add_parser("solve2", help="solve the second-order IVP"))

    hp = sub.add_parser("helmholtz", help="frequency-switch problem, one series per delta")
    series_flags(hp)
    hp.add_argument("--delta", default="0,0.025,0.05,0.1,0.2,0.4",
                    help="comma-separated jump sizes (default covers the classical-limit sweep)")

    vp = sub.add_parser("verify", help="run self-verification suites")
    vp.add_argument("--level", choices=("quick", "full"), default="quick")
    vp.add_argument("--out", default=None, help="write the suite report here as well")
    vp.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.level, args.out, args.format)
        cfg = _apply_flags(RunConfig.load(args.config), args)
        if args.command == "integrate":
            return cmd_integrate(cfg)
        if args.command == "gexp":
            return cmd_gexp(cfg)
        if args.command == "wronskian":
            return cmd_wronskian(cfg)
        if args.command == "solve2":
            return cmd_solve2(cfg)
        if args.command == "helmholtz":
            try:
                deltas = [float(x) for x in args.delta.split(",") if x.strip() != ""]
            except ValueError as e:
                raise ConfigError(f"bad --delta list {args.delta!r}: {e}") from e
            if not deltas:
                raise ConfigError("--delta list is empty")
            return cmd_helmholtz(cfg, deltas)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except NumericError as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return 3
    except (PreconditionError, RegressivityError, ContractError, SingularSystemError) as e:
        print(f"precondition violated: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
