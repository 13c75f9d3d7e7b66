"""Command line driver: ``hypcone verify|flow|sweep``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import io
import sys

import numpy as np

from .cone import cone
from .errors import GeometryError
from .nullflow import classify_flow, psi_theta
from .report import write_csv_table
from .suites import INCLUSIONS, SUITES, SuiteConfig, run_suite, scalar_curvature_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json-lines", "csv", "human")

# config-file key -> (SuiteConfig field, converter)
_KEYS = {
    "surface": str,
    "a": float,
    "b": float,
    "d": float,
    "rho": float,
    "inclusion": str,
    "n": int,
    "nu": int,
    "grid": int,
    "seed": int,
}


class UsageError(Exception):
    pass


def parse_config_file(path) -> dict:
    """Plain ``key = value`` lines; '#' starts a comment."""
    out: dict = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            if key in _KEYS:
                out[key] = _KEYS[key](value)
            elif key == "t_range":
                lo, hi = (float(v) for v in value.replace(",", " ").split())
                out[key] = (lo, hi)
            elif key.startswith("tol."):
                out.setdefault("tol_override", {})[key[4:]] = float(value)
            elif key in ("suite", "format", "out"):
                out[key] = value
            else:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _tol_pairs(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol-override expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError as exc:
            raise UsageError(f"bad tolerance in {item!r}") from exc
    return out


def _add_cone_flags(p: argparse.ArgumentParser):
    p.add_argument("--surface", help="helicoid (default) or a catalog name")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--d", type=float, help="distance of the equidistant hypersurface")
    p.add_argument("--rho", type=float, help="radius of the geodesic sphere")
    p.add_argument("--inclusion", choices=INCLUSIONS)
    p.add_argument("--n", type=int, help="ambient dimension of H^n")
    p.add_argument("--nu", type=int, help="fiber dimension")
    p.add_argument("--t-range", type=float, nargs=2, metavar=("LO", "HI"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypcone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    _add_cone_flags(v)
    v.add_argument("--grid", type=int)
    v.add_argument("--tol-override", action="append", metavar="NAME=TOL")
    v.add_argument("--seed", type=int)
    v.add_argument("--config", help="key = value config file (flags win)")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=FORMATS)

    f = sub.add_parser("flow", help="integrate the (u, v) leaf system")
    f.add_argument("--u0", type=float, required=True)
    f.add_argument("--v0", type=float, required=True)
    f.add_argument("--t-range", type=float, nargs=2, default=(-3.0, 3.0), metavar=("LO", "HI"))
    f.add_argument("--step", type=float, default=1e-3)
    f.add_argument("--out", help="CSV trajectory (t, u, v[, psi, theta])")

    s = sub.add_parser("sweep", help="parameter sweeps")
    s.add_argument("quantity", choices=("scalar-curvature",))
    _add_cone_flags(s)
    s.add_argument("--samples", type=int, default=61)
    s.add_argument("--out", help="CSV of (t, s); stdout if omitted")
    return parser


def make_config(args) -> tuple[SuiteConfig, dict]:
    base = parse_config_file(args.config) if args.config else {}
    cfg = {k: base[k] for k in list(_KEYS) + ["t_range", "tol_override"] if k in base}
    for key in _KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if args.t_range is not None:
        cfg["t_range"] = tuple(args.t_range)
    tol = dict(cfg.get("tol_override", {}))
    tol.update(_tol_pairs(args.tol_override))
    cfg["tol_override"] = tol
    if cfg.get("surface") == "helicoid_h3":
        cfg["surface"] = "helicoid"
    extra = {"out": args.out or base.get("out"), "format": args.format or base.get("format", "human")}
    if extra["format"] not in FORMATS:
        raise UsageError(f"unknown format {extra['format']!r}")
    try:
        return SuiteConfig(suite=args.suite, **cfg), extra
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: str | None):
    if out:
        try:
            with open(out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    cfg, extra = make_config(args)
    try:
        report = run_suite(cfg)
    except (ValueError, GeometryError) as exc:
        raise UsageError(str(exc)) from exc
    _emit(report.render(extra["format"]), extra["out"])
    if extra["out"]:
        s = report.summary()
        print(f"{s['total']} checks: {s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped",
              file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_flow(args) -> int:
    if args.step <= 0:
        raise UsageError("--step must be positive")
    cl = classify_flow(args.u0, args.v0, tuple(args.t_range), args.step)
    tr = cl.trajectory
    print(f"w0 = {args.v0:g} + {args.u0:g}i: {cl.label}")
    if cl.t_pole is not None:
        print(f"pole at t = arctanh(1/v0) = {cl.t_pole:.12g}")
    if tr.aborted:
        print(f"integration stopped at t = {tr.t_abort:.6g} (last state u = {tr.u[-1]:.6g}, v = {tr.v[-1]:.6g})")
    else:
        print(f"final state at t = {tr.t[-1]:g}: u = {tr.u[-1]:.12g}, v = {tr.v[-1]:.12g}")
    if args.out:
        if args.v0 == 0.0:
            psi, theta = psi_theta(tr.t, tr.u, tr.v)
            rows = zip(tr.t.tolist(), tr.u.tolist(), tr.v.tolist(), psi.tolist(), theta.tolist())
            write_csv_table(args.out, ("t", "u", "v", "psi", "theta"), rows)
        else:
            # psi is only defined for launches from v = 0
            write_csv_table(args.out, ("t", "u", "v"), zip(tr.t.tolist(), tr.u.tolist(), tr.v.tolist()))
    return EXIT_OK


def cmd_sweep(args) -> int:
    kind = args.inclusion or "equidistant"
    lo, hi = args.t_range or (-3.0, 3.0)
    try:
        spec = cone(args.surface or "helicoid", kind, n=args.n or 4, nu=args.nu or 1, a=args.a or 1.0,
                    b=1.0 if args.b is None else args.b, d=args.d or 0.7, rho=args.rho or 1.0, t_range=(lo, hi))
        slope, t, s = scalar_curvature_sweep(spec, np.linspace(lo, hi, args.samples))
    except GeometryError as exc:
        print(f"sweep failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = zip(t.tolist(), s.tolist())
    if args.out:
        write_csv_table(args.out, ("t", "s"), rows)
    else:
        import csv

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t", "s"))
        for tv, sv in rows:
            w.writerow((repr(float(f"{tv:.12g}")), repr(float(f"{sv:.12g}"))))
        sys.stdout.write(buf.getvalue())
    print(f"fitted exponent of |s + {spec.m * (spec.m - 1)}| vs t: {slope:.6f}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "flow":
            return cmd_flow(args)
        return cmd_sweep(args)
    except UsageError as exc:
        print(f"hypcone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
