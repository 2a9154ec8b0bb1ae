"""Command-line interface."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .annuli import extremal_length_radii
from .bounds import BoundQuery, Log2Real, delta_of
from .components import JordanDomain, boundary_component
from .curves import PolygonalJordanCurve, trace_map_boundary
from .harness import verify_continuity, verify_diameter
from .maps import map_from_json
from .mlc import MLCTable, check_mlc, estimate_mlc
from .suite import ConfigError, run_suite

TRACE_N = 4096


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _curve(path, trace_n: int = TRACE_N) -> PolygonalJordanCurve:
    obj = _load_json(path)
    if obj.get("type") == "polygon":
        return PolygonalJordanCurve.from_json(obj)
    return trace_map_boundary(map_from_json(obj), trace_n)


def _map(path):
    obj = _load_json(path)
    if obj.get("type") == "polygon":
        raise ValueError("this command needs a mapped_disk domain (a closed-form conformal map)")
    return map_from_json(obj)


def _zeta(text: str) -> complex:
    try:
        x, y = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return complex(x, y)


def _emit(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def cmd_lambda(args) -> int:
    _emit({"inner": args.inner, "outer": args.outer, "lambda": extremal_length_radii(args.inner, args.outer)})
    return 0


def cmd_mlc_estimate(args) -> int:
    table = estimate_mlc(_curve(args.curve), args.kmax, args.resolution)
    _emit(table.to_json(), args.out)
    return 0


def cmd_mlc_check(args) -> int:
    table = MLCTable.from_json(_load_json(args.table))
    w = check_mlc(_curve(args.curve), table, args.k, args.resolution)
    if w is None:
        _emit({"pass": True, "k": args.k, "g": table.value(args.k)})
        return 0
    _emit({"pass": False, "witness": w.to_json()})
    return 1


def cmd_delta(args) -> int:
    table = MLCTable.from_json(_load_json(args.table))
    res = delta_of(BoundQuery(_map(args.domain), args.zeta, args.eps), table, args.l_grid)
    _emit(res.to_json())
    return 0


def cmd_component(args) -> int:
    obj = _load_json(args.domain)
    D = JordanDomain.from_json(obj)
    comp = boundary_component(D, args.zeta, args.radius, args.grid)
    if args.out:
        comp.write_csv(args.out)
    _emit(comp.summary())
    return 0


def cmd_verify(args) -> int:
    m = _map(args.domain)
    if args.what == "continuity":
        if args.delta_log2 is not None:
            delta = Log2Real(args.delta_log2)
        elif args.table:
            delta = delta_of(BoundQuery(m, args.zeta, args.eps), MLCTable.from_json(_load_json(args.table))).delta
        else:
            raise ValueError("verify continuity needs --delta-log2 or --table")
        rep = verify_continuity(m, args.zeta, args.eps, delta, args.samples, args.seed)
    else:
        if args.r0 is None:
            raise ValueError("verify diameter needs --r0")
        rep = verify_diameter(m, args.zeta, args.r0, args.eps, args.grid)
    _emit(rep.to_json(), args.report)
    if args.report:
        print(f"{rep.kind}: {'pass' if rep.passed else 'FAIL'} ({rep.violations} violations"
              f"{', vacuous' if rep.vacuous else ''})")
    return 0 if rep.passed else 1


def cmd_suite(args) -> int:
    ok, _ = run_suite(args.config, args.report, log=print)
    print("suite passed" if ok else "suite FAILED")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="caratheodory", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lambda", help="extremal length of a round annulus")
    s.add_argument("--inner", type=float, required=True)
    s.add_argument("--outer", type=float, required=True)
    s.set_defaults(func=cmd_lambda)

    mlc = sub.add_parser("mlc", help="moduli of local connectivity").add_subparsers(dest="mlc_command", required=True)
    s = mlc.add_parser("estimate")
    s.add_argument("--curve", required=True)
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--resolution", type=int, default=4096)
    s.add_argument("--out")
    s.set_defaults(func=cmd_mlc_estimate)
    s = mlc.add_parser("check")
    s.add_argument("--curve", required=True)
    s.add_argument("--table", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--resolution", type=int, default=4096)
    s.set_defaults(func=cmd_mlc_check)

    s = sub.add_parser("delta", help="k, delta and the threshold for a boundary point")
    s.add_argument("--domain", required=True)
    s.add_argument("--zeta", type=_zeta, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--table", required=True)
    s.add_argument("--l-grid", type=int, default=256)
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("component", help="boundary component of a disk/domain intersection")
    s.add_argument("--domain", required=True)
    s.add_argument("--zeta", type=_zeta, required=True)
    s.add_argument("--radius", type=float, required=True)
    s.add_argument("--grid", type=int, default=1024)
    s.add_argument("--out")
    s.set_defaults(func=cmd_component)

    s = sub.add_parser("verify", help="empirical continuity or diameter verification")
    s.add_argument("what", choices=["continuity", "diameter"])
    s.add_argument("--domain", required=True)
    s.add_argument("--zeta", type=_zeta, required=True)
    s.add_argument("--eps", type=float, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--delta-log2", type=float)
    g.add_argument("--r0", type=float)
    s.add_argument("--table", help="MLC table used to derive delta when --delta-log2 is absent")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--grid", type=int, default=1024)
    s.add_argument("--report")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="run a suite config")
    s.add_argument("--config", required=True)
    s.add_argument("--report", required=True)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ConfigError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
