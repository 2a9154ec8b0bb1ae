"""Suite runner: acceptance checks plus configured verification instances."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .acceptance import CRITERIA, run_all
from .bounds import BoundQuery, Log2Real, delta_of
from .harness import verify_continuity, verify_diameter
from .maps import map_from_json
from .mlc import MLCTable


class ConfigError(ValueError):
    pass


def default_config_path() -> Path:
    return Path(str(resources.files("caratheodory").joinpath("data/default_suite.json")))


def _need(obj: dict, key: str, where: str, kind=None):
    if key not in obj:
        raise ConfigError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is not None and (not isinstance(val, kind) or isinstance(val, bool)):
        raise ConfigError(f"{where}.{key}: wrong type {type(val).__name__}")
    return val


def _zeta(obj: dict, where: str) -> complex:
    z = _need(obj, "zeta", where, list)
    if len(z) != 2 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z):
        raise ConfigError(f"{where}.zeta: expected [x, y]")
    return complex(z[0], z[1])


def _map(obj: dict, where: str):
    dom = _need(obj, "domain", where, dict)
    try:
        return map_from_json(dom)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{where}.domain: {exc}") from None


def _eps(obj: dict, where: str) -> float:
    eps = _need(obj, "eps", where, (int, float))
    if not 0 < eps < 1:
        raise ConfigError(f"{where}.eps: must lie in (0, 1), got {eps}")
    return float(eps)


def load_config(path) -> dict:
    """Parse and validate a suite config; errors carry a line/column or a JSON path."""
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    known = {"seed", "criteria", "continuity", "diameter"}
    extra = set(cfg) - known
    if extra:
        raise ConfigError(f"{path}: unknown keys {sorted(extra)}")
    seed = cfg.get("seed", 42)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("$.seed: expected a non-negative integer")
    crit = cfg.get("criteria", sorted(CRITERIA))
    if not isinstance(crit, list) or any(c not in CRITERIA for c in crit):
        raise ConfigError(f"$.criteria: expected a list drawn from {sorted(CRITERIA)}")
    out = {"seed": seed, "criteria": crit, "continuity": [], "diameter": []}
    for i, inst in enumerate(cfg.get("continuity", [])):
        where = f"$.continuity[{i}]"
        if not isinstance(inst, dict):
            raise ConfigError(f"{where}: expected an object")
        item = {
            "name": str(inst.get("name", f"continuity-{i}")),
            "map": _map(inst, where),
            "zeta": _zeta(inst, where),
            "eps": _eps(inst, where),
            "samples": int(inst.get("samples", 100_000)),
            "seed": int(inst.get("seed", seed)),
            "expect_violations": bool(inst.get("expect_violations", False)),
        }
        delta = _need(inst, "delta", where)
        if delta == "formula":
            try:
                item["table"] = MLCTable.from_json(_need(inst, "table", where, dict))
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"{where}.table: {exc}") from None
            item["delta"] = "formula"
        elif isinstance(delta, dict) and isinstance(delta.get("log2"), (int, float)):
            item["delta"] = Log2Real(float(delta["log2"]))
        elif isinstance(delta, (int, float)) and not isinstance(delta, bool) and delta > 0:
            item["delta"] = Log2Real.from_float(float(delta))
        else:
            raise ConfigError(f"{where}.delta: expected a positive number, {{\"log2\": x}} or \"formula\"")
        out["continuity"].append(item)
    for i, inst in enumerate(cfg.get("diameter", [])):
        where = f"$.diameter[{i}]"
        if not isinstance(inst, dict):
            raise ConfigError(f"{where}: expected an object")
        r0 = _need(inst, "r0", where, (int, float))
        if not r0 > 0:
            raise ConfigError(f"{where}.r0: must be positive")
        out["diameter"].append({
            "name": str(inst.get("name", f"diameter-{i}")),
            "map": _map(inst, where),
            "zeta": _zeta(inst, where),
            "eps": _eps(inst, where),
            "r0": float(r0),
            "grid_n": int(inst.get("grid_n", 1024)),
        })
    return out


def run_suite(config_path, report_path=None, log=None) -> tuple[bool, dict]:
    """Run a suite config; returns (all passed, report). The report omits timings."""
    cfg = load_config(config_path)
    report: dict = {"seed": cfg["seed"], "criteria": [], "continuity": [], "diameter": []}
    failed = []
    for res in run_all(cfg["criteria"]):
        if log:
            log(res.line())
        report["criteria"].append(res.to_json())
        if not res.passed:
            failed.append(f"criterion {res.number}")
    for item in cfg["continuity"]:
        delta = item["delta"]
        extra = {}
        if delta == "formula":
            d = delta_of(BoundQuery(item["map"], item["zeta"], item["eps"]), item["table"])
            delta = d.delta
            extra = d.to_json()
        rep = verify_continuity(item["map"], item["zeta"], item["eps"], delta, item["samples"], item["seed"])
        ok = rep.violations > 0 if item["expect_violations"] else rep.violations == 0
        entry = {"name": item["name"], "expect_violations": item["expect_violations"], "passed": ok,
                 "report": rep.to_json(include_runtime=False)}
        if extra:
            entry["delta"] = extra
        report["continuity"].append(entry)
        if log:
            log(f"continuity {item['name']}: {'PASS' if ok else 'FAIL'} ({rep.violations} violations"
                f"{', vacuous' if rep.vacuous else ''})")
        if not ok:
            failed.append(item["name"])
    for item in cfg["diameter"]:
        try:
            rep = verify_diameter(item["map"], item["zeta"], item["r0"], item["eps"], item["grid_n"])
            entry = {"name": item["name"], "passed": rep.passed, "report": rep.to_json(include_runtime=False)}
        except ValueError as exc:
            entry = {"name": item["name"], "passed": False, "error": str(exc)}
        report["diameter"].append(entry)
        if log:
            log(f"diameter {item['name']}: {'PASS' if entry['passed'] else 'FAIL'}")
        if not entry["passed"]:
            failed.append(item["name"])
    report["failed"] = failed
    report["passed"] = not failed
    if report_path is not None:
        Path(report_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return not failed, report
