"""Configuration-driven runner.

One JSON document configures a scenario, a sampling plan, and a check
suite; ``run`` executes it and writes machine-readable outputs:

* ``report.json``   -- effective config echo, per-check results, verdict;
* ``polytope.json`` -- every computed polytope (vertices, facets as
  {normal, offset}, affine rank, flags);
* ``cloud.csv``     -- optional point cloud (point coords, f value, moment
  coords, reduced coords) at 17 significant digits.

Exit codes: 0 suite pass, 1 a check failed, 2 configuration or runtime
error.  All randomness flows from the single config seed; reports embed
the full effective config so any report is reproducible from itself.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .momentbody import CHECK_DEFAULTS, CHECK_NAMES, SuiteContext, compute_cloud, run_suite
from .scenarios import FULL, BadParams, SCENARIO_NAMES, SmokeFail, Strategy, build

_SAMPLING_DEFAULTS = {
    "count": 10_000,
    "seed": 0,
    "strategy": "full",
    "sigma": 1.0,
    "leaf_levels": [-0.5, 0.0, 0.7],
    "band": [-1.0, 1.0],
}


@dataclass(frozen=True)
class RunConfig:
    scenario_name: str
    scenario_params: dict
    sampling: dict
    checks: dict          # name -> {"enabled": bool, option overrides}
    fault_injection: dict | None
    output_dir: str
    emit_cloud: bool

    def to_dict(self) -> dict:
        return {
            "scenario": {"name": self.scenario_name, "params": self.scenario_params},
            "sampling": self.sampling,
            "checks": self.checks,
            "fault_injection": self.fault_injection,
            "output_dir": self.output_dir,
            "emit_cloud": self.emit_cloud,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def context(self) -> SuiteContext:
        return SuiteContext(
            count=self.sampling["count"],
            seed=self.sampling["seed"],
            sigma=self.sampling["sigma"],
            band=tuple(self.sampling["band"]),
            leaf_levels=tuple(self.sampling["leaf_levels"]),
        )


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def validate(text: str):
    """Parse and validate a configuration document.

    Returns (RunConfig or None, list of (path, message)); all problems are
    collected, not just the first.
    """
    errors: list[tuple[str, str]] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [("$", f"not valid JSON: {exc}")]
    if not isinstance(raw, dict):
        return None, [("$", "top level must be an object")]

    known_top = {"scenario", "sampling", "checks", "fault_injection",
                 "output_dir", "emit_cloud"}
    for key in raw:
        if key not in known_top:
            errors.append((key, "unknown configuration field"))

    scenario = raw.get("scenario")
    name, params = "", {}
    if not isinstance(scenario, dict) or "name" not in scenario:
        errors.append(("scenario", "an object with a 'name' field is required"))
    else:
        name = scenario.get("name")
        params = scenario.get("params", {})
        if name not in SCENARIO_NAMES:
            errors.append(("scenario.name",
                           f"unknown scenario {name!r}; known: {list(SCENARIO_NAMES)}"))
        if not isinstance(params, dict):
            errors.append(("scenario.params", "must be an object"))
            params = {}
        zeta = params.get("zeta")
        if zeta is not None:
            if not isinstance(zeta, (list, tuple)) or not all(_is_number(z) for z in zeta):
                errors.append(("scenario.params.zeta", "must be a list of numbers"))
            elif any(z <= 0 for z in zeta):
                errors.append((
                    "scenario.params.zeta",
                    "entries violate the constraint zeta_1 >= zeta_2 >= ... >= zeta_n > 0",
                ))

    sampling = dict(_SAMPLING_DEFAULTS)
    user_sampling = raw.get("sampling", {})
    if not isinstance(user_sampling, dict):
        errors.append(("sampling", "must be an object"))
        user_sampling = {}
    for key, value in user_sampling.items():
        if key not in _SAMPLING_DEFAULTS:
            errors.append((f"sampling.{key}", "unknown sampling field"))
        else:
            sampling[key] = value
    if not isinstance(sampling["count"], int) or sampling["count"] < 1:
        errors.append(("sampling.count", "must be an integer >= 1"))
    if not isinstance(sampling["seed"], int):
        errors.append(("sampling.seed", "must be an integer"))
    if sampling["strategy"] not in ("full", "leaf", "ball"):
        errors.append(("sampling.strategy", "must be one of full/leaf/ball"))
    if not _is_number(sampling["sigma"]) or sampling["sigma"] <= 0:
        errors.append(("sampling.sigma", "must be a positive number"))
    if (not isinstance(sampling["leaf_levels"], (list, tuple))
            or not all(_is_number(t) for t in sampling["leaf_levels"])):
        errors.append(("sampling.leaf_levels", "must be a list of numbers"))
    if (not isinstance(sampling["band"], (list, tuple)) or len(sampling["band"]) != 2
            or not all(_is_number(t) for t in sampling["band"])):
        errors.append(("sampling.band", "must be a [low, high] pair"))

    checks: dict = {}
    user_checks = raw.get("checks", {})
    if not isinstance(user_checks, dict):
        errors.append(("checks", "must map check names to settings"))
        user_checks = {}
    for cname, settings in user_checks.items():
        if cname not in CHECK_NAMES:
            errors.append((f"checks.{cname}",
                           f"unknown check; known: {list(CHECK_NAMES)}"))
            continue
        if not isinstance(settings, dict):
            errors.append((f"checks.{cname}", "settings must be an object"))
            continue
        clean = {}
        for key, value in settings.items():
            if key == "enabled":
                if not isinstance(value, bool):
                    errors.append((f"checks.{cname}.enabled", "must be a boolean"))
                    continue
            elif key in CHECK_DEFAULTS[cname]:
                if key.endswith(("tolerance", "floor", "radius", "step")) and value is not None:
                    if not _is_number(value) or value <= 0:
                        errors.append((f"checks.{cname}.{key}", "must be a positive number"))
                        continue
            else:
                errors.append((f"checks.{cname}.{key}", "unknown check option"))
                continue
            clean[key] = value
        checks[cname] = clean

    fault = raw.get("fault_injection")
    if fault is not None:
        if (not isinstance(fault, dict) or "component" not in fault
                or "offset" not in fault):
            errors.append(("fault_injection",
                           "must be null or {component: int, offset: number}"))
            fault = None
        else:
            if not isinstance(fault.get("component"), int):
                errors.append(("fault_injection.component", "must be an integer"))
            if not _is_number(fault.get("offset")):
                errors.append(("fault_injection.offset", "must be a number"))

    output_dir = raw.get("output_dir", "runs")
    if not isinstance(output_dir, str) or not output_dir:
        errors.append(("output_dir", "must be a non-empty string"))
        output_dir = "runs"
    emit_cloud = raw.get("emit_cloud", False)
    if not isinstance(emit_cloud, bool):
        errors.append(("emit_cloud", "must be a boolean"))
        emit_cloud = False

    if errors:
        return None, errors
    config = RunConfig(name, params, sampling, checks, fault, output_dir, emit_cloud)
    return config, []


def _format_value(v: float) -> str:
    return f"{v:.17g}"


def _write_cloud_csv(path: Path, scenario, config: RunConfig):
    s = config.sampling
    cloud = compute_cloud(scenario, s["count"], s["seed"], FULL, s["sigma"])
    dim = scenario.ambient_dim
    k = scenario.basis_size
    cdim = cloud.reduced.shape[1]
    header = (
        [f"x{i}" for i in range(dim)]
        + ["f_value"]
        + [f"phi_{i}" for i in range(k)]
        + [f"reduced_{i}" for i in range(cdim)]
    )
    with path.open("w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(cloud.count):
            row = (
                list(cloud.batch.points[i])
                + [cloud.f_values[i]]
                + list(cloud.raw_components[i])
                + list(cloud.reduced[i])
            )
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def run(config: RunConfig) -> int:
    """Execute a validated configuration; returns the process exit code."""
    started = time.time()
    try:
        scenario = build(config.scenario_name, dict(config.scenario_params))
    except (BadParams, SmokeFail) as exc:
        print(f"error: scenario construction failed: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_suite(scenario, config.checks, config.context(),
                           config.fault_injection)
    except Exception as exc:  # config problems surface before computation
        print(f"error: suite execution failed: {exc}", file=sys.stderr)
        return 2

    payload = {
        "toolkit_version": __version__,
        "seed": config.sampling["seed"],
        "config": config.to_dict(),
        "suite_pass": report.passed,
        "checks": [r.to_dict() for r in report.results],
        "runtime_ms_total": 1000.0 * (time.time() - started),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    polytopes = {
        label: artifact.to_dict() for label, artifact in report.polytopes.items()
    }
    try:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n"
        )
        (out / "polytope.json").write_text(
            json.dumps({"polytopes": polytopes}, indent=2, sort_keys=True,
                       default=float) + "\n"
        )
        if config.emit_cloud:
            _write_cloud_csv(out / "cloud.csv", scenario, config)
    except OSError as exc:
        print(f"error: could not write outputs: {exc}", file=sys.stderr)
        return 2

    for result in report.results:
        if not result.enabled:
            status = "off "
        elif result.skipped:
            status = "skip"
        else:
            status = "PASS" if result.passed else "FAIL"
        print(f"[{status}] {result.name}")
    print(f"suite: {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="confsym",
        description="moment-body verification runner for conformal symplectic scenarios",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    sub = parser.add_subparsers(dest="command", required=True)
    p_validate = sub.add_parser("validate", help="validate a configuration file")
    p_validate.add_argument("config", type=Path)
    p_run = sub.add_parser("run", help="run a configuration file")
    p_run.add_argument("config", type=Path)
    sub.add_parser("list-scenarios", help="list catalog scenario names")
    sub.add_parser("list-checks", help="list check names and defaults")
    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        for name in SCENARIO_NAMES:
            print(name)
        return 0
    if args.command == "list-checks":
        for name in CHECK_NAMES:
            print(f"{name}: defaults {json.dumps(CHECK_DEFAULTS[name], sort_keys=True)}")
        return 0

    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    config, errors = validate(text)
    if errors:
        for path, message in errors:
            print(f"config error at {path}: {message}", file=sys.stderr)
        return 2
    if args.seed is not None:
        sampling = dict(config.sampling)
        sampling["seed"] = args.seed
        config = RunConfig(config.scenario_name, config.scenario_params, sampling,
                           config.checks, config.fault_injection,
                           config.output_dir, config.emit_cloud)
    if args.command == "validate":
        print(config.serialize())
        return 0
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
