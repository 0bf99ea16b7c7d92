"""Command-line surface: sweeps, alpha optimization, comparisons, validation.

Configuration files are strict JSON: unknown keys are rejected at every
level, because a simulation config that silently ignores a typo produces
wrong science. The full schema is documented in the README.

Exit codes: 0 success, 1 validation/acceptance failure, 2 configuration
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .channel import LinkBudget
from .secrecy import TargetRate
from .montecarlo import EstimatorConfig, SchemeSpec, estimate_sop_crn
from .experiments import (DEFAULT_SEED, OutputRow, SweepSpec, optimize_alpha,
                          preset, run_sweep, PRESET_NAMES)
from .svg_plot import emit_svg
from .validation import run_checks

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

_CSV_HEADER = ["scheme", "x_name", "x_value", "sop", "ci_lo", "ci_hi", "n", "seed"]


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class AlphaOptSpec:
    budget: LinkBudget
    rate: TargetRate
    estimator: EstimatorConfig
    grid_points: int = 21
    refine: bool = True


@dataclass(frozen=True)
class CompareSpec:
    budget: LinkBudget
    schemes: tuple
    rate: TargetRate
    estimator: EstimatorConfig


@dataclass(frozen=True)
class RunConfig:
    command: str
    preset_name: Optional[str] = None
    spec: object = None
    out: Optional[str] = None
    out_format: str = "csv"
    seed: int = DEFAULT_SEED


# ---------------------------------------------------------------------------
# Strict config parsing
# ---------------------------------------------------------------------------

def _require_dict(value, ctx: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{ctx} must be an object, got {type(value).__name__}")
    return value

def _check_keys(d: dict, allowed: set, required: set, ctx: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {ctx}: {', '.join(sorted(unknown))}")
    missing = required - set(d)
    if missing:
        raise ConfigError(f"missing required key(s) in {ctx}: {', '.join(sorted(missing))}")


def _parse_budget(d, ctx: str = "budget") -> LinkBudget:
    d = _require_dict(d, ctx)
    allowed = {"gamma_sr_db", "gamma_rd_db", "gamma_se_db", "gamma_re_db",
               "gamma_rr_db", "num_relays", "mode"}
    required = {"gamma_sr_db", "gamma_rd_db", "gamma_se_db", "gamma_re_db",
                "gamma_rr_db"}
    _check_keys(d, allowed, required, ctx)
    try:
        return LinkBudget.from_db(
            d["gamma_sr_db"], d["gamma_rd_db"], d["gamma_se_db"],
            d["gamma_re_db"], d["gamma_rr_db"],
            num_relays=int(d.get("num_relays", 1)),
            mode=d.get("mode", "stochastic"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {ctx}: {exc}") from exc


def _parse_scheme(d, ctx: str) -> SchemeSpec:
    d = _require_dict(d, ctx)
    _check_keys(d, {"id", "alpha", "gamma_rr_db", "label"}, {"id"}, ctx)
    try:
        return SchemeSpec(kind=d["id"], alpha=d.get("alpha"),
                          gamma_rr_db=d.get("gamma_rr_db"),
                          label=d.get("label", ""))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {ctx}: {exc}") from exc


def _parse_estimator(d: dict, seed: int) -> EstimatorConfig:
    try:
        return EstimatorConfig(n_samples=int(d.get("n_samples", 100_000)),
                               seed=seed,
                               batch_size=int(d.get("batch_size", 4096)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid estimator settings: {exc}") from exc


def _parse_sweep_spec(d, seed: int, ctx: str = "spec") -> SweepSpec:
    d = _require_dict(d, ctx)
    allowed = {"sweep", "grid", "budget", "schemes", "r0", "n_samples", "batch_size"}
    _check_keys(d, allowed, {"sweep", "grid", "budget", "schemes"}, ctx)
    if not isinstance(d["schemes"], list) or not d["schemes"]:
        raise ConfigError(f"{ctx}.schemes must be a non-empty list")
    schemes = tuple(_parse_scheme(s, f"{ctx}.schemes[{i}]")
                    for i, s in enumerate(d["schemes"]))
    try:
        return SweepSpec(
            x_name=d["sweep"], grid=tuple(d["grid"]),
            budget=_parse_budget(d["budget"], f"{ctx}.budget"),
            schemes=schemes,
            rate=TargetRate(float(d.get("r0", 1.0))),
            estimator=_parse_estimator(d, seed))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {ctx}: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error at line {exc.lineno}, "
                          f"column {exc.colno}: {exc.msg}") from exc
    doc = _require_dict(doc, "config")
    if "command" not in doc:
        raise ConfigError("missing required key in config: command")
    command = doc["command"]

    if command == "sweep":
        _check_keys(doc, {"command", "preset", "spec", "out", "format", "seed"},
                    {"command"}, "config")
        if ("preset" in doc) == ("spec" in doc):
            raise ConfigError("exactly one of 'preset' and 'spec' must be present")
        seed = _parse_seed(doc)
        out_format = doc.get("format", "csv")
        if out_format not in ("csv", "csv+svg"):
            raise ConfigError(f"format must be 'csv' or 'csv+svg', got {out_format!r}")
        preset_name = doc.get("preset")
        if preset_name is not None and preset_name not in PRESET_NAMES:
            raise ConfigError(f"unknown preset {preset_name!r}; expected one of {PRESET_NAMES}")
        spec = None
        if "spec" in doc:
            spec = _parse_sweep_spec(doc["spec"], seed)
        return RunConfig(command="sweep", preset_name=preset_name, spec=spec,
                         out=doc.get("out"), out_format=out_format, seed=seed)

    if command == "alpha-opt":
        allowed = {"command", "budget", "r0", "n_samples", "batch_size",
                   "grid_points", "refine", "out", "seed"}
        _check_keys(doc, allowed, {"command", "budget"}, "config")
        seed = _parse_seed(doc)
        try:
            spec = AlphaOptSpec(
                budget=_parse_budget(doc["budget"]),
                rate=TargetRate(float(doc.get("r0", 1.0))),
                estimator=_parse_estimator(doc, seed),
                grid_points=int(doc.get("grid_points", 21)),
                refine=bool(doc.get("refine", True)))
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc
        return RunConfig(command="alpha-opt", spec=spec, out=doc.get("out"), seed=seed)

    if command == "compare":
        allowed = {"command", "budget", "schemes", "r0", "n_samples",
                   "batch_size", "out", "seed"}
        _check_keys(doc, allowed, {"command", "budget", "schemes"}, "config")
        seed = _parse_seed(doc)
        if not isinstance(doc["schemes"], list) or not doc["schemes"]:
            raise ConfigError("schemes must be a non-empty list")
        schemes = tuple(_parse_scheme(s, f"schemes[{i}]")
                        for i, s in enumerate(doc["schemes"]))
        try:
            spec = CompareSpec(
                budget=_parse_budget(doc["budget"]),
                schemes=schemes,
                rate=TargetRate(float(doc.get("r0", 1.0))),
                estimator=_parse_estimator(doc, seed))
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc
        return RunConfig(command="compare", spec=spec, out=doc.get("out"), seed=seed)

    if command == "validate":
        _check_keys(doc, {"command"}, {"command"}, "config")
        return RunConfig(command="validate")

    raise ConfigError(f"unknown command {command!r}")


def _parse_seed(doc: dict) -> int:
    seed = doc.get("seed", DEFAULT_SEED)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 1 << 64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return seed


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def emit_csv(rows: Sequence[OutputRow], destination,
             metadata: Optional[dict] = None) -> None:
    """Write rows as CSV (LF newlines, 6-decimal values) to a path or file.

    Optional metadata is embedded as leading `#` comment lines so any result
    file carries the seed and resolved configuration it came from.
    """
    if not rows:
        raise ValueError("cannot emit an empty row list")
    buf = io.StringIO()
    if metadata:
        for key in sorted(metadata):
            buf.write(f"# {key} = {metadata[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for r in rows:
        writer.writerow([r.scheme, r.x_name, f"{r.x_value:.6f}", f"{r.p_hat:.6f}",
                         f"{r.ci_lo:.6f}", f"{r.ci_hi:.6f}", r.n, r.seed])
    text = buf.getvalue()
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write CSV to {destination!r}: {exc}") from exc


def _sweep_metadata(spec: SweepSpec, preset_name: Optional[str]) -> dict:
    budget = {k: (f"{v:.6f}" if isinstance(v, float) else v)
              for k, v in spec.budget.to_db_dict().items()}
    resolved = {
        "command": "sweep",
        "preset": preset_name or "",
        "x_name": spec.x_name,
        "grid": list(spec.grid),
        "budget": budget,
        "schemes": [s.label for s in spec.schemes],
        "r0": spec.rate.r0,
        "n_samples": spec.estimator.n_samples,
        "batch_size": spec.estimator.batch_size,
        "seed": spec.estimator.seed,
    }
    return {"seed": spec.estimator.seed,
            "config": json.dumps(resolved, sort_keys=True)}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _resolve_sweep(cfg: RunConfig) -> SweepSpec:
    if cfg.preset_name is not None:
        spec = preset(cfg.preset_name, seed=cfg.seed)
        return spec
    return cfg.spec


def _cmd_sweep(cfg: RunConfig) -> int:
    spec = _resolve_sweep(cfg)
    rows = run_sweep(spec)
    metadata = _sweep_metadata(spec, cfg.preset_name)
    if cfg.out is None:
        if cfg.out_format == "csv+svg":
            raise ConfigError("--svg output requires --out")
        emit_csv(rows, sys.stdout, metadata)
        return EXIT_OK
    emit_csv(rows, cfg.out, metadata)
    print(f"wrote {cfg.out}")
    if cfg.out_format == "csv+svg":
        svg_path = _svg_path(cfg.out)
        try:
            emit_svg(rows, svg_path, metadata)
        except OSError as exc:
            raise OSError(f"cannot write SVG to {svg_path!r}: {exc}") from exc
        print(f"wrote {svg_path}")
    return EXIT_OK


def _svg_path(csv_path: str) -> str:
    return (csv_path[:-4] if csv_path.endswith(".csv") else csv_path) + ".svg"


def _cmd_alpha_opt(cfg: RunConfig) -> int:
    spec: AlphaOptSpec = cfg.spec
    alpha_star, est = optimize_alpha(spec.budget, spec.rate, spec.estimator,
                                     grid_points=spec.grid_points,
                                     refine=spec.refine)
    print(f"alpha_star = {alpha_star:.6f}")
    print(f"sop = {est.p_hat:.6f}  ci95 = [{est.ci_lo:.6f}, {est.ci_hi:.6f}]"
          f"  n = {est.n}  seed = {est.seed}")
    if cfg.out is not None:
        row = OutputRow(scheme="SBJ", x_name="alpha", x_value=alpha_star,
                        p_hat=est.p_hat, ci_lo=est.ci_lo, ci_hi=est.ci_hi,
                        n=est.n, seed=est.seed)
        metadata = {"seed": est.seed,
                    "config": json.dumps({"command": "alpha-opt",
                                          "budget": spec.budget.to_db_dict(),
                                          "r0": spec.rate.r0,
                                          "grid_points": spec.grid_points,
                                          "refine": spec.refine,
                                          "n_samples": est.n,
                                          "seed": est.seed}, sort_keys=True)}
        emit_csv([row], cfg.out, metadata)
        print(f"wrote {cfg.out}")
    return EXIT_OK


def _cmd_compare(cfg: RunConfig) -> int:
    spec: CompareSpec = cfg.spec
    estimates = estimate_sop_crn(spec.schemes, spec.budget, spec.rate,
                                 spec.estimator)
    width = max(len(s.label) for s in spec.schemes)
    for scheme, est in zip(spec.schemes, estimates):
        print(f"{scheme.label:<{width}}  sop = {est.p_hat:.6f}  "
              f"ci95 = [{est.ci_lo:.6f}, {est.ci_hi:.6f}]")
    if cfg.out is not None:
        x = spec.budget.to_db_dict()["gamma_rr_db"]
        rows = [OutputRow(scheme=s.label, x_name="gamma_rr_db", x_value=x,
                          p_hat=e.p_hat, ci_lo=e.ci_lo, ci_hi=e.ci_hi,
                          n=e.n, seed=e.seed)
                for s, e in zip(spec.schemes, estimates)]
        metadata = {"seed": spec.estimator.seed,
                    "config": json.dumps({"command": "compare",
                                          "budget": spec.budget.to_db_dict(),
                                          "schemes": [s.label for s in spec.schemes],
                                          "r0": spec.rate.r0,
                                          "n_samples": spec.estimator.n_samples,
                                          "seed": spec.estimator.seed},
                                         sort_keys=True)}
        emit_csv(rows, cfg.out, metadata)
        print(f"wrote {cfg.out}")
    return EXIT_OK


def _cmd_validate() -> int:
    results = run_checks()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.detail}")
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdsec",
        description="Monte Carlo secrecy-outage simulator for full-duplex "
                    "relay systems")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a preset or configured sweep")
    group = sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES)
    group.add_argument("--config", help="JSON config file")
    sweep.add_argument("--seed", type=int, help="seed override")
    sweep.add_argument("--out", help="CSV output path (default: stdout)")
    sweep.add_argument("--svg", action="store_true",
                       help="also write an SVG plot next to the CSV")

    for name in ("alpha-opt", "compare"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, help="seed override")
        p.add_argument("--out", help="CSV output path override")

    sub.add_parser("validate", help="run the built-in oracle checks")
    return parser


def _load_config_file(path: str, expected_command: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    cfg = parse_config(text)
    if cfg.command != expected_command:
        raise ConfigError(f"config declares command {cfg.command!r}, "
                          f"but {expected_command!r} was invoked")
    return cfg


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "seed", None) is not None:
        seed = args.seed
        if not 0 <= seed < 1 << 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
        cfg = replace(cfg, seed=seed)
        if isinstance(cfg.spec, SweepSpec):
            cfg = replace(cfg, spec=replace(
                cfg.spec, estimator=replace(cfg.spec.estimator, seed=seed)))
        elif isinstance(cfg.spec, (AlphaOptSpec, CompareSpec)):
            cfg = replace(cfg, spec=replace(
                cfg.spec, estimator=replace(cfg.spec.estimator, seed=seed)))
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, out=args.out)
    if getattr(args, "svg", False):
        cfg = replace(cfg, out_format="csv+svg")
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate()
        if args.command == "sweep":
            if args.config:
                cfg = _load_config_file(args.config, "sweep")
            else:
                cfg = RunConfig(command="sweep", preset_name=args.preset)
            cfg = _apply_overrides(cfg, args)
            return _cmd_sweep(cfg)
        cfg = _load_config_file(args.config, args.command)
        cfg = _apply_overrides(cfg, args)
        if args.command == "alpha-opt":
            return _cmd_alpha_opt(cfg)
        return _cmd_compare(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
