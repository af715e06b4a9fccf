"""Command line interface: ``fwmindex run|sweep|optimize-omega|validate``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .analysis.config import PRESETS, ConfigError, ScenarioConfig, load_config
from .analysis.scenarios import ScenarioFailure, run_scenario
from .analysis.spectrum import _jsonable, emit, format_csv, format_json
from .core import DomainError
from .liouville.generator import SingularSystem

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATE = 0, 2, 3, 4


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".analysis.json")


def _write_result(result, cfg: ScenarioConfig, output: str | None, fmt: str) -> None:
    if output is None:
        sys.stdout.write(format_csv(result) if fmt == "csv" else format_json(result))
        return
    path = emit(result, output, fmt)
    if fmt == "csv":
        # CSV carries only the table; metadata and analysis go next to it
        doc = {"metadata": result.metadata, "analysis": result.analysis}
        _sidecar(path).write_text(json.dumps(_jsonable(doc), sort_keys=True, indent=1, allow_nan=False) + "\n", encoding="utf-8")


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config)
    changes = {}
    if getattr(args, "engine", None):
        changes["engine"] = args.engine
    if getattr(args, "format", None):
        changes["format"] = args.format
    if getattr(args, "output", None):
        changes["output"] = args.output
    if changes:
        data = cfg.to_dict()
        data.update(changes)
        cfg = ScenarioConfig.from_dict(data)
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args)
    result = run_scenario(cfg)
    _write_result(result, cfg, cfg.output, cfg.format)
    return EXIT_OK


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def cmd_sweep(args) -> int:
    cfg = _load(args)
    rows = []
    for raw in args.values:
        c = cfg.with_overrides(**{args.param: _parse_value(raw)})
        res = run_scenario(c)
        best = res.analysis.get("best_root")
        gain = res.analysis.get("gain_check", {})
        rows.append({
            "value": _parse_value(raw),
            "root_delta_over_gamma_r": best["delta_over_gamma_r"] if best else None,
            "dn_plus_re_at_root": best["dn_real"] if best else None,
            "no_gain": gain.get("no_gain"),
            "control_rabi": res.metadata["resolved_parameters"].get("control_rabi"),
        })
        if args.prefix:
            emit(res, f"{args.prefix}_{args.param}_{raw}.{c.format}", c.format)
    text = json.dumps(_jsonable({"param": args.param, "scenario": cfg.scenario, "results": rows}), sort_keys=True, indent=1) + "\n"
    _out(text, args.summary)
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = _load(args)
    if "control_rabi" not in PRESETS[cfg.scenario]["params"]:
        raise ConfigError(f"scenario {cfg.scenario} has no control Rabi frequency to optimize")
    c = cfg.with_overrides(control_rabi=None)
    res = run_scenario(c)
    doc = {
        "scenario": c.scenario,
        "engine": c.engine,
        "rabi_optimum": res.analysis.get("rabi_optimum"),
        "best_root": res.analysis.get("best_root"),
    }
    _out(json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n", args.summary)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .analysis.validate import run_validation

    report, ok = run_validation()
    _out(report, args.output)
    return EXIT_OK if ok else EXIT_VALIDATE


def _out(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fwmindex", description="FWM refractive index spectra")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="YAML or JSON scenario config")
        p.add_argument("--engine", choices=("analytic", "liouville", "both"))
        p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("run", help="compute one spectrum")
    common(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="rerun a scenario over values of one parameter")
    common(p)
    p.add_argument("--param", required=True)
    p.add_argument("--values", nargs="+", required=True)
    p.add_argument("--prefix", help="also write each spectrum to PREFIX_param_value.ext")
    p.add_argument("--summary", help="summary JSON path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize-omega", help="optimize the control Rabi frequency")
    common(p)
    p.add_argument("--summary", help="result JSON path (default stdout)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validate", help="run the oracle cross-checks")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ScenarioFailure, SingularSystem, DomainError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
