"""Command-line front end: ``singlab <subcommand> [flags]``.

Settings are layered: built-in defaults, then an INI file (``--config``; the
``[DEFAULT]`` section plus the section named after the subcommand), then
``SINGLAB_*`` environment variables, then command-line flags.

Exit codes: 0 when every check passes, 1 when checks ran and some failed,
2 for configuration or usage errors.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import itertools
import json
import multiprocessing
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .cache import TrajectoryCache, cache_key
from .constants import DomainError, Params, parse_rational
from .dynamics import IntegrationError, ShootingError
from .experiments import EXPERIMENTS, USES_TRAJECTORY, Outcome, RunConfig, default_shooter

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ENV_PREFIX = "SINGLAB_"
SUBCOMMANDS = ("verify-coefficients", "symbol-roots", "equilibrium", "pohozaev", "rate-fit",
               "aviles-balance", "sweep")
# keys accepted from config files, the environment and flags
KEYS = ("n", "p", "rel_tol", "abs_tol", "window", "method", "amplitude", "horizon", "sample_pitch",
        "table", "entry", "ns", "ps", "experiments", "workers", "out", "format", "cache_dir")


class ConfigError(ValueError):
    pass


# --- parsing -----------------------------------------------------------------------------------


def _window(text: str) -> Tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError(f"window must look like rmin:rmax, got {text!r}") from None
    if not 0 < lo < hi < 1:
        raise ConfigError("window needs 0 < rmin < rmax < 1")
    return lo, hi


def _int_list(text: str) -> Tuple[int, ...]:
    items = [s for s in text.replace(" ", "").split(",") if s]
    try:
        return tuple(int(s) for s in items)
    except ValueError:
        raise ConfigError(f"not a list of integers: {text!r}") from None


def _rational_list(text: str) -> Tuple[Fraction, ...]:
    items = [s for s in text.replace(" ", "").split(",") if s]
    try:
        return tuple(parse_rational(s) for s in items)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _positive_float(name: str, text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {text!r}") from None
    if not x > 0:
        raise ConfigError(f"{name} must be positive")
    return x


def build_config(command: str, raw: Dict[str, str]) -> Tuple[RunConfig, Dict[str, str]]:
    """Turn layered string settings into a validated RunConfig plus I/O options."""
    kw: Dict[str, object] = {"experiment": command}
    try:
        if "n" in raw:
            kw["n"] = int(raw["n"])
        if "p" in raw:
            kw["p"] = parse_rational(raw["p"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for name in ("rel_tol", "abs_tol", "amplitude", "horizon", "sample_pitch"):
        if name in raw:
            kw[name] = _positive_float(name, raw[name])
    if "window" in raw:
        kw["window"] = _window(raw["window"])
    if "method" in raw:
        if raw["method"] not in ("DOP853", "RK45"):
            raise ConfigError("method must be DOP853 or RK45")
        kw["method"] = raw["method"]
    for name in ("table", "entry"):
        if raw.get(name):
            kw[name] = raw[name]
    if "ns" in raw:
        kw["ns"] = _int_list(raw["ns"])
    if "ps" in raw:
        kw["ps"] = _rational_list(raw["ps"])
    if "experiments" in raw:
        ex = tuple(s for s in raw["experiments"].replace(" ", "").split(",") if s)
        unknown = [e for e in ex if e not in EXPERIMENTS]
        if unknown:
            raise ConfigError(f"unknown experiments: {', '.join(unknown)}")
        kw["experiments"] = ex
    if "workers" in raw:
        try:
            kw["workers"] = max(1, int(raw["workers"]))
        except ValueError:
            raise ConfigError("workers must be an integer") from None
    cfg = RunConfig(**kw)
    if cfg.table and not cfg.entry or cfg.entry and not cfg.table:
        raise ConfigError("--table and --entry go together")
    if command != "sweep":
        try:
            Params(cfg.n, cfg.p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    io = {"out": raw.get("out", ""), "format": raw.get("format", "json"), "cache_dir": raw.get("cache_dir", "")}
    if io["format"] not in ("json", "csv"):
        raise ConfigError("format must be json or csv")
    return cfg, io


def layered_settings(command: str, args: argparse.Namespace, environ: Dict[str, str]) -> Dict[str, str]:
    raw: Dict[str, str] = {}
    if args.config:
        parser = configparser.ConfigParser()
        try:
            with open(args.config) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        section = parser[command] if parser.has_section(command) else parser.defaults()
        for key in KEYS:
            if key in section:
                raw[key] = section[key]
    for key in KEYS:
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            raw[key] = env
    for key in KEYS:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = str(val)
    return raw


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"singlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="INI file with [DEFAULT] and per-command sections")
        sp.add_argument("--n", help="dimension")
        sp.add_argument("--p", help="exponent as an exact rational, e.g. 7/2")
        sp.add_argument("--out", help="output directory for report.json and CSV files")
        sp.add_argument("--rel-tol", dest="rel_tol")
        sp.add_argument("--abs-tol", dest="abs_tol")
        sp.add_argument("--window", help="fit window rmin:rmax")
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--method", choices=("DOP853", "RK45"))
        sp.add_argument("--amplitude", help="shooting seed amplitude")
        sp.add_argument("--horizon", help="shooting horizon in t")
        sp.add_argument("--sample-pitch", dest="sample_pitch")
        if name == "verify-coefficients":
            sp.add_argument("--table")
            sp.add_argument("--entry")
            sp.add_argument("--ns", help="comma-separated sample dimensions")
            sp.add_argument("--ps", help="comma-separated sample exponents")
        if name == "sweep":
            sp.add_argument("--ns", help="comma-separated dimensions")
            sp.add_argument("--ps", help="comma-separated exponents")
            sp.add_argument("--experiments", help=f"comma-separated, from {', '.join(EXPERIMENTS)}")
            sp.add_argument("--workers")
            sp.add_argument("--cache-dir", dest="cache_dir")
    return ap


# --- running --------------------------------------------------------------------------------


def _shooter_for(cache: Optional[TrajectoryCache], hits: List[bool]):
    if cache is None:
        return default_shooter

    def shoot(params: Params, cfg: RunConfig):
        key = cache_key("autonomous", params,
                        {"amplitude": cfg.amplitude, "horizon": cfg.horizon, "pitch": cfg.sample_pitch},
                        {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol, "method": cfg.method})
        traj, hit = cache.get_or_compute(key, lambda: default_shooter(params, cfg))
        hits.append(hit)
        return traj

    return shoot


def run_experiment(cfg: RunConfig, cache: Optional[TrajectoryCache] = None) -> Tuple[Outcome, List[bool]]:
    hits: List[bool] = []
    fn = EXPERIMENTS[cfg.experiment]
    if cfg.experiment in USES_TRAJECTORY:
        return fn(cfg, _shooter_for(cache, hits)), hits
    return fn(cfg), hits


def _cell(args: Tuple[RunConfig, Optional[str]]) -> dict:
    cfg, cache_dir = args
    cache = TrajectoryCache(Path(cache_dir)) if cache_dir else None
    cell = {"n": cfg.n, "p": str(cfg.p), "experiment": cfg.experiment}
    hits: List[bool] = []
    try:
        Params(cfg.n, cfg.p)
        outcome, hits = run_experiment(cfg, cache)
    except (DomainError, ValueError, ArithmeticError, IntegrationError, ShootingError) as exc:
        cell.update(status="error", error=f"{type(exc).__name__}: {exc}")
        return {"cell": cell, "hits": hits, "artifacts": {}}
    cell.update(status="pass" if outcome.passed else "fail", checks=outcome.checks, data=outcome.data)
    return {"cell": cell, "hits": hits, "artifacts": outcome.artifacts}


def run_sweep(cfg: RunConfig, cache_dir: Optional[str]) -> Tuple[dict, Dict[str, str], dict]:
    grid = [dataclasses.replace(cfg, n=n, p=p, experiment=e)
            for n, p, e in itertools.product(cfg.ns, cfg.ps, cfg.experiments)]
    if not grid:
        raise ConfigError("empty sweep grid")
    jobs = [(c, cache_dir) for c in grid]
    if cfg.workers > 1 and len(jobs) > 1:
        # processes rather than threads: mpmath keeps its working precision in global state
        ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods() else None)
        with ProcessPoolExecutor(max_workers=cfg.workers, mp_context=ctx) as pool:
            results = list(pool.map(_cell, jobs))
    else:
        results = [_cell(j) for j in jobs]
    results.sort(key=lambda r: (r["cell"]["n"], Fraction(r["cell"]["p"]), r["cell"]["experiment"]))
    cells = [r["cell"] for r in results]
    artifacts: Dict[str, str] = {}
    for r in results:
        c = r["cell"]
        stem = f"cells/n{c['n']}_p{c['p'].replace('/', '-')}_{c['experiment']}"
        for name, text in r["artifacts"].items():
            artifacts[f"{stem}/{name}"] = text
    hits = [h for r in results for h in r["hits"]]
    checks = {f"n={c['n']},p={c['p']},{c['experiment']}": {"passed": c["status"] == "pass", "status": c["status"]}
              for c in cells}
    timing = {"cache_hits": sum(hits), "cache_misses": len(hits) - sum(hits)}
    return {"checks": checks, "data": {"cells": cells}, "discrepancies": []}, artifacts, timing


def _write_outputs(out_dir: Path, report: dict, artifacts: Dict[str, str], summary: str) -> List[str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in sorted(artifacts.items()):
        path = out_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        written.append(name)
    (out_dir / "summary.txt").write_text(summary + "\n")
    (out_dir / "report.json").write_text(dumps(report) + "\n")
    return written


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str)


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def summarize(command: str, report: dict) -> str:
    lines = [f"singlab {command}: {'PASS' if report['passed'] else 'FAIL'}"]
    for name, c in sorted(report["checks"].items()):
        lines.append(f"  [{'ok' if c['passed'] else 'FAILED'}] {name}")
    extra = report["data"].get("summary")
    if extra:
        lines.append(str(extra))
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None, environ: Optional[Dict[str, str]] = None) -> int:
    environ = dict(os.environ if environ is None else environ)
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    command = args.command
    start = time.perf_counter()
    timing: dict = {}
    try:
        cfg, io = build_config(command, layered_settings(command, args, environ))
        out_dir = Path(io["out"]) if io["out"] else None
        cache_dir = io["cache_dir"] or (str(out_dir / "cache") if out_dir else "")
        if command == "sweep":
            body, artifacts, timing = run_sweep(cfg, cache_dir or None)
        else:
            outcome, _ = run_experiment(cfg)
            body = {"checks": outcome.checks, "data": outcome.data, "discrepancies": outcome.discrepancies}
            artifacts = outcome.artifacts
    except ConfigError as exc:
        print(f"singlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, KeyError) as exc:
        print(f"singlab: precondition failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, ShootingError, ArithmeticError) as exc:
        print(f"singlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    passed = all(c["passed"] for c in body["checks"].values())
    report = {
        "command": command,
        "engine_version": __version__,
        "config": cfg.echo(),
        "passed": passed,
        "artifacts": sorted(artifacts),
        **body,
    }
    timing["wall_seconds"] = round(time.perf_counter() - start, 6)
    report["timing"] = timing
    summary = summarize(command, report)
    if out_dir is not None:
        _write_outputs(out_dir, report, artifacts, summary)
        print(summary)
    elif io["format"] == "csv" and artifacts:
        sys.stdout.write(artifacts[sorted(artifacts)[0]])
    else:
        print(dumps(report))
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
