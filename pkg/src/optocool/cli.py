"""Command line entry point: ``optocool run|preset|validate``.

Exit codes: 0 success, 1 configuration error, 2 every point failed,
3 some points failed.
"""
from __future__ import annotations

import argparse
import copy
import logging
import sys

from .config import METHODS, build_config, read_raw
from .errors import ConfigError
from .presets import PRESETS, preset_configs
from .sweep import emit, run_sweep

log = logging.getLogger("optocool")

EXIT_OK, EXIT_CONFIG, EXIT_FAILED, EXIT_PARTIAL = 0, 1, 2, 3


def _pair(text: str) -> tuple:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    if not 0 < lo < hi:
        raise argparse.ArgumentTypeError("need 0 < LO < HI")
    return lo, hi


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="optocool", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required):
        sp.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("--config", required=config_required, help="TOML run file")
        sp.add_argument("--out", help="output directory (overrides output.directory)")
        sp.add_argument("--method", choices=METHODS)
        sp.add_argument("--points", type=int, help="number of sweep points")
        sp.add_argument("--truncation", type=_ints, help="Fock truncations, cavity first, e.g. 7,70")
        sp.add_argument("--workers", type=int, help="parallel worker processes")
        sp.add_argument("--th-range", type=_pair, help="log-spaced hot-bath temperature range LO,HI")

    common(sub.add_parser("run", help="run a configuration file"), True)
    pre = sub.add_parser("preset", help="reproduce a figure")
    pre.add_argument("name", choices=PRESETS)
    common(pre, False)
    val = sub.add_parser("validate", help="check a configuration file and exit")
    val.add_argument("--config", required=True)
    return p


def apply_overrides(raw: dict, args) -> dict:
    """Fold command-line flags into a raw config before validation."""
    raw = copy.deepcopy(raw)
    if args.method:
        raw.setdefault("solver", {})["method"] = args.method
    if args.truncation:
        raw.setdefault("solver", {})["truncations"] = args.truncation
    if args.workers:
        raw.setdefault("solver", {})["workers"] = args.workers
    if args.out:
        raw.setdefault("output", {})["directory"] = args.out
    if args.th_range:
        lo, hi = args.th_range
        sweep = raw.setdefault("sweep", {})
        sweep.clear()
        sweep.update(parameter="baths.H.temperature", start=lo, stop=hi, spacing="log",
                     points=args.points or 40)
    elif args.points:
        sweep = raw.get("sweep")
        if not sweep:
            raise ConfigError("--points: the configuration has no sweep")
        if "values" in sweep:
            vals = sweep.pop("values")
            positive = min(vals) > 0
            sweep.update(start=min(vals), stop=max(vals), spacing="log" if positive else "linear")
        sweep["points"] = args.points
    return raw


def _run(raws, args) -> int:
    configs = [build_config(apply_overrides(r, args)) for r in raws]
    status = EXIT_OK
    for cfg in configs:
        for w in cfg.warnings:
            log.warning(w)
        result = run_sweep(cfg)
        paths = emit(result, cfg)
        n = len(result.points)
        log.info("%s (%s): %d points, %d failed, %.1f s", cfg.preset, result.method, n,
                 result.n_failed, result.wall_seconds)
        for path in paths:
            print(path)
        if result.n_failed == n:
            status = EXIT_FAILED
        elif result.n_failed and status == EXIT_OK:
            status = EXIT_PARTIAL
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "validate":
            cfg = build_config(read_raw(args.config))
            for w in cfg.warnings:
                print(f"warning: {w}")
            n = len(cfg.sweep.values) if cfg.sweep else 1
            print(f"ok: {cfg.scenario} scenario, method {cfg.solver.method}, {n} point(s), hash {cfg.config_hash}")
            return EXIT_OK
        if args.command == "run":
            raws = [read_raw(args.config)]
        else:
            if args.config:
                raise ConfigError("--config is not used with preset")
            raws = preset_configs(args.name)
        return _run(raws, args)
    except ConfigError as exc:
        print("configuration error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
