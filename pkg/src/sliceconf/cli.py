"""Command line driver.

Usage::

    sliceconf run SCENARIO.json [--grid-n N] [--fd-order {2,4}]
                  [--tol NAME=VALUE ...] [--report OUT.json] [--csv-dir DIR]
    sliceconf preset list
    sliceconf preset show NAME

Exit status is 0 when every check passes, 1 when a check fails or
errors, and 2 for configuration problems.
"""

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .checks import CHECKS, DEFAULT_TOLERANCES, Context, run_check
from .conformal import THEOREM_KINDS, VARIANTS
from .errors import CatalogError, ConfigError, SliceconfError
from .presets import DEFAULT_N, build_scenario, describe_preset, list_presets, load_preset, pole_margin
from .profiles import write_csv

__all__ = ["main", "load_scenario", "run_scenario"]

SCHEMA = 1
_KEYS = {"schema", "name", "preset", "overrides", "custom", "grid", "checks", "tolerances", "output"}
_GRID_KEYS = {"n", "fd_order"}


def _parse_tol(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        name, val = item.split("=", 1)
        out[name.strip()] = val.strip()
    return out


def _tolerances(*layers):
    tol = dict(DEFAULT_TOLERANCES)
    for layer in layers:
        for name, val in layer.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {name!r}; known: {', '.join(sorted(tol))}")
            try:
                val = float(val)
            except (TypeError, ValueError):
                raise ConfigError(f"tolerance {name} must be a number") from None
            if not val > 0:
                raise ConfigError(f"tolerance {name} must be positive")
            tol[name] = val
    return tol


def _checks(raw):
    if not isinstance(raw, list) or not raw:
        raise ConfigError("'checks' must be a non-empty list")
    out = []
    for item in raw:
        if isinstance(item, str):
            name, params = item, {}
        elif isinstance(item, dict) and isinstance(item.get("check"), str):
            params = {k: v for k, v in item.items() if k != "check"}
            name = item["check"]
        else:
            raise ConfigError(f"cannot read check entry {item!r}")
        if name not in CHECKS:
            raise ConfigError(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
        if name == "theorem_premises" and params.get("kind", "einstein_sphere") not in THEOREM_KINDS:
            raise ConfigError(f"theorem kind must be one of {THEOREM_KINDS}")
        if params.get("variant", "derived") not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}")
        out.append((name, params))
    return out


def load_scenario(path):
    """Read and validate a scenario file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    extra = set(data) - _KEYS
    if extra:
        raise ConfigError(f"unknown scenario keys {sorted(extra)}")
    if data.get("schema", SCHEMA) != SCHEMA:
        raise ConfigError(f"unsupported schema {data.get('schema')!r}")
    if ("preset" in data) == ("custom" in data):
        raise ConfigError("give exactly one of 'preset' or 'custom'")
    grid = data.get("grid", {})
    if not isinstance(grid, dict) or set(grid) - _GRID_KEYS:
        raise ConfigError(f"'grid' may only hold {sorted(_GRID_KEYS)}")
    return data


def run_scenario(data, grid_n=None, fd_order=None, cli_tol=None, csv_dir=None):
    """Execute a validated scenario.

    Returns
    -------
    dict
        The report.
    """
    grid = data.get("grid", {})
    n = int(grid_n or grid.get("n", DEFAULT_N))
    order = int(fd_order or grid.get("fd_order", 4))
    if order not in (2, 4):
        raise ConfigError("fd_order must be 2 or 4")
    tol = _tolerances(data.get("tolerances", {}), cli_tol or {})
    checks = _checks(data.get("checks"))
    eps = pole_margin()
    name = data.get("name") or data.get("preset") or "custom"
    try:
        if "preset" in data:
            preset = load_preset(data["preset"], n, order, eps, data.get("overrides"))
        else:
            preset = build_scenario(name, data["custom"], n, order, eps)
    except CatalogError:
        raise
    except SliceconfError as exc:
        raise ConfigError(f"cannot build scenario: {exc}") from None
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed scenario data: {exc}") from None

    written = []

    def csv(stem, columns):
        if csv_dir is None:
            return
        Path(csv_dir).mkdir(parents=True, exist_ok=True)
        cols = dict(columns)
        if len(cols) == 1:
            cols = {"value": next(iter(cols.values()))}
        path = Path(csv_dir) / f"{stem}.csv"
        write_csv(path, preset.grid, cols)
        written.append(path.name)

    ctx = Context(preset, tol, csv)
    entries = []
    for cname, params in checks:
        entries.extend(run_check(cname, ctx, params))
    return {
        "schema": SCHEMA,
        "scenario": name,
        "entries": entries,
        "provenance": {
            "package_version": __version__,
            "preset": data.get("preset"),
            "grid": preset.grid.as_dict(),
            "pole_margin": eps,
            "tags": sorted(preset.tags),
            "tolerances": tol,
            "checks": [c for c, _ in checks],
            "csv_files": written,
        },
    }


def _dump(report):
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _cmd_run(args):
    data = load_scenario(args.scenario)
    out = data.get("output", {}) if isinstance(data.get("output"), dict) else {}
    csv_dir = args.csv_dir or out.get("csv_dir")
    report_path = args.report or out.get("report")
    report = run_scenario(data, args.grid_n, args.fd_order, _parse_tol(args.tol), csv_dir)
    text = _dump(report)
    if report_path:
        Path(report_path).write_text(text)
        for e in report["entries"]:
            res = e["max_residual"]
            shown = "-" if res is None else f"{res:.3e}"
            print(f"{e['status'].upper():5s} {e['name']:44s} {shown}")
    else:
        sys.stdout.write(text)
    return 1 if any(e["status"] in ("fail", "error") for e in report["entries"]) else 0


def _cmd_preset(args):
    if args.preset_cmd == "list":
        for name in list_presets():
            d = describe_preset(name)
            print(f"{name:18s} {','.join(d['tags']) or '-':40s} {d['description']}")
        return 0
    sys.stdout.write(json.dumps(describe_preset(args.name), indent=2) + "\n")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="sliceconf", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", help="run the checks of a scenario file")
    run.add_argument("scenario")
    run.add_argument("--grid-n", type=int, default=None)
    run.add_argument("--fd-order", type=int, choices=(2, 4), default=None)
    run.add_argument("--tol", action="append", metavar="NAME=VALUE")
    run.add_argument("--report")
    run.add_argument("--csv-dir")
    pre = sub.add_parser("preset", help="inspect bundled presets")
    psub = pre.add_subparsers(dest="preset_cmd", required=True)
    psub.add_parser("list")
    show = psub.add_parser("show")
    show.add_argument("name")
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.cmd == "run":
            return _cmd_run(args)
        return _cmd_preset(args)
    except (ConfigError, CatalogError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
