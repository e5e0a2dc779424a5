"""Command-line front end: ``seaforce run | list | describe``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .model import DivergenceError
from .scenario import (KINDS, ScenarioError, describe, execute, list_templates, parse_scenario,
                       template_path)


def _resolve(config):
    path = Path(config)
    if path.is_file():
        return path
    shipped = template_path(config if config.endswith(".cfg") else config + ".cfg")
    if shipped.is_file():
        return shipped
    return path


def cmd_run(args):
    scn = parse_scenario(_resolve(args.config)).with_overrides(args.seed, args.out)
    manifest = execute(scn)
    print(f"{scn.name}: {manifest.status}, {len(manifest.files)} files in {scn.output_dir} "
          f"({manifest.wall_time_s:.1f} s)")
    if manifest.failure:
        print(f"failure: {manifest.failure['error']}", file=sys.stderr)
        return 3
    return 0


def cmd_list(args):
    print("kinds:")
    for k in KINDS:
        print(f"  {k}")
    print("templates:")
    for fname, kind, name in list_templates():
        print(f"  {fname:24s} {kind:20s} {name}")
    return 0


def cmd_describe(args):
    print(describe(args.kind))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="seaforce", description="SEA force-control scenarios")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file (or a shipped template name)")
    run.add_argument("config")
    run.add_argument("--out", help="output directory (overrides the file and the environment)")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.set_defaults(func=cmd_run)
    sub.add_parser("list", help="list scenario kinds and shipped templates").set_defaults(func=cmd_list)
    d = sub.add_parser("describe", help="print the schema of a scenario kind")
    d.add_argument("kind")
    d.set_defaults(func=cmd_describe)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ScenarioError, DivergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
