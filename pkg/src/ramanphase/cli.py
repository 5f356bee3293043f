"""Command-line entry point: ``ramanphase run|figure|validate``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, figures
from .config import ConfigError, apply_overrides, load_document, validate
from .runner import thread_count, write


def _fail(err: dict, code: int = 2) -> int:
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def _run_config(cfg, text, out, threads):
    res = validate(cfg, text)
    paths = write(res, out, thread_count(threads))
    for p in paths:
        print(p)


def cmd_run(args) -> int:
    cfg, text = load_document(args.config)
    if args.set:
        cfg, text = apply_overrides(cfg, args.set), None
    _run_config(cfg, text, args.out, args.threads)
    return 0


def cmd_figure(args) -> int:
    try:
        names = figures.expand(args.name)
    except KeyError:
        raise ConfigError(
            f"unknown figure {args.name!r}; choose from {', '.join(figures.names())}",
            path="name", kind="usage",
        ) from None
    for name in names:
        cfg = apply_overrides(figures.preset(name), args.set)
        _run_config(cfg, None, args.out, args.threads)
    return 0


def cmd_validate(args) -> int:
    cfg, text = load_document(args.config)
    res = validate(cfg, text)
    print(json.dumps({"valid": True, "regime": res["regime"], "outputs": res["outputs"]}, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramanphase", description="Raman phase quasidistribution toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory (overrides the config)")
        p.add_argument("--threads", type=int, help="worker threads (default: $RAMANPHASE_THREADS)")
        p.add_argument("--set", action="append", default=[], metavar="K=V", help="override a parameter")

    p = sub.add_parser("run", help="evaluate a config file (or a previous sidecar)")
    p.add_argument("config")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("figure", help="regenerate preset figure data")
    p.add_argument("name", help=", ".join(figures.names()))
    common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="check a config without running it")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(exc.as_dict())
    except (ValueError, OSError) as exc:
        return _fail({"error": str(exc), "kind": type(exc).__name__})


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
