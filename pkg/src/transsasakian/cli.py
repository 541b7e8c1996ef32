"""Command-line entry point.

    transsasakian <command> [args] --manifest PATH [--out PATH] [--format human|machine] [--seed N]

Exit status: 0 when no check FAILs, 1 on a verification failure, 2 when the
manifest or the command line cannot be used.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .expr import DomainError
from .manifest import ManifestError, load_manifest
from .pipeline import COMMANDS, Session, UsageError

ENV_MANIFEST = "TRANSSASAKIAN_MANIFEST"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="transsasakian",
        description="Exact verification of trans-Sasakian structures, invariant submanifolds and Tachibana tensors.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("args", nargs="*", help="submanifold name, or theorem index and submanifold name")
    p.add_argument("--manifest", help=f"manifest path (default: ${ENV_MANIFEST})")
    p.add_argument("--out", help="also write the machine-format report here")
    p.add_argument("--format", choices=("human", "machine"), default=None)
    p.add_argument("--seed", type=int, default=None, help="seed for the random-point cross-checks")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    path = ns.manifest or os.environ.get(ENV_MANIFEST)
    if not path:
        print(f"error: no manifest given (use --manifest or set {ENV_MANIFEST})", file=sys.stderr)
        return EXIT_USAGE
    try:
        manifest = load_manifest(path)
        session = Session(manifest, ns.seed)
        report = session.run(ns.command, ns.args)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = ns.format or manifest.format
    sys.stdout.write(report.render(fmt))
    if ns.out:
        Path(ns.out).write_text(report.to_machine(), encoding="utf-8")
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
