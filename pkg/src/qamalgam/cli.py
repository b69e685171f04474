"""Command-line front end: ``qamalgam SUBCOMMAND SPEC [flags]``.

Exit codes: 0 when every verdict passes, 1 when one fails, 2 on input
errors (unreadable file, parse or validation errors).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .jobs import JobFailure, Settings, run_job, select_jobs
from .ringdef import JOB_KINDS, SpecError, parse_spec, resolve, serialize_report

SUBCOMMANDS = list(JOB_KINDS) + ["all"]
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qamalgam", description="Run fusion-ring and Bass-Serre tree checks from a spec file.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("spec", help="problem definition file")
    p.add_argument("--depth", type=_nonneg, help="tree depth (default 3)")
    p.add_argument("--bound", type=_positive, help="degree bound (default 6)")
    p.add_argument("--margin", type=_positive, help="commutator margin (default 1)")
    p.add_argument("--t-samples", type=_positive, dest="samples", help="homotopy samples in [0, pi/2] (default 9)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled axiom checks")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH instead of text to stdout")
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT

    path = Path(args.spec)
    try:
        data = path.read_bytes()
    except OSError as e:
        print(f"qamalgam: cannot read {args.spec}: {e.strerror or e}", file=stderr)
        return EXIT_INPUT
    try:
        ws = resolve(parse_spec(data))
    except SpecError as e:
        for d in e.errors:
            print(f"{args.spec}:{d}", file=stderr)
        return EXIT_INPUT

    settings = Settings({"depth": args.depth, "bound": args.bound, "margin": args.margin, "samples": args.samples}, args.seed)
    jobs = select_jobs(ws, args.command)
    if not jobs:
        print(f"qamalgam: {args.spec} declares nothing to run for {args.command!r}", file=stderr)
        return EXIT_INPUT
    results = []
    for job in jobs:
        try:
            results.append(run_job(ws, job, settings))
        except JobFailure as e:
            print(f"{args.spec}:{job.line}: {job.kind}: {e}", file=stderr)
            return EXIT_INPUT
    ok = all(r.ok for r in results)
    report = {
        "command": args.command,
        "spec": path.name,
        "seed": args.seed,
        "ok": ok,
        "results": [r.to_dict() for r in results],
    }
    if args.json:
        try:
            Path(args.json).write_text(serialize_report(report, "json"), encoding="utf-8")
        except OSError as e:
            print(f"qamalgam: cannot write {args.json}: {e.strerror or e}", file=stderr)
            return EXIT_INPUT
    else:
        stdout.write(serialize_report(report, "text"))
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())
