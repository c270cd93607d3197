"""Command line entry point.

Each subcommand runs one pipeline stage against a workspace (prerequisite
stages run automatically and completed stages are skipped); `run` executes
the whole pipeline and prints the report summary.
"""

from __future__ import annotations

import argparse
import sys

from . import covtrace, mutgen, orchestrator
from .csubset import extract_signatures, parse
from .errors import MutafuzzError


def _add_config_arg(sub):
    sub.add_argument(
        "-c", "--config", default="mutafuzz.conf",
        help="workspace configuration file (default: ./mutafuzz.conf)",
    )


def build_parser():
    top = argparse.ArgumentParser(
        prog="mutafuzz",
        description="mutation analysis and mutant-killing fuzzing for a C subset",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse one source file and show its shape")
    p.add_argument("file")

    for name, help_text in (
        ("mutate", "collect coverage and generate mutants"),
        ("build", "compile every mutant at all optimization levels"),
        ("tce", "partition mutants by compiled-binary equality"),
        ("sample", "apply the configured sampling strategy"),
        ("prioritize", "run the existing test suite against each mutant"),
        ("report", "compute the mutation score and write report.json"),
        ("run", "run the full pipeline"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_config_arg(p)

    p = sub.add_parser("fuzz", help="fuzz the remaining live mutants")
    _add_config_arg(p)
    p.add_argument("--mutant", action="append", default=None,
                   help="restrict to this mutant id (repeatable)")
    p.add_argument("--budget-s", type=float, default=None,
                   help="per-mutant campaign budget in seconds")
    return top


def _cmd_parse(args):
    with open(args.file) as fh:
        unit = parse(fh.read(), args.file)
    print("statements: %d" % covtrace.statement_count(unit))
    for sig in extract_signatures(unit):
        params = ", ".join("%s:%s" % (n, t.kind) for n, t in sig.params)
        print("function %s(%s) -> %s" % (sig.name, params, sig.return_type.kind))
    points = mutgen.enumerate_points(unit)
    print("mutation points: %d" % len(points))


def _status_summary(mutants):
    statuses = [m.status for m in mutants]
    return ", ".join(
        "%s=%d" % (s, statuses.count(s))
        for s in mutgen.STATUSES if statuses.count(s)
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "parse":
            _cmd_parse(args)
            return 0
        pipeline = orchestrator.Pipeline(orchestrator.load_config(args.config))
        if args.command == "mutate":
            mutants = pipeline.stage_mutants()
            print("generated %d mutants" % len(mutants))
        elif args.command == "build":
            outcomes = pipeline.stage_build()
            print("built %d programs at %d levels"
                  % (len(outcomes), len(pipeline.config.build.levels)))
        elif args.command == "tce":
            part = pipeline.stage_tce()
            print("equivalent=%d redundant-dropped=%d unique=%d"
                  % (len(part.equivalent), len(part.dropped_redundant()),
                     len(part.unique)))
        elif args.command == "sample":
            mutants = pipeline.stage_sample()
            print(_status_summary(mutants))
        elif args.command == "prioritize":
            mutants = pipeline.stage_execute()
            print(_status_summary(mutants))
        elif args.command == "fuzz":
            if args.budget_s is not None:
                pipeline.config.budget_s = args.budget_s
            mutants = pipeline.stage_fuzz(only=args.mutant)
            print(_status_summary(mutants))
        elif args.command in ("report", "run"):
            report = pipeline.stage_report()
            print(orchestrator.summarize(report))
    except MutafuzzError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
