"""Package entry point for python -m smellscope."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from smellscope import __version__, app
from smellscope.errors import ConfigurationError, SmellscopeError
from smellscope.labels.vulnerabilities import load_labels
from smellscope.metrics import compute_metrics
from smellscope.model.facts_io import read_facts, write_facts
from smellscope.parser.java_parser import parse_corpus
from smellscope.reporting import writers
from smellscope.settings import ThresholdConfig
from smellscope.smells import detect_smells, lift_to_class_level

logger = logging.getLogger("smellscope")


def _out_path(args: argparse.Namespace, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(args.out_dir) / default_name


def _paired_analyses(args: argparse.Namespace) -> list[app.VersionAnalysis]:
    if len(args.facts) != len(args.smells):
        raise ConfigurationError(
            f"--facts and --smells must pair up ({len(args.facts)} vs {len(args.smells)} files)")
    return [app.analysis_from_files(f, s, args.release) for f, s in zip(args.facts, args.smells)]


# ====================================================================
#  Subcommands
# ====================================================================

def cmd_facts(args: argparse.Namespace) -> int:
    model = parse_corpus(args.source, args.system, args.version, jobs=args.jobs)
    path = _out_path(args, f"facts-{args.system}-{args.version}.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    write_facts(model, path)
    logger.info("%d classes, %d skipped files -> %s", len(model.classes), len(model.skipped), path)
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    model = read_facts(args.facts)
    path = _out_path(args, f"metrics-{model.system_name}-{model.version}.csv")
    writers.write_metrics(compute_metrics(model), path, args.format)
    return 0


def cmd_smells(args: argparse.Namespace) -> int:
    model = read_facts(args.facts)
    thresholds = ThresholdConfig.load(args.thresholds)
    native = detect_smells(compute_metrics(model), model, thresholds)
    lifted = lift_to_class_level(native, model, lift_packages=not args.no_package_lift)
    path = _out_path(args, f"smells-{model.system_name}-{model.version}.csv")
    path = writers.write_smells(lifted, path, args.format)
    logger.info("%d smell instances -> %s", len(lifted), path)
    return 0


def cmd_correlate(args: argparse.Namespace) -> int:
    analyses = _paired_analyses(args)
    labels = load_labels(args.labels)
    releases = app.group_releases(analyses, labels)
    out = Path(args.out_dir)
    results = app.write_correlation(
        out, releases, app.collect_unmatched(releases, analyses, labels), args.format)
    writers.write_json(out / "tests.json", results)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    analyses = _paired_analyses(args)
    releases = app.group_releases(analyses, load_labels(args.labels))
    app.write_overview(Path(args.out_dir), analyses, releases, args.format)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    app.run_pipeline(args.config, out_dir=args.out_dir, thresholds_path=args.thresholds,
                     fmt=args.format)
    return 0


# ====================================================================
#  Parser
# ====================================================================

def build_cli() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smellscope",
        description="Detect code and architectural smells in Java corpora and test "
                    "their association with reported vulnerabilities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--out-dir", default=None,
                        help="output directory (run: overrides the config's out_dir)")
    parser.add_argument("--thresholds", default=None, help="threshold config file (key = value)")
    parser.add_argument("--format", choices=writers.FORMATS, default="csv",
                        help="tabular output format")
    parser.add_argument("--quiet", action="store_true", help="only log warnings and errors")

    # Also accepted after the subcommand.
    thresholds = argparse.ArgumentParser(add_help=False)
    thresholds.add_argument("--thresholds", default=argparse.SUPPRESS,
                            help="threshold config file (key = value)")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_facts = sub.add_parser("facts", help="parse a Java source tree into a facts file")
    p_facts.add_argument("--source", required=True, help="source root directory")
    p_facts.add_argument("--system", required=True)
    p_facts.add_argument("--version", dest="version", required=True)
    p_facts.add_argument("--jobs", type=int, default=1, help="parallel parser processes")
    p_facts.add_argument("--out", default=None, help="facts file to write")
    p_facts.set_defaults(func=cmd_facts)

    p_metrics = sub.add_parser("metrics", help="compute method, class and package metrics")
    p_metrics.add_argument("--facts", required=True)
    p_metrics.add_argument("--out", default=None)
    p_metrics.set_defaults(func=cmd_metrics)

    p_smells = sub.add_parser("smells", parents=[thresholds],
                              help="detect smells and lift them to classes")
    p_smells.add_argument("--facts", required=True)
    p_smells.add_argument("--out", default=None)
    p_smells.add_argument("--no-package-lift", action="store_true",
                          help="drop package smells instead of lifting them to classes")
    p_smells.set_defaults(func=cmd_smells)

    for name, func, text in (
        ("correlate", cmd_correlate, "Fisher and chi-square tests (tables 3 and 4)"),
        ("report", cmd_report, "corpus summary and smell distribution"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--labels", required=True, help="vulnerability labels CSV")
        p.add_argument("--facts", nargs="+", required=True, help="facts files, one per version")
        p.add_argument("--smells", nargs="+", required=True,
                       help="smells files in the same order as --facts")
        p.add_argument("--release", default=None,
                       help="release for all versions (default: version up to the first '.')")
        p.set_defaults(func=func)

    p_run = sub.add_parser("run", parents=[thresholds], help="full pipeline from a run config")
    p_run.add_argument("config", help="run config file")
    p_run.set_defaults(func=cmd_run)
    return parser


def configure_logging(quiet: bool = False) -> None:
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_cli().parse_args(argv)
    configure_logging(args.quiet)
    if args.command != "run" and args.out_dir is None:
        args.out_dir = "."
    try:
        return args.func(args)
    except SmellscopeError as exc:
        logger.error("%s", exc)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
