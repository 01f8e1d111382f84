"""Pipeline orchestration: facts -> metrics -> smells -> labels -> statistics -> reports."""

from __future__ import annotations

import logging
import os
import shutil
import tempfile
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from smellscope import __version__
from smellscope.errors import ConfigurationError, ConsistencyError
from smellscope.labels.vulnerabilities import (
    UnmatchedLabel,
    VulnerabilityLabel,
    assign_status,
    derive_release,
    labels_without_version,
    load_labels,
)
from smellscope.metrics import compute_metrics
from smellscope.metrics.records import MetricTable
from smellscope.model.entities import CodeFactsModel
from smellscope.model.facts_io import read_facts, write_facts
from smellscope.parser.java_parser import parse_corpus
from smellscope.reporting import writers
from smellscope.reporting.summary import distribution_report, summarize_release
from smellscope.settings import RunConfig, ThresholdConfig, VersionSource, write_thresholds
from smellscope.smells import detect_smells, lift_to_class_level
from smellscope.smells.catalog import SmellInstance
from smellscope.stats.correlation import ReleaseData, table3_rows, table4_results

logger = logging.getLogger(__name__)


@dataclass
class VersionAnalysis:
    system: str
    release: str
    model: CodeFactsModel
    metrics: MetricTable
    native: list[SmellInstance] = field(default_factory=list)
    lifted: list[SmellInstance] = field(default_factory=list)

    @property
    def version(self) -> str:
        return self.model.version


def load_model(source: VersionSource, jobs: int = 1) -> CodeFactsModel:
    if source.is_facts_file:
        model = read_facts(source.path)
        if (model.system_name, model.version) != (source.system, source.version):
            raise ConfigurationError(
                f"{source.path}: facts describe {model.system_name} {model.version}, "
                f"config says {source.system} {source.version}")
        return model
    return parse_corpus(source.path, source.system, source.version, jobs=jobs)


def analyse_model(model: CodeFactsModel, release: str, thresholds: ThresholdConfig,
                  lift_packages: bool = True) -> VersionAnalysis:
    metrics = compute_metrics(model)
    native = detect_smells(metrics, model, thresholds)
    lifted = lift_to_class_level(native, model, lift_packages=lift_packages)
    logger.info("%s %s: %d classes, %d smell instances", model.system_name, model.version,
                len(model.classes), len(native))
    return VersionAnalysis(model.system_name, release, model, metrics, native, lifted)


def group_releases(analyses: Sequence[VersionAnalysis],
                   labels: Sequence[VulnerabilityLabel]) -> list[ReleaseData]:
    """Label every (system, release) group, keeping first-seen order."""
    groups: dict[tuple[str, str], list[VersionAnalysis]] = {}
    for analysis in analyses:
        groups.setdefault((analysis.system, analysis.release), []).append(analysis)
    releases = []
    for (_, release), members in groups.items():
        labeled = assign_status([m.model for m in members], labels, release=release)
        releases.append(ReleaseData(labeled, {m.version: tuple(m.lifted) for m in members}))
    return releases


def check_lifted(analysis: VersionAnalysis) -> None:
    known = analysis.model.class_index
    for instance in analysis.lifted:
        missing = sorted(instance.lifted_classes - known.keys())
        if missing:
            raise ConsistencyError(f"{instance.label} on '{instance.anchor}' lifts to unknown "
                                   f"class '{missing[0]}' in {analysis.system} {analysis.version}")


def analysis_from_files(facts_path: str | Path, smells_path: str | Path,
                        release: str | None = None) -> VersionAnalysis:
    """Rebuild a version analysis from a facts file and its lifted smells file."""
    model = read_facts(facts_path)
    analysis = VersionAnalysis(model.system_name, release or derive_release(model.version),
                               model, MetricTable(), lifted=writers.read_smells(smells_path))
    check_lifted(analysis)
    return analysis


def collect_unmatched(releases: Sequence[ReleaseData], analyses: Sequence[VersionAnalysis],
                      labels: Sequence[VulnerabilityLabel]) -> list[UnmatchedLabel]:
    unmatched = [u for r in releases for u in r.labeled.unmatched]
    unmatched += labels_without_version(labels, [(a.system, a.version) for a in analyses])
    return sorted(unmatched)


# ====================================================================
#  Report bundle
# ====================================================================

def write_overview(out: Path, analyses: Sequence[VersionAnalysis],
                   releases: Sequence[ReleaseData], fmt: str = "csv") -> None:
    """Corpus summary and smell distribution."""
    summaries = []
    for data in releases:
        models = [a.model for a in analyses
                  if (a.system, a.release) == (data.system, data.release)]
        summaries.append(summarize_release(models, data.release))
    writers.write_summaries(summaries, out / "corpus_summary.csv", fmt)
    writers.write_distribution(distribution_report(releases), out / "distribution.csv", fmt)


def write_correlation(out: Path, releases: Sequence[ReleaseData],
                      unmatched: Sequence[UnmatchedLabel], fmt: str = "csv") -> dict[str, Any]:
    """Tables 3 and 4 plus unmatched labels; returns the test results for the bundle."""
    table3 = table3_rows(releases)
    table4 = table4_results(releases)
    writers.write_table3(table3, out / "table3.csv", fmt)
    for scope, results in table4.items():
        name = "table4.csv" if scope == "all" else f"table4-{scope}.csv"
        writers.write_table4(results, out / name, fmt)
    writers.write_unmatched(unmatched, out / "unmatched_labels.csv", fmt)

    return {
        "table3": [{"system": r.system, "release": r.release, **writers.result_to_dict(r.result)}
                   for r in table3],
        "table4": {scope: {row: writers.result_to_dict(res) for row, res in results.items()}
                   for scope, results in table4.items()},
        "unmatched_labels": len(unmatched),
    }


def _move_outputs(staging: Path, out_dir: Path) -> list[str]:
    """Publish the staged files; *out_dir* ends up with all of them or none.

    A missing or empty *out_dir* is replaced by the staging directory in one
    rename. Into an existing directory files move one by one, and a failure
    puts back whatever was there before.
    """
    names = sorted(p.name for p in staging.iterdir())
    if out_dir.exists() and not out_dir.is_dir():
        raise ConfigurationError(f"output path is not a directory: {out_dir}")
    try:
        if not out_dir.exists() or not any(out_dir.iterdir()):
            if out_dir.exists():
                out_dir.rmdir()
            os.replace(staging, out_dir)
            return names
    except OSError as exc:
        raise ConfigurationError(f"cannot write outputs to {out_dir}: {exc}") from exc

    backup = Path(tempfile.mkdtemp(prefix=".smellscope-prev-", dir=out_dir.parent))
    moved: list[str] = []
    try:
        for name in names:
            if (out_dir / name).exists():
                os.replace(out_dir / name, backup / name)
            os.replace(staging / name, out_dir / name)
            moved.append(name)
    except OSError as exc:
        for name in moved:
            (out_dir / name).unlink(missing_ok=True)
        for item in backup.iterdir():
            os.replace(item, out_dir / item.name)
        raise ConfigurationError(f"cannot write outputs to {out_dir}: {exc}") from exc
    finally:
        shutil.rmtree(backup, ignore_errors=True)
    return moved


def run_pipeline(config_path: str | Path, out_dir: str | Path | None = None,
                 thresholds_path: str | Path | None = None, fmt: str = "csv") -> Path:
    """Run every stage for a run config; outputs appear only if all stages succeed."""
    config = RunConfig.load(config_path)
    target = Path(out_dir) if out_dir is not None else config.out_dir
    thresholds = ThresholdConfig.load(thresholds_path or config.thresholds)
    labels = load_labels(config.labels)
    if not config.lift_packages:
        logger.warning("package smells are not lifted to classes for this run")

    analyses = []
    for source in config.versions:
        model = load_model(source, jobs=config.jobs)
        analysis = analyse_model(model, source.release or derive_release(source.version),
                                 thresholds, config.lift_packages)
        check_lifted(analysis)
        analyses.append(analysis)

    releases = group_releases(analyses, labels)
    unmatched = collect_unmatched(releases, analyses, labels)

    target.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".smellscope-", dir=target.parent))
    try:
        for a in analyses:
            stem = f"{a.system}-{a.version}"
            write_facts(a.model, staging / f"facts-{stem}.json")
            writers.write_metrics(a.metrics, staging / f"metrics-{stem}.csv", fmt)
            writers.write_smells(a.lifted, staging / f"smells-{stem}.csv", fmt)
        write_overview(staging, analyses, releases, fmt)
        bundle = write_correlation(staging, releases, unmatched, fmt)
        write_thresholds(thresholds, staging / "thresholds.conf")
        bundle.update({
            "tool": "smellscope",
            "tool_version": __version__,
            "lift_packages": config.lift_packages,
            "thresholds": thresholds.as_dict(),
            "versions": [{"system": a.system, "release": a.release, "version": a.version,
                          "classes": len(a.model.classes), "skipped_files": len(a.model.skipped)}
                         for a in analyses],
            "files": sorted(p.name for p in staging.iterdir()) + ["bundle.json"],
        })
        writers.write_json(staging / "bundle.json", bundle)
        moved = _move_outputs(staging, target)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    logger.info("wrote %d files to %s", len(moved), target)
    return target
