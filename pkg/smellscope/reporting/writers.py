"""CSV / JSON report files and number formatting.

Every writer emits rows in a fixed order with '\\n' line endings so that two
runs over the same inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from pathlib import Path
from typing import Any

from smellscope.errors import ConfigurationError, SchemaError
from smellscope.labels.vulnerabilities import UNMATCHED_COLUMNS, UnmatchedLabel
from smellscope.metrics.records import MetricTable
from smellscope.reporting.summary import CorpusSummary, DistributionReport
from smellscope.smells.catalog import REPORT_ROWS, Granularity, SmellId, SmellInstance, sort_instances
from smellscope.stats.contingency import TestResult
from smellscope.stats.correlation import Table3Row

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
METRIC_COLUMNS = ("entity", "granularity", "metric", "value")
SMELL_COLUMNS = ("smell_id", "granularity", "anchor", "lifted_class", "evidence_json")
TABLE3_COLUMNS = ("system", "release", "a", "b", "c", "d", "p", "OR")
TABLE4_COLUMNS = ("smell_id", "chi2", "chi2_yates", "computable", "significant_at_05", "cell")
SUMMARY_COLUMNS = ("system", "release", "versions", "classes", "methods", "loc")
DISTRIBUTION_COLUMNS = (
    "system", "release",
    "vulnerable_smelly", "vulnerable_clean", "vulnerabilities_in_smelly",
    "smells_in_vulnerable", "raw_smells_in_vulnerable",
    "neutral_smelly", "neutral_clean", "vulnerabilities_in_neutral",
    "smells_in_neutral", "raw_smells_in_neutral",
    "mean_smells_vulnerable", "mean_smells_neutral",
)
NOT_COMPUTABLE = "-"


# ====================================================================
#  Formatting
# ====================================================================

def format_number(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def format_p(p: float | None) -> str:
    """Two significant figures, four decimals below 0.01."""
    if p is None:
        return NOT_COMPUTABLE
    if p < 0.01:
        return f"{p:.4f}"
    return f"{p:.2g}"


def format_ratio(value: float | None) -> str:
    return NOT_COMPUTABLE if value is None else f"{value:.2f}"


def format_chi_cell(result: TestResult) -> str:
    """``X.XX (Y.YY)``: uncorrected then Yates statistic."""
    if not result.computable:
        return NOT_COMPUTABLE
    return f"{result.chi_square:.2f} ({result.chi_square_yates:.2f})"


# ====================================================================
#  Generic tabular output
# ====================================================================

def write_rows(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence[Any]],
               fmt: str = "csv") -> Path:
    """Write *rows* as CSV, or as a JSON array of objects when *fmt* is ``json``."""
    if fmt not in FORMATS:
        raise ConfigurationError(f"unknown output format '{fmt}'")
    path = Path(path)
    if fmt == "json":
        path = path.with_suffix(".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [[c if isinstance(c, str) else format_number(c) for c in row] for row in rows]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "json":
            json.dump([dict(zip(columns, row)) for row in rows], fh, indent=2, ensure_ascii=False)
            fh.write("\n")
        else:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
    logger.debug("wrote %d rows to %s", len(rows), path)
    return path


def write_json(path: str | Path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    return path


# ====================================================================
#  Metrics and smells
# ====================================================================

def write_metrics(table: MetricTable, path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, METRIC_COLUMNS, table.rows(), fmt)


def smell_rows(instances: Iterable[SmellInstance]) -> list[list[str]]:
    rows = []
    for instance in sort_instances(instances):
        evidence = json.dumps({k: instance.evidence[k] for k in sorted(instance.evidence)},
                              sort_keys=True)
        for cls in sorted(instance.lifted_classes) or [""]:
            rows.append([instance.smell_id.value, instance.granularity.value,
                         instance.anchor, cls, evidence])
    return rows


def write_smells(instances: Iterable[SmellInstance], path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, SMELL_COLUMNS, smell_rows(instances), fmt)


def _smell_records(path: Path) -> Iterator[tuple[str, dict[str, str]]]:
    """(location, row) pairs from a smells file in either output format."""
    if path.suffix == ".json":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                records = json.load(fh)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SchemaError(path.name, "*", f"not valid JSON ({exc})") from exc
        if not isinstance(records, list):
            raise SchemaError(path.name, "*", "expected a list of smell rows")
        for number, record in enumerate(records, start=1):
            where = f"{path.name}[{number}]"
            if not isinstance(record, dict):
                raise SchemaError(where, "*", "expected an object")
            missing = [c for c in SMELL_COLUMNS if c not in record]
            if missing:
                raise SchemaError(where, missing[0], "missing field")
            yield where, {c: str(record[c] if record[c] is not None else "") for c in SMELL_COLUMNS}
        return

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in SMELL_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(path.name, missing[0], "missing column")
        for row in reader:
            yield f"{path.name}:{reader.line_num}", row


def read_smells(path: str | Path) -> list[SmellInstance]:
    """Read a smells file (CSV, or JSON by suffix) back into instances, regrouping lifted classes."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"smells file not found: {path}")
    grouped: dict[tuple[str, str, str], tuple[set[str], dict[str, float]]] = {}
    for where, row in _smell_records(path):
        try:
            SmellId(row["smell_id"])
            Granularity(row["granularity"])
        except ValueError as exc:
            raise SchemaError(where, "smell_id/granularity", str(exc)) from exc
        try:
            evidence = json.loads(row["evidence_json"] or "{}")
        except json.JSONDecodeError as exc:
            raise SchemaError(where, "evidence_json", "not valid JSON") from exc
        key = (row["smell_id"], row["granularity"], row["anchor"])
        classes, _ = grouped.setdefault(key, (set(), evidence))
        if row["lifted_class"]:
            classes.add(row["lifted_class"])
    return sort_instances(
        SmellInstance(SmellId(s), Granularity(g), anchor, frozenset(classes), evidence)
        for (s, g, anchor), (classes, evidence) in grouped.items())


# ====================================================================
#  Report tables
# ====================================================================

def write_table3(rows: Sequence[Table3Row], path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, TABLE3_COLUMNS, (
        [r.system, r.release, r.table.a, r.table.b, r.table.c, r.table.d,
         format_p(r.result.p_value), format_ratio(r.result.odds_ratio)]
        for r in rows), fmt)


def write_table4(results: Mapping[str, TestResult], path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, TABLE4_COLUMNS, (
        [row, format_ratio(results[row].chi_square), format_ratio(results[row].chi_square_yates),
         results[row].computable, results[row].reject_at_05, format_chi_cell(results[row])]
        for row in REPORT_ROWS), fmt)


def write_summaries(summaries: Sequence[CorpusSummary], path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, SUMMARY_COLUMNS, (
        [s.system, s.release, " ".join(s.versions), s.class_count, s.method_count, s.loc]
        for s in summaries), fmt)


def write_distribution(report: DistributionReport, path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, DISTRIBUTION_COLUMNS, (
        [r.system, r.release, r.vulnerable_smelly, r.vulnerable_clean,
         r.vulnerabilities_in_smelly, r.smells_in_vulnerable, r.raw_smells_in_vulnerable,
         r.neutral_smelly, r.neutral_clean, r.vulnerabilities_in_neutral,
         r.smells_in_neutral, r.raw_smells_in_neutral,
         f"{r.mean_smells_vulnerable:.1f}", f"{r.mean_smells_neutral:.1f}"]
        for r in report.rows), fmt)


def write_unmatched(unmatched: Iterable[UnmatchedLabel], path: str | Path, fmt: str = "csv") -> Path:
    return write_rows(path, UNMATCHED_COLUMNS, (
        [u.cve_id, u.affected_version, u.class_path, u.reason] for u in sorted(unmatched)), fmt)


def result_to_dict(result: TestResult) -> dict[str, Any]:
    t = result.table
    return {
        "method": result.method,
        "table": {"a": t.a, "b": t.b, "c": t.c, "d": t.d},
        "p_value": result.p_value,
        "odds_ratio": result.odds_ratio,
        "chi_square": result.chi_square,
        "chi_square_yates": result.chi_square_yates,
        "df": result.df,
        "reject_at_05": result.reject_at_05,
        "computable": result.computable,
        "degenerate": result.degenerate,
    }
