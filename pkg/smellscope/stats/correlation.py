"""Join class status with smell presence and run the correlation tests."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from smellscope.errors import ConsistencyError
from smellscope.labels.vulnerabilities import LabeledClassSet
from smellscope.smells.catalog import REPORT_ROWS, SmellInstance
from smellscope.smells.lifting import class_presence, class_smell_counts
from smellscope.stats.contingency import ContingencyTable, TestResult, chi_square_test, fisher_test

logger = logging.getLogger(__name__)

TOTAL = "Total"
COMBINED = "Combined"


@dataclass(frozen=True)
class ReleaseData:
    """Status and lifted smells of every analysed version of one release."""

    labeled: LabeledClassSet
    per_version: Mapping[str, tuple[SmellInstance, ...]] = field(default_factory=dict)

    @property
    def system(self) -> str:
        return self.labeled.system

    @property
    def release(self) -> str:
        return self.labeled.major_release

    @property
    def instances(self) -> list[SmellInstance]:
        return [i for version in self.per_version.values() for i in version]

    @cached_property
    def presence(self) -> dict[str, set[str]]:
        """Report-row labels on each class, united over the release's versions."""
        found = class_presence(self.instances)
        return {name: found.get(name, set()) for name in sorted(self.labeled.classes)}

    @cached_property
    def smell_counts(self) -> dict[str, int]:
        """Instances per class: the largest count any single version reports."""
        counts: dict[str, int] = {}
        for instances in self.per_version.values():
            for name, n in class_smell_counts(instances).items():
                counts[name] = max(counts.get(name, 0), n)
        return counts

    @cached_property
    def raw_smell_counts(self) -> dict[str, int]:
        """Instances per class summed over versions."""
        counts: dict[str, int] = {}
        for instances in self.per_version.values():
            for name, n in class_smell_counts(instances).items():
                counts[name] = counts.get(name, 0) + n
        return counts


def build_rq1_table(labeled: LabeledClassSet, presence: Mapping[str, object]) -> ContingencyTable:
    """Any-smell x vulnerable table; *presence* maps class -> truthy when smelly."""
    cells = [0, 0, 0, 0]
    for name in sorted(labeled.classes):
        if name not in presence:
            raise ConsistencyError(f"class '{name}' missing from the smell presence map")
        smelly = bool(presence[name])
        vulnerable = name in labeled.vulnerable
        cells[(0 if vulnerable else 2) + (0 if smelly else 1)] += 1
    return ContingencyTable(*cells)


def smell_tables(labeled: LabeledClassSet,
                 instances: Iterable[SmellInstance]) -> dict[str, ContingencyTable]:
    """One has-this-smell x vulnerable table per report row."""
    presence = class_presence(instances)
    tables = {}
    for row in REPORT_ROWS:
        tables[row] = build_rq1_table(
            labeled, {name: row in presence.get(name, ()) for name in labeled.classes})
    return tables


def tests_for_tables(tables: Mapping[str, ContingencyTable]) -> dict[str, TestResult]:
    results = {}
    for row in REPORT_ROWS:
        result = chi_square_test(tables[row])
        if not result.computable:
            logger.warning("chi-square not computable for %s (smell absent or degenerate)", row)
        results[row] = result
    return results


def per_smell_tests(labeled: LabeledClassSet,
                    instances: Iterable[SmellInstance]) -> dict[str, TestResult]:
    return tests_for_tables(smell_tables(labeled, instances))


def combine_tables(groups: Iterable[Mapping[str, ContingencyTable]]) -> dict[str, ContingencyTable]:
    combined = {row: ContingencyTable(0, 0, 0, 0) for row in REPORT_ROWS}
    for tables in groups:
        for row in REPORT_ROWS:
            combined[row] = combined[row] + tables[row]
    return combined


# ====================================================================
#  Report tables
# ====================================================================

@dataclass(frozen=True)
class Table3Row:
    system: str
    release: str
    result: TestResult

    @property
    def table(self) -> ContingencyTable:
        return self.result.table


def _systems(releases: Sequence[ReleaseData]) -> list[str]:
    seen: list[str] = []
    for r in releases:
        if r.system not in seen:
            seen.append(r.system)
    return seen


def table3_rows(releases: Sequence[ReleaseData]) -> list[Table3Row]:
    """Per-release rows, a Total row per system and one Combined row."""
    rows = []
    combined = ContingencyTable(0, 0, 0, 0)
    for system in _systems(releases):
        total = ContingencyTable(0, 0, 0, 0)
        members = [r for r in releases if r.system == system]
        for release in members:
            table = build_rq1_table(release.labeled, release.presence)
            rows.append(Table3Row(system, release.release, fisher_test(table)))
            total = total + table
        rows.append(Table3Row(system, TOTAL, fisher_test(total)))
        combined = combined + total
    if releases:
        rows.append(Table3Row(COMBINED, "", fisher_test(combined)))
    return rows


def table4_results(releases: Sequence[ReleaseData]) -> dict[str, dict[str, TestResult]]:
    """Per-smell chi-square results per system plus ``all``."""
    per_system: dict[str, dict[str, ContingencyTable]] = {}
    for system in _systems(releases):
        per_system[system] = combine_tables(
            smell_tables(r.labeled, r.instances) for r in releases if r.system == system)
    results = {system: tests_for_tables(tables) for system, tables in per_system.items()}
    results["all"] = tests_for_tables(combine_tables(per_system.values()))
    return results
