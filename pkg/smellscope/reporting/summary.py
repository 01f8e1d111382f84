"""Corpus statistics and the smell distribution across vulnerable and neutral classes."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, fields

from smellscope.errors import ConsistencyError
from smellscope.labels.vulnerabilities import derive_release
from smellscope.model.entities import CodeFactsModel
from smellscope.stats.correlation import COMBINED, TOTAL, ReleaseData


@dataclass(frozen=True)
class CorpusSummary:
    system: str
    release: str
    versions: tuple[str, ...]
    class_count: int
    method_count: int
    loc: int


def summarize_corpus(model: CodeFactsModel) -> CorpusSummary:
    return CorpusSummary(
        system=model.system_name,
        release=derive_release(model.version),
        versions=(model.version,),
        class_count=len(model.classes),
        method_count=model.method_count,
        loc=sum(f.loc for f in model.files),
    )


def summarize_release(models: Sequence[CodeFactsModel], release: str) -> CorpusSummary:
    """Counts come from the last version listed for the release."""
    if not models:
        raise ConsistencyError(f"release {release} has no analysed versions")
    last = summarize_corpus(models[-1])
    return CorpusSummary(last.system, release, tuple(m.version for m in models),
                         last.class_count, last.method_count, last.loc)


# ====================================================================
#  Distribution
# ====================================================================

@dataclass(frozen=True)
class DistributionRow:
    system: str
    release: str
    vulnerable_smelly: int = 0
    vulnerable_clean: int = 0
    vulnerabilities_in_smelly: int = 0
    smells_in_vulnerable: int = 0
    raw_smells_in_vulnerable: int = 0
    neutral_smelly: int = 0
    neutral_clean: int = 0
    vulnerabilities_in_neutral: int = 0
    smells_in_neutral: int = 0
    raw_smells_in_neutral: int = 0

    @property
    def vulnerable(self) -> int:
        return self.vulnerable_smelly + self.vulnerable_clean

    @property
    def neutral(self) -> int:
        return self.neutral_smelly + self.neutral_clean

    @property
    def mean_smells_vulnerable(self) -> float:
        return self.smells_in_vulnerable / self.vulnerable if self.vulnerable else 0.0

    @property
    def mean_smells_neutral(self) -> float:
        return self.smells_in_neutral / self.neutral if self.neutral else 0.0

    def __add__(self, other: DistributionRow) -> DistributionRow:
        counts = {f.name: getattr(self, f.name) + getattr(other, f.name)
                  for f in fields(self) if f.name not in ("system", "release")}
        return DistributionRow(self.system, self.release, **counts)


@dataclass(frozen=True)
class DistributionReport:
    rows: tuple[DistributionRow, ...]

    def row(self, system: str, release: str) -> DistributionRow:
        for r in self.rows:
            if (r.system, r.release) == (system, release):
                return r
        raise KeyError((system, release))


def distribution_row(data: ReleaseData) -> DistributionRow:
    labeled = data.labeled
    counts, raw = data.smell_counts, data.raw_smell_counts
    smelly = {name for name, labels in data.presence.items() if labels}
    vulnerable_smelly = sorted(labeled.vulnerable & smelly)
    neutral_smelly = sorted(labeled.neutral & smelly)
    return DistributionRow(
        system=data.system,
        release=data.release,
        vulnerable_smelly=len(vulnerable_smelly),
        vulnerable_clean=len(labeled.vulnerable) - len(vulnerable_smelly),
        vulnerabilities_in_smelly=sum(labeled.vuln_count_per_class.get(n, 0)
                                      for n in vulnerable_smelly),
        smells_in_vulnerable=sum(counts.get(n, 0) for n in vulnerable_smelly),
        raw_smells_in_vulnerable=sum(raw.get(n, 0) for n in vulnerable_smelly),
        neutral_smelly=len(neutral_smelly),
        neutral_clean=len(labeled.neutral) - len(neutral_smelly),
        smells_in_neutral=sum(counts.get(n, 0) for n in neutral_smelly),
        raw_smells_in_neutral=sum(raw.get(n, 0) for n in neutral_smelly),
    )


def distribution_report(releases: Sequence[ReleaseData]) -> DistributionReport:
    """Per-release rows, a Total per system and a Combined row; totals are row sums."""
    rows: list[DistributionRow] = []
    combined = DistributionRow(COMBINED, "")
    systems: list[str] = []
    for data in releases:
        if data.system not in systems:
            systems.append(data.system)
    for system in systems:
        total = DistributionRow(system, TOTAL)
        for data in releases:
            if data.system == system:
                row = distribution_row(data)
                rows.append(row)
                total = total + row
        rows.append(total)
        combined = combined + total
    if releases:
        rows.append(combined)
    return DistributionReport(tuple(rows))
