"""Reported-vulnerability labels and per-release class status."""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from smellscope.errors import ConfigurationError, ConsistencyError, SchemaError
from smellscope.model.entities import CodeFactsModel

logger = logging.getLogger(__name__)

LABEL_COLUMNS = ("cve_id", "system", "affected_version", "class_path", "severity")
UNMATCHED_COLUMNS = ("cve_id", "affected_version", "class_path", "reason")


@dataclass(frozen=True, order=True)
class VulnerabilityLabel:
    system: str
    affected_version: str
    class_path: str
    cve_id: str
    severity: str | None = None

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.cve_id, self.affected_version, self.class_path)


@dataclass(frozen=True, order=True)
class UnmatchedLabel:
    cve_id: str
    affected_version: str
    class_path: str
    reason: str


@dataclass(frozen=True)
class LabeledClassSet:
    system: str
    major_release: str
    vulnerable: frozenset[str] = frozenset()
    neutral: frozenset[str] = frozenset()
    vuln_count_per_class: Mapping[str, int] = field(default_factory=dict)
    unmatched: tuple[UnmatchedLabel, ...] = ()

    @property
    def classes(self) -> frozenset[str]:
        return self.vulnerable | self.neutral


def derive_release(version: str) -> str:
    """Major release of a version string: the text before the first dot."""
    return version.split(".", 1)[0]


def normalise_class_path(text: str) -> str:
    """``org/apache/Foo.java`` -> ``org.apache.Foo``."""
    path = text.strip().replace("\\", "/")
    if path.endswith(".java"):
        path = path[: -len(".java")]
    return path.replace("/", ".").strip(".")


def resolve_class(class_path: str, known: Iterable[str]) -> str | None:
    """Exact qualified name, else a unique class whose name ends with ``.<class_path>``."""
    known = set(known)
    if class_path in known:
        return class_path
    suffix = "." + class_path
    matches = [name for name in known if name.endswith(suffix)]
    return matches[0] if len(matches) == 1 else None


# ====================================================================
#  Loading
# ====================================================================

def load_labels(path: str | Path) -> list[VulnerabilityLabel]:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"labels file not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            return []
        header = [h.strip() for h in header]
        reader.fieldnames = header
        for column in LABEL_COLUMNS:
            if column not in header:
                raise SchemaError(path.name, column, "missing column")

        labels: dict[tuple[str, str, str], VulnerabilityLabel] = {}
        for row in reader:
            where = f"{path.name}:{reader.line_num}"
            values = {c: (row.get(c) or "").strip() for c in LABEL_COLUMNS}
            if not any(values.values()):
                continue
            for required in ("cve_id", "system", "affected_version", "class_path"):
                if not values[required]:
                    raise SchemaError(where, required, "empty")
            label = VulnerabilityLabel(
                system=values["system"],
                affected_version=values["affected_version"],
                class_path=normalise_class_path(values["class_path"]),
                cve_id=values["cve_id"],
                severity=values["severity"] or None,
            )
            if label.key in labels:
                logger.warning("%s: duplicate label %s %s %s collapsed", where, *label.key)
                continue
            labels[label.key] = label
    result = sorted(labels.values())
    logger.info("loaded %d vulnerability labels from %s", len(result), path)
    return result


# ====================================================================
#  Status assignment
# ====================================================================

def assign_status(models: Sequence[CodeFactsModel], labels: Iterable[VulnerabilityLabel],
                  release: str | None = None) -> LabeledClassSet:
    """Vulnerable/neutral partition of every class across the versions of one release."""
    if not models:
        raise ConsistencyError("assign_status needs at least one facts model")
    system = models[0].system_name
    if any(m.system_name != system for m in models):
        raise ConsistencyError("assign_status models belong to different systems")
    by_version = {m.version: m for m in models}
    release = release if release is not None else derive_release(models[0].version)

    cves: dict[str, set[str]] = {}
    unmatched: list[UnmatchedLabel] = []
    for label in labels:
        if label.system.lower() != system.lower() or label.affected_version not in by_version:
            continue
        known = by_version[label.affected_version].class_index
        resolved = resolve_class(label.class_path, known)
        if resolved is None:
            unmatched.append(UnmatchedLabel(label.cve_id, label.affected_version,
                                            label.class_path, "class not found in version"))
            continue
        cves.setdefault(resolved, set()).add(label.cve_id)

    everything = frozenset(name for m in models for name in m.class_index)
    vulnerable = frozenset(cves)
    for entry in unmatched:
        logger.warning("unmatched label %s %s %s: %s", entry.cve_id, entry.affected_version,
                       entry.class_path, entry.reason)
    return LabeledClassSet(
        system=system,
        major_release=release,
        vulnerable=vulnerable,
        neutral=everything - vulnerable,
        vuln_count_per_class={name: len(ids) for name, ids in sorted(cves.items())},
        unmatched=tuple(sorted(unmatched)),
    )


def labels_without_version(labels: Iterable[VulnerabilityLabel],
                           analysed: Iterable[tuple[str, str]]) -> list[UnmatchedLabel]:
    """Labels whose (system, version) pair was not analysed."""
    known = {(s.lower(), v) for s, v in analysed}
    return sorted(UnmatchedLabel(label.cve_id, label.affected_version, label.class_path,
                                "version not analysed")
                  for label in labels if (label.system.lower(), label.affected_version) not in known)
