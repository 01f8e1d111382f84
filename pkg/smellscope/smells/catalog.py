"""Smell identifiers, granularities and the detected-instance record."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping


class SmellId(str, Enum):
    GOD_CLASS = "God Class"
    LAZY_CLASS = "Lazy Class"
    COMPLEX_CLASS = "Complex Class"
    LARGE_CLASS = "Large Class"
    DATA_CLASS = "Data Class"
    REFUSED_BEQUEST = "Refused Bequest"
    BRAIN_CLASS = "Brain Class"
    HUB_LIKE_DEPENDENCY = "Hub-Like Dependency"
    FEATURE_ENVY = "Feature Envy"
    LONG_METHOD = "Long Method"
    LONG_PARAMETER_LIST = "Long Parameter List"
    BRAIN_METHOD = "Brain Method"
    SHOTGUN_SURGERY = "Shotgun Surgery"
    CYCLIC_DEPENDENCY = "Cyclic Dependency"
    UNSTABLE_DEPENDENCY = "Unstable Dependency"
    UNHEALTHY_INHERITANCE_HIERARCHY = "Unhealthy Inheritance Hierarchy"

    def __str__(self) -> str:
        return self.value


class Granularity(str, Enum):
    CLASS = "class"
    METHOD = "method"
    PACKAGE = "package"
    FILE = "file"

    def __str__(self) -> str:
        return self.value


# Report rows: cyclic dependencies are split by granularity.
CLASS_CYCLIC = "Class Cyclic Dependency"
PACKAGE_CYCLIC = "Package Cyclic Dependency"

REPORT_ROWS: tuple[str, ...] = (
    SmellId.GOD_CLASS.value,
    SmellId.LAZY_CLASS.value,
    SmellId.COMPLEX_CLASS.value,
    SmellId.LARGE_CLASS.value,
    SmellId.DATA_CLASS.value,
    SmellId.REFUSED_BEQUEST.value,
    SmellId.BRAIN_CLASS.value,
    SmellId.HUB_LIKE_DEPENDENCY.value,
    SmellId.FEATURE_ENVY.value,
    SmellId.LONG_METHOD.value,
    SmellId.LONG_PARAMETER_LIST.value,
    SmellId.BRAIN_METHOD.value,
    SmellId.SHOTGUN_SURGERY.value,
    CLASS_CYCLIC,
    PACKAGE_CYCLIC,
    SmellId.UNSTABLE_DEPENDENCY.value,
    SmellId.UNHEALTHY_INHERITANCE_HIERARCHY.value,
)


def report_label(smell_id: SmellId, granularity: Granularity) -> str:
    if smell_id is SmellId.CYCLIC_DEPENDENCY:
        return PACKAGE_CYCLIC if granularity is Granularity.PACKAGE else CLASS_CYCLIC
    return smell_id.value


@dataclass(frozen=True)
class SmellInstance:
    smell_id: SmellId
    granularity: Granularity
    anchor: str
    lifted_classes: frozenset[str] = frozenset()
    evidence: Mapping[str, float] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return report_label(self.smell_id, self.granularity)

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.smell_id.value, self.anchor, self.granularity.value)


def sort_instances(instances) -> list[SmellInstance]:
    return sorted(instances, key=lambda s: s.sort_key)
