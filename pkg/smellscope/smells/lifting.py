"""Project method, file and package detections onto classes."""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import replace

from smellscope.errors import ConsistencyError
from smellscope.model.entities import CodeFactsModel
from smellscope.smells.catalog import Granularity, SmellInstance, sort_instances

logger = logging.getLogger(__name__)


def _classes_for(instance: SmellInstance, model: CodeFactsModel) -> frozenset[str]:
    anchor = instance.anchor
    if instance.granularity is Granularity.CLASS:
        found = {anchor} if anchor in model.class_index else set()
    elif instance.granularity is Granularity.METHOD:
        hit = model.method_index.get(anchor)
        found = {hit[0].qualified_name} if hit else set()
    elif instance.granularity is Granularity.FILE:
        entry = model.file_index.get(anchor)
        found = set(entry.classes) if entry else set()
    else:
        entry = model.package_index.get(anchor)
        found = set(entry.classes) if entry else set()
    if not found:
        raise ConsistencyError(
            f"{instance.label} anchored at {instance.granularity} '{anchor}' "
            f"has no class in {model.system_name} {model.version}")
    return frozenset(found)


def lift_to_class_level(instances: Iterable[SmellInstance], model: CodeFactsModel,
                        lift_packages: bool = True) -> list[SmellInstance]:
    """One lifted instance per native instance, with ``lifted_classes`` populated.

    With *lift_packages* false, package-anchored instances are left out.
    """
    lifted = []
    dropped = 0
    for instance in instances:
        if instance.granularity is Granularity.PACKAGE and not lift_packages:
            dropped += 1
            continue
        lifted.append(replace(instance, lifted_classes=_classes_for(instance, model)))
    if dropped:
        logger.info("package smell lifting disabled: %d package instances not lifted", dropped)
    return sort_instances(lifted)


def class_presence(lifted: Iterable[SmellInstance]) -> dict[str, set[str]]:
    """Report-row labels present on each class."""
    presence: dict[str, set[str]] = {}
    for instance in lifted:
        for cls in instance.lifted_classes:
            presence.setdefault(cls, set()).add(instance.label)
    return presence


def class_smell_counts(lifted: Iterable[SmellInstance]) -> Counter[str]:
    """Number of lifted instances touching each class."""
    counts: Counter[str] = Counter()
    for instance in lifted:
        counts.update(instance.lifted_classes)
    return counts
