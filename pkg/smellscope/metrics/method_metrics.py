"""Per-method metrics: LOC, CYCLO, NOPAR, MAXNESTING, NOAV, ATFD_m, LAA, FDP, CM, CC."""

from __future__ import annotations

import logging

from smellscope.metrics.records import METHOD, MetricRecord
from smellscope.model.entities import BodyFacts, ClassEntity, CodeFactsModel, MethodEntity

logger = logging.getLogger(__name__)

DECISION_POINTS = frozenset(("if", "for", "while", "do", "case", "catch", "?:", "&&", "||"))


def cyclomatic(body: BodyFacts) -> int:
    return 1 + sum(1 for point in body.decision_points if point in DECISION_POINTS)


def foreign_accesses(model: CodeFactsModel, cls: ClassEntity, method: MethodEntity) -> set:
    """Distinct foreign attributes owned by other in-model classes."""
    return {a for a in method.body.foreign_accesses
            if a.owner != cls.qualified_name and a.owner in model.class_index}


def locality(local: int, foreign: int) -> float:
    total = local + foreign
    return local / total if total else 1.0


def callers_of(model: CodeFactsModel) -> dict[str, set[str]]:
    """Resolved caller methods per target method, self-calls removed."""
    callers: dict[str, set[str]] = {}
    for rel in model.relations:
        if rel.kind == "calls" and not rel.external and rel.source != rel.target:
            callers.setdefault(rel.target, set()).add(rel.source)
    return callers


def compute_method_metrics(model: CodeFactsModel) -> list[MetricRecord]:
    callers = callers_of(model)
    records = []
    for cls in model.classes:
        for method in cls.methods:
            body = method.body
            foreign = foreign_accesses(model, cls, method)
            local = len(set(body.local_accesses)) + len(set(body.inherited_accesses))
            incoming = callers.get(method.qualified_name, set())
            variables = set(body.accessed_variables) | {p.name for p in method.parameters}
            records.append(MetricRecord(method.qualified_name, METHOD, {
                "LOC": method.loc,
                "CYCLO": cyclomatic(body),
                "NOPAR": method.arity,
                "MAXNESTING": body.max_nesting,
                "NOAV": len(variables),
                "ATFD_m": len(foreign),
                "LAA": locality(local, len(foreign)),
                "FDP": len({a.owner for a in foreign}),
                "CM": len(incoming),
                "CC": len({model.owner_of(c).qualified_name for c in incoming}),
            }))
    logger.debug("computed metrics for %d methods", len(records))
    return records
