"""Per-class metrics."""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable
from itertools import combinations

import networkx as nx

from smellscope.metrics.graphs import class_graph
from smellscope.metrics.method_metrics import foreign_accesses
from smellscope.metrics.records import CLASS, METHOD, MetricRecord, MetricTable
from smellscope.model.entities import ClassEntity, CodeFactsModel, MethodEntity

logger = logging.getLogger(__name__)

_GETTER = re.compile(r"^(get|is)[A-Z]")
_SETTER = re.compile(r"^set[A-Z]")
_INHERITABLE = ("public", "protected")


def is_accessor(method: MethodEntity) -> bool:
    """getX()/isX() with no parameters or setX(v) with one."""
    if method.is_constructor:
        return False
    if _GETTER.match(method.name):
        return method.arity == 0
    return bool(_SETTER.match(method.name)) and method.arity == 1


def tight_class_cohesion(accesses: Iterable[set[str]]) -> float:
    """Share of attribute-touching method pairs that touch a common attribute."""
    touching = [a for a in accesses if a]
    if len(touching) < 2:
        return 1.0
    pairs = list(combinations(touching, 2))
    return sum(1 for x, y in pairs if x & y) / len(pairs)


def _inheritance(model: CodeFactsModel, cls: ClassEntity) -> dict[str, float]:
    parent = model.in_model_superclass(cls)
    if parent is None:
        return {"BUR": 1.0, "BOvR": 1.0, "NProtM": 0}

    parent_methods = [m for m in parent.methods if not m.is_constructor]
    inheritable_fields = {f.name for f in parent.fields if f.visibility in _INHERITABLE}
    inheritable_methods = {m.qualified_name for m in parent_methods if m.visibility in _INHERITABLE}
    protected = (sum(1 for f in parent.fields if f.visibility == "protected")
                 + sum(1 for m in parent_methods if m.visibility == "protected"))

    used: set[str] = set()
    for method in cls.methods:
        used.update(a.name for a in method.body.inherited_accesses
                    if a.owner == parent.qualified_name and a.name in inheritable_fields)
        used.update(c for c in method.body.calls if c in inheritable_methods)
    inheritable = len(inheritable_fields) + len(inheritable_methods)

    overridable = {(m.name, m.arity) for m in parent_methods if m.visibility != "private"}
    own = [m for m in cls.methods if not m.is_constructor]
    overriding = sum(1 for m in own if (m.name, m.arity) in overridable)
    return {
        "BUR": len(used) / inheritable if inheritable else 1.0,
        "BOvR": overriding / len(cls.methods) if cls.methods else 1.0,
        "NProtM": protected,
    }


def compute_class_metrics(model: CodeFactsModel,
                          method_metrics: MetricTable | Iterable[MetricRecord],
                          graph: nx.DiGraph | None = None) -> list[MetricRecord]:
    table = method_metrics if isinstance(method_metrics, MetricTable) else MetricTable(method_metrics)
    graph = class_graph(model) if graph is None else graph
    records = []
    for cls in model.classes:
        own_fields = {f.name for f in cls.fields}
        public_methods = [m for m in cls.methods if m.visibility == "public" and not m.is_constructor]
        public_fields = [f for f in cls.fields if f.visibility == "public"]
        functional = [m for m in public_methods if not is_accessor(m)]
        public_members = len(public_methods) + len(public_fields)
        foreign_owners = {a.owner for m in cls.methods for a in foreign_accesses(model, cls, m)}

        values = {
            "LOC": cls.loc,
            "NOM": len(cls.methods),
            "NOA": len(cls.fields),
            "WMC": sum(table.require(METHOD, m.qualified_name)["CYCLO"] for m in cls.methods),
            "ATFD": len(foreign_owners),
            "TCC": tight_class_cohesion(set(m.body.local_accesses) & own_fields
                                        for m in cls.methods),
            "WOC": len(functional) / public_members if public_members else 1.0,
            "NOPA": sum(1 for f in public_fields if not f.is_static),
            "NOAM": sum(1 for m in public_methods if is_accessor(m)),
            "fan_in": graph.in_degree(cls.qualified_name),
            "fan_out": graph.out_degree(cls.qualified_name),
        }
        values.update(_inheritance(model, cls))
        records.append(MetricRecord(cls.qualified_name, CLASS, values))
    logger.debug("computed metrics for %d classes", len(records))
    return records
