"""Package coupling: afferent (Ca), efferent (Ce) and instability (I)."""

from __future__ import annotations

import networkx as nx

from smellscope.metrics.graphs import package_graph
from smellscope.metrics.records import PACKAGE, MetricRecord
from smellscope.model.entities import CodeFactsModel


def instability(ca: int, ce: int) -> float:
    return ce / (ca + ce) if ca + ce else 0.0


def compute_package_metrics(model: CodeFactsModel,
                            graph: nx.DiGraph | None = None) -> list[MetricRecord]:
    graph = package_graph(model) if graph is None else graph
    records = []
    for name in sorted(graph.nodes):
        ca, ce = graph.in_degree(name), graph.out_degree(name)
        records.append(MetricRecord(name, PACKAGE, {"Ca": ca, "Ce": ce, "I": instability(ca, ce)}))
    return records
