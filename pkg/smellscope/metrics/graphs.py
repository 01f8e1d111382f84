"""Class- and package-level dependency graphs."""

from __future__ import annotations

import networkx as nx

from smellscope.model.entities import CodeFactsModel

DEPENDENCY_KINDS = frozenset(("inherits", "depends_on", "calls", "accesses_field"))


def owning_class(model: CodeFactsModel, name: str) -> str | None:
    """Class a class/method/field qualified name belongs to."""
    if name in model.class_index:
        return name
    hit = model.method_index.get(name)
    if hit is not None:
        return hit[0].qualified_name
    if name in model.field_names:
        return name.rsplit(".", 1)[0]
    return None


def class_graph(model: CodeFactsModel, kinds: frozenset[str] = DEPENDENCY_KINDS) -> nx.DiGraph:
    """Edges between distinct in-model classes; external endpoints are dropped."""
    graph = nx.DiGraph()
    graph.add_nodes_from(c.qualified_name for c in model.classes)
    for rel in model.relations:
        if rel.external or rel.kind not in kinds:
            continue
        source = owning_class(model, rel.source)
        target = owning_class(model, rel.target)
        if source and target and source != target:
            graph.add_edge(source, target)
    return graph


def package_graph(model: CodeFactsModel, classes: nx.DiGraph | None = None) -> nx.DiGraph:
    classes = class_graph(model) if classes is None else classes
    package_of = {c.qualified_name: c.package for c in model.classes}
    graph = nx.DiGraph()
    graph.add_nodes_from(p.name for p in model.packages)
    for source, target in classes.edges:
        p, q = package_of[source], package_of[target]
        if p != q:
            graph.add_edge(p, q)
    return graph


def cyclic_components(graph: nx.DiGraph) -> list[tuple[str, ...]]:
    """Strongly connected components with two or more nodes, sorted."""
    components = (tuple(sorted(c)) for c in nx.strongly_connected_components(graph))
    return sorted(c for c in components if len(c) >= 2)
