"""Architectural smells: cyclic and unstable dependencies, unhealthy hierarchies."""

from __future__ import annotations

import logging

import networkx as nx

from smellscope.metrics.graphs import DEPENDENCY_KINDS, class_graph, cyclic_components, package_graph
from smellscope.metrics.records import PACKAGE, MetricTable
from smellscope.model.entities import CodeFactsModel
from smellscope.settings import ThresholdConfig
from smellscope.smells.catalog import Granularity, SmellId, SmellInstance

logger = logging.getLogger(__name__)

_NON_INHERITANCE = DEPENDENCY_KINDS - {"inherits"}


def detect_cycles(graph: nx.DiGraph, granularity: Granularity) -> list[SmellInstance]:
    found = []
    for component in cyclic_components(graph):
        for node in component:
            lifted = frozenset({node}) if granularity is Granularity.CLASS else frozenset()
            found.append(SmellInstance(SmellId.CYCLIC_DEPENDENCY, granularity, node, lifted,
                                       {"component_size": len(component)}))
    return found


def detect_unstable(metrics: MetricTable, graph: nx.DiGraph,
                    config: ThresholdConfig) -> list[SmellInstance]:
    found = []
    for name in sorted(graph.nodes):
        own = metrics.require(PACKAGE, name)
        if own["Ce"] == 0:
            continue
        bad = sum(1 for target in graph.successors(name)
                  if metrics.require(PACKAGE, target)["I"] > own["I"])
        ratio = bad / own["Ce"]
        if ratio > config.unstable_bad_dep_ratio:
            found.append(SmellInstance(SmellId.UNSTABLE_DEPENDENCY, Granularity.PACKAGE, name,
                                       evidence={"I": own["I"], "Ce": own["Ce"],
                                                 "bad_dependencies": bad, "bad_ratio": ratio}))
    return found


def detect_unhealthy_hierarchies(model: CodeFactsModel, graph: nx.DiGraph) -> list[SmellInstance]:
    """Files holding a parent that depends on a subclass, or that shares a client with one."""
    direct = class_graph(model, _NON_INHERITANCE)
    per_file: dict[str, dict[str, int]] = {}
    for parent in model.classes:
        name = parent.qualified_name
        subclasses = set(model.descendants(name))
        if not subclasses:
            continue
        on_child = sum(1 for c in sorted(subclasses) if direct.has_edge(name, c))
        clients = 0
        for client in sorted(graph.predecessors(name)):
            if client in subclasses:
                continue
            if any(graph.has_edge(client, c) for c in subclasses):
                clients += 1
        if on_child or clients:
            tally = per_file.setdefault(parent.file, {"parents": 0, "subclass_dependencies": 0,
                                                      "shared_clients": 0})
            tally["parents"] += 1
            tally["subclass_dependencies"] += on_child
            tally["shared_clients"] += clients
    return [SmellInstance(SmellId.UNHEALTHY_INHERITANCE_HIERARCHY, Granularity.FILE, path,
                          evidence=evidence)
            for path, evidence in sorted(per_file.items())]


def detect_architectural_smells(metrics: MetricTable, model: CodeFactsModel,
                                config: ThresholdConfig) -> list[SmellInstance]:
    classes = class_graph(model)
    packages = package_graph(model, classes)
    found = detect_cycles(classes, Granularity.CLASS)
    found += detect_cycles(packages, Granularity.PACKAGE)
    found += detect_unstable(metrics, packages, config)
    found += detect_unhealthy_hierarchies(model, classes)
    logger.debug("%d architectural smell instances", len(found))
    return found
