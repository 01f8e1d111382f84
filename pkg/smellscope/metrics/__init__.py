from smellscope.metrics.class_metrics import compute_class_metrics
from smellscope.metrics.graphs import class_graph, package_graph
from smellscope.metrics.method_metrics import compute_method_metrics
from smellscope.metrics.package_metrics import compute_package_metrics
from smellscope.metrics.records import MetricRecord, MetricTable


def compute_metrics(model) -> MetricTable:
    """Method, class and package records for one facts model."""
    table = MetricTable(compute_method_metrics(model))
    classes = class_graph(model)
    table.extend(compute_class_metrics(model, table, classes))
    table.extend(compute_package_metrics(model, package_graph(model, classes)))
    return table


__all__ = [
    "MetricRecord",
    "MetricTable",
    "compute_class_metrics",
    "compute_method_metrics",
    "compute_metrics",
    "compute_package_metrics",
]
