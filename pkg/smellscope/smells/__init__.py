from smellscope.smells.architecture_rules import detect_architectural_smells
from smellscope.smells.catalog import Granularity, SmellId, SmellInstance, sort_instances
from smellscope.smells.class_rules import detect_class_smells
from smellscope.smells.lifting import lift_to_class_level
from smellscope.smells.method_rules import detect_method_smells


def detect_smells(metrics, model, config) -> list[SmellInstance]:
    """All native-granularity detections, sorted by (smell id, anchor)."""
    found = detect_class_smells(metrics, model, config)
    found += detect_method_smells(metrics, model, config)
    found += detect_architectural_smells(metrics, model, config)
    return sort_instances(found)


__all__ = [
    "Granularity",
    "SmellId",
    "SmellInstance",
    "detect_architectural_smells",
    "detect_class_smells",
    "detect_method_smells",
    "detect_smells",
    "lift_to_class_level",
]
