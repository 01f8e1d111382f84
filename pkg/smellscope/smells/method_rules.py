"""Method-granularity detection strategies."""

from __future__ import annotations

from smellscope.metrics.records import METHOD, MetricRecord, MetricTable
from smellscope.model.entities import CodeFactsModel
from smellscope.settings import ThresholdConfig
from smellscope.smells.catalog import Granularity, SmellId, SmellInstance


def is_feature_envy(m: MetricRecord, config: ThresholdConfig) -> bool:
    return m["ATFD_m"] > config.few and m["LAA"] < config.one_third and m["FDP"] <= config.few


def is_long_method(m: MetricRecord, config: ThresholdConfig) -> bool:
    return m["LOC"] > config.long_method_loc


def is_long_parameter_list(m: MetricRecord, config: ThresholdConfig) -> bool:
    return m["NOPAR"] >= config.long_params


def is_brain_method(m: MetricRecord, config: ThresholdConfig) -> bool:
    return (m["LOC"] > config.brain_method_loc
            and m["CYCLO"] >= config.high_cyclo
            and m["MAXNESTING"] >= config.brain_nesting
            and m["NOAV"] > config.brain_noav)


def is_shotgun_surgery(m: MetricRecord, config: ThresholdConfig) -> bool:
    return m["CM"] >= config.shotgun_cm and m["CC"] >= config.shotgun_cc


# rule, predicate, metrics consulted
METHOD_RULES = (
    (SmellId.FEATURE_ENVY, is_feature_envy, ("ATFD_m", "LAA", "FDP")),
    (SmellId.LONG_METHOD, is_long_method, ("LOC",)),
    (SmellId.LONG_PARAMETER_LIST, is_long_parameter_list, ("NOPAR",)),
    (SmellId.BRAIN_METHOD, is_brain_method, ("LOC", "CYCLO", "MAXNESTING", "NOAV")),
    (SmellId.SHOTGUN_SURGERY, is_shotgun_surgery, ("CM", "CC")),
)


def detect_method_smells(metrics: MetricTable, model: CodeFactsModel,
                         config: ThresholdConfig) -> list[SmellInstance]:
    found = []
    for name in sorted(model.method_index):
        record = metrics.require(METHOD, name)
        for smell, fires, consulted in METHOD_RULES:
            if fires(record, config):
                found.append(SmellInstance(smell, Granularity.METHOD, name,
                                           evidence={k: record[k] for k in consulted}))
    return found
