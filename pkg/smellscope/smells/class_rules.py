"""Class-granularity detection strategies, including Hub-Like Dependency."""

from __future__ import annotations

import logging

import numpy as np

from smellscope.metrics.records import CLASS, METHOD, MetricRecord, MetricTable
from smellscope.model.entities import ClassEntity, CodeFactsModel
from smellscope.settings import ThresholdConfig
from smellscope.smells.catalog import Granularity, SmellId, SmellInstance
from smellscope.smells.method_rules import is_brain_method

logger = logging.getLogger(__name__)


def is_god_class(c: MetricRecord, config: ThresholdConfig) -> bool:
    return c["ATFD"] > config.few and c["WMC"] >= config.very_high_wmc and c["TCC"] < config.one_third


def is_lazy_class(c: MetricRecord, config: ThresholdConfig) -> bool:
    return (c["LOC"] < config.lazy_class_loc
            and c["NOM"] <= config.lazy_class_nom
            and c["WMC"] <= config.lazy_class_nom)


def is_large_class(c: MetricRecord, config: ThresholdConfig) -> bool:
    return c["LOC"] >= config.large_class_loc


def is_data_class(c: MetricRecord, config: ThresholdConfig) -> bool:
    exposed = c["NOPA"] + c["NOAM"]
    if c["WOC"] >= config.one_third:
        return False
    if not config.data_class_strict:
        return exposed > config.few and c["WMC"] < config.very_high_wmc
    return ((exposed > config.few and c["WMC"] < config.high_wmc)
            or (exposed > config.many and c["WMC"] < config.very_high_wmc))


def is_refused_bequest(c: MetricRecord, has_parent: bool, config: ThresholdConfig) -> bool:
    return (has_parent
            and (c["BUR"] < config.one_third or c["BOvR"] < config.one_third)
            and c["NProtM"] > 0)


def is_hub(c: MetricRecord, median_in: float, median_out: float) -> bool:
    fan_in, fan_out = c["fan_in"], c["fan_out"]
    return (fan_in > median_in and fan_out > median_out
            and abs(fan_in - fan_out) < (fan_in + fan_out) / 4)


def fan_medians(records: list[MetricRecord]) -> tuple[float, float]:
    if not records:
        return 0.0, 0.0
    return (float(np.median([r["fan_in"] for r in records])),
            float(np.median([r["fan_out"] for r in records])))


def _method_summary(cls: ClassEntity, metrics: MetricTable,
                    config: ThresholdConfig) -> tuple[int, int]:
    """(highest CYCLO, number of brain methods) in *cls*."""
    records = [metrics.require(METHOD, m.qualified_name) for m in cls.methods]
    top = max((r["CYCLO"] for r in records), default=0)
    return top, sum(1 for r in records if is_brain_method(r, config))


def detect_class_smells(metrics: MetricTable, model: CodeFactsModel,
                        config: ThresholdConfig) -> list[SmellInstance]:
    records = [metrics.require(CLASS, c.qualified_name) for c in model.classes]
    median_in, median_out = fan_medians(records)
    logger.debug("hub medians: fan_in %.1f, fan_out %.1f", median_in, median_out)

    found: list[SmellInstance] = []
    for cls, c in zip(model.classes, records):
        name = cls.qualified_name

        def emit(smell: SmellId, **evidence: float) -> None:
            found.append(SmellInstance(smell, Granularity.CLASS, name, frozenset({name}), evidence))

        max_cyclo, brain_methods = _method_summary(cls, metrics, config)
        god = is_god_class(c, config)
        if god:
            emit(SmellId.GOD_CLASS, ATFD=c["ATFD"], WMC=c["WMC"], TCC=c["TCC"])
        if is_lazy_class(c, config):
            emit(SmellId.LAZY_CLASS, LOC=c["LOC"], NOM=c["NOM"], WMC=c["WMC"])
        if max_cyclo >= config.high_cyclo:
            emit(SmellId.COMPLEX_CLASS, max_CYCLO=max_cyclo)
        if is_large_class(c, config):
            emit(SmellId.LARGE_CLASS, LOC=c["LOC"])
        if is_data_class(c, config):
            emit(SmellId.DATA_CLASS, WOC=c["WOC"], NOPA=c["NOPA"], NOAM=c["NOAM"], WMC=c["WMC"])
        if is_refused_bequest(c, model.in_model_superclass(cls) is not None, config):
            emit(SmellId.REFUSED_BEQUEST, BUR=c["BUR"], BOvR=c["BOvR"], NProtM=c["NProtM"])
        if brain_methods and c["WMC"] >= config.very_high_wmc and c["TCC"] < config.half and not god:
            emit(SmellId.BRAIN_CLASS, brain_methods=brain_methods, WMC=c["WMC"], TCC=c["TCC"],
                 ATFD=c["ATFD"])
        if is_hub(c, median_in, median_out):
            emit(SmellId.HUB_LIKE_DEPENDENCY, fan_in=c["fan_in"], fan_out=c["fan_out"],
                 median_fan_in=median_in, median_fan_out=median_out)
    return found
