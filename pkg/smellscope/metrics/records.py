"""Metric records and the lookup table the detectors read from."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from smellscope.errors import ConsistencyError

METHOD = "method"
CLASS = "class"
PACKAGE = "package"
GRANULARITIES = (METHOD, CLASS, PACKAGE)

Number = int | float


@dataclass(frozen=True)
class MetricRecord:
    entity: str
    granularity: str
    values: Mapping[str, Number] = field(default_factory=dict)

    def __getitem__(self, metric: str) -> Number:
        return self.values[metric]


class MetricTable:
    """All metric records of one model, keyed by (granularity, entity)."""

    def __init__(self, records: Iterable[MetricRecord] = ()):
        self._records: dict[tuple[str, str], MetricRecord] = {}
        self.extend(records)

    def add(self, record: MetricRecord) -> None:
        key = (record.granularity, record.entity)
        if key in self._records:
            raise ConsistencyError(f"metric record for {key} computed twice")
        self._records[key] = record

    def extend(self, records: Iterable[MetricRecord]) -> None:
        for record in records:
            self.add(record)

    def get(self, granularity: str, entity: str) -> MetricRecord | None:
        return self._records.get((granularity, entity))

    def require(self, granularity: str, entity: str) -> MetricRecord:
        record = self.get(granularity, entity)
        if record is None:
            raise ConsistencyError(f"no {granularity} metrics for '{entity}'")
        return record

    def of(self, granularity: str) -> list[MetricRecord]:
        return sorted((r for (g, _), r in self._records.items() if g == granularity),
                      key=lambda r: r.entity)

    def rows(self) -> Iterator[tuple[str, str, str, Number]]:
        """(entity, granularity, metric, value), sorted by entity then metric."""
        flat = [(r.entity, metric, r.granularity, value)
                for r in self._records.values() for metric, value in r.values.items()]
        for entity, metric, granularity, value in sorted(flat, key=lambda t: t[:3]):
            yield entity, granularity, metric, value

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[MetricRecord]:
        return iter(sorted(self._records.values(), key=lambda r: (r.entity, r.granularity)))
