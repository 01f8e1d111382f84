"""Detection thresholds and run configuration, both stored as key = value text."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any

from smellscope.errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLDS: dict[str, Any] = {
    # God Class / Data Class / Brain Class
    "few": 5,
    "very_high_wmc": 47,
    "one_third": 1 / 3,
    "half": 0.5,

    # Complex / Large / Lazy Class
    "high_cyclo": 10,
    "large_class_loc": 500,
    "lazy_class_loc": 40,
    "lazy_class_nom": 3,

    # Method smells
    "long_method_loc": 50,
    "long_params": 5,
    "brain_method_loc": 65,
    "brain_nesting": 5,
    "brain_noav": 5,
    "shotgun_cm": 10,
    "shotgun_cc": 5,

    # Architecture
    "unstable_bad_dep_ratio": 0.3,

    # Second Data Class branch
    "data_class_strict": False,
    "high_wmc": 31,
    "many": 8,
}

_RATIOS = frozenset(("one_third", "half", "unstable_bad_dep_ratio"))
_FLAGS = frozenset(("data_class_strict",))
_TRUE = ("true", "yes", "on", "1")
_FALSE = ("false", "no", "off", "0")


def parse_bool(text: str, where: str) -> bool:
    lowered = text.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigurationError(f"{where}: expected a boolean, got '{text}'")


def read_key_values(path: str | Path) -> list[tuple[int, str, str]]:
    """(line number, key, value) for every non-comment line of a key = value file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"configuration file not found: {path}")
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ConfigurationError(f"{path}:{number}: expected 'key = value'")
            entries.append((number, key.strip(), value.strip()))
    return entries


@dataclass(frozen=True)
class ThresholdConfig:
    few: int = DEFAULT_THRESHOLDS["few"]
    very_high_wmc: int = DEFAULT_THRESHOLDS["very_high_wmc"]
    one_third: float = DEFAULT_THRESHOLDS["one_third"]
    half: float = DEFAULT_THRESHOLDS["half"]
    high_cyclo: int = DEFAULT_THRESHOLDS["high_cyclo"]
    large_class_loc: int = DEFAULT_THRESHOLDS["large_class_loc"]
    lazy_class_loc: int = DEFAULT_THRESHOLDS["lazy_class_loc"]
    lazy_class_nom: int = DEFAULT_THRESHOLDS["lazy_class_nom"]
    long_method_loc: int = DEFAULT_THRESHOLDS["long_method_loc"]
    long_params: int = DEFAULT_THRESHOLDS["long_params"]
    brain_method_loc: int = DEFAULT_THRESHOLDS["brain_method_loc"]
    brain_nesting: int = DEFAULT_THRESHOLDS["brain_nesting"]
    brain_noav: int = DEFAULT_THRESHOLDS["brain_noav"]
    shotgun_cm: int = DEFAULT_THRESHOLDS["shotgun_cm"]
    shotgun_cc: int = DEFAULT_THRESHOLDS["shotgun_cc"]
    unstable_bad_dep_ratio: float = DEFAULT_THRESHOLDS["unstable_bad_dep_ratio"]
    data_class_strict: bool = DEFAULT_THRESHOLDS["data_class_strict"]
    high_wmc: int = DEFAULT_THRESHOLDS["high_wmc"]
    many: int = DEFAULT_THRESHOLDS["many"]

    # Hub-Like medians are always taken over the analysed corpus.
    hub_median_basis = "corpus"

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in _FLAGS:
                if not isinstance(value, bool):
                    raise ConfigurationError(f"threshold '{f.name}' must be a boolean")
            elif f.name in _RATIOS:
                if not 0 < value <= 1:
                    raise ConfigurationError(f"threshold '{f.name}' must be in (0, 1], got {value}")
            elif isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"threshold '{f.name}' must be a count >= 1, got {value}")

    @classmethod
    def from_mapping(cls, values: dict[str, str], where: str = "thresholds") -> ThresholdConfig:
        parsed: dict[str, Any] = {}
        for key, text in values.items():
            if key not in DEFAULT_THRESHOLDS:
                raise ConfigurationError(f"{where}: unknown threshold '{key}'")
            try:
                if key in _FLAGS:
                    parsed[key] = parse_bool(text, f"{where}: {key}")
                elif key in _RATIOS:
                    parsed[key] = float(Fraction(text))
                else:
                    parsed[key] = int(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigurationError(f"{where}: cannot parse {key} = '{text}'") from exc
        return cls(**parsed)

    @classmethod
    def load(cls, path: str | Path | None) -> ThresholdConfig:
        if path is None:
            return cls()
        seen: dict[str, str] = {}
        for number, key, value in read_key_values(path):
            if key in seen:
                raise ConfigurationError(f"{path}:{number}: '{key}' given twice")
            seen[key] = value
        config = cls.from_mapping(seen, where=str(path))
        logger.info("loaded thresholds from %s", path)
        return config

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


def format_thresholds(config: ThresholdConfig) -> str:
    lines = ["# effective detection thresholds"]
    for key, value in config.as_dict().items():
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def write_thresholds(config: ThresholdConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_thresholds(config))


# ====================================================================
#  Run configuration
# ====================================================================

@dataclass(frozen=True)
class VersionSource:
    system: str
    release: str
    version: str
    path: Path

    @property
    def is_facts_file(self) -> bool:
        return self.path.suffix.lower() == ".json"


@dataclass(frozen=True)
class RunConfig:
    labels: Path
    out_dir: Path
    versions: tuple[VersionSource, ...]
    thresholds: Path | None = None
    jobs: int = 1
    lift_packages: bool = True

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        path = Path(path)
        base = path.resolve().parent
        scalars: dict[str, str] = {}
        versions: list[VersionSource] = []
        for number, key, value in read_key_values(path):
            where = f"{path}:{number}"
            if key == "version":
                parts = value.split(None, 3)
                if len(parts) != 4:
                    raise ConfigurationError(
                        f"{where}: expected 'version = <system> <release> <version> <path>'")
                system, release, version, source = parts
                versions.append(VersionSource(system, release, version, base / source))
            elif key in ("labels", "thresholds", "out_dir", "jobs", "lift_packages"):
                if key in scalars:
                    raise ConfigurationError(f"{where}: '{key}' given twice")
                scalars[key] = value
            else:
                raise ConfigurationError(f"{where}: unknown key '{key}'")

        for required in ("labels", "out_dir"):
            if required not in scalars:
                raise ConfigurationError(f"{path}: missing required key '{required}'")
        if not versions:
            raise ConfigurationError(f"{path}: no 'version' entries")
        seen = set()
        for v in versions:
            if (v.system, v.version) in seen:
                raise ConfigurationError(f"{path}: version {v.system} {v.version} listed twice")
            seen.add((v.system, v.version))

        try:
            jobs = int(scalars.get("jobs", "1"))
        except ValueError as exc:
            raise ConfigurationError(f"{path}: jobs must be an integer") from exc
        if jobs < 1:
            raise ConfigurationError(f"{path}: jobs must be >= 1")

        return cls(
            labels=base / scalars["labels"],
            out_dir=base / scalars["out_dir"],
            versions=tuple(versions),
            thresholds=base / scalars["thresholds"] if scalars.get("thresholds") else None,
            jobs=jobs,
            lift_packages=parse_bool(scalars.get("lift_packages", "true"), f"{path}: lift_packages"),
        )
