"""Facts interchange file (UTF-8 JSON, ``facts_schema: 1``).

Other front-ends can target this file instead of the bundled Java parser.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any

from smellscope.errors import ConfigurationError, ModelError, SchemaError
from smellscope.model.assemble import validate_model
from smellscope.model.entities import (
    AttributeAccess,
    BodyFacts,
    ClassEntity,
    CodeFactsModel,
    FieldEntity,
    FileEntity,
    MethodEntity,
    PackageEntity,
    Parameter,
    Relation,
    SkippedFile,
)

logger = logging.getLogger(__name__)

FACTS_SCHEMA = 1


# ====================================================================
#  Writing
# ====================================================================

def facts_to_dict(model: CodeFactsModel) -> dict[str, Any]:
    return {
        "facts_schema": FACTS_SCHEMA,
        "system": model.system_name,
        "version": model.version,
        "packages": [asdict(p) for p in model.packages],
        "files": [asdict(f) for f in model.files],
        "classes": [asdict(c) for c in model.classes],
        "relations": [asdict(r) for r in model.relations],
        "skipped": [asdict(s) for s in model.skipped],
    }


def dump_facts(model: CodeFactsModel) -> str:
    return json.dumps(facts_to_dict(model), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_facts(model: CodeFactsModel, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_facts(model))
    logger.info("wrote facts for %s %s to %s", model.system_name, model.version, path)


# ====================================================================
#  Reading
# ====================================================================

class _Record:
    """Typed accessor over one JSON object that names itself in errors."""

    def __init__(self, data: Any, where: str):
        if not isinstance(data, dict):
            raise SchemaError(where, "*", "expected an object")
        self._data = data
        self.where = where

    def get(self, key: str, kind: type | tuple[type, ...], default: Any = ...) -> Any:
        if key not in self._data:
            if default is ...:
                raise SchemaError(self.where, key, "missing")
            return default
        value = self._data[key]
        if kind is int and isinstance(value, bool):
            raise SchemaError(self.where, key, "expected int")
        if not isinstance(value, kind):
            names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
            raise SchemaError(self.where, key, f"expected {names}")
        return value

    def text_list(self, key: str) -> tuple[str, ...]:
        values = self.get(key, list, [])
        for i, v in enumerate(values):
            if not isinstance(v, str):
                raise SchemaError(self.where, f"{key}[{i}]", "expected str")
        return tuple(values)

    def records(self, key: str) -> list[_Record]:
        return [_Record(item, f"{self.where}.{key}[{i}]")
                for i, item in enumerate(self.get(key, list, []))]


def _access(rec: _Record) -> AttributeAccess:
    return AttributeAccess(owner=rec.get("owner", str), name=rec.get("name", str))


def _method(rec: _Record) -> MethodEntity:
    body = _Record(rec.get("body", dict, {}), f"{rec.where}.body")
    return MethodEntity(
        qualified_name=rec.get("qualified_name", str),
        name=rec.get("name", str),
        parameters=tuple(Parameter(name=p.get("name", str), type_text=p.get("type_text", str, ""))
                         for p in rec.records("parameters")),
        loc=rec.get("loc", int, 0),
        visibility=rec.get("visibility", str, "package"),
        is_static=rec.get("is_static", bool, False),
        is_constructor=rec.get("is_constructor", bool, False),
        is_abstract=rec.get("is_abstract", bool, False),
        body=BodyFacts(
            decision_points=body.text_list("decision_points"),
            local_accesses=body.text_list("local_accesses"),
            inherited_accesses=tuple(_access(a) for a in body.records("inherited_accesses")),
            foreign_accesses=tuple(_access(a) for a in body.records("foreign_accesses")),
            calls=body.text_list("calls"),
            external_calls=body.text_list("external_calls"),
            accessed_variables=body.text_list("accessed_variables"),
            max_nesting=body.get("max_nesting", int, 0),
        ),
    )


def _class(rec: _Record) -> ClassEntity:
    return ClassEntity(
        qualified_name=rec.get("qualified_name", str),
        name=rec.get("name", str),
        kind=rec.get("kind", str, "class"),
        package=rec.get("package", str, ""),
        file=rec.get("file", str),
        superclass=rec.get("superclass", (str, type(None)), None),
        interfaces=rec.text_list("interfaces"),
        fields=tuple(FieldEntity(name=f.get("name", str),
                                 visibility=f.get("visibility", str, "package"),
                                 is_static=f.get("is_static", bool, False),
                                 type_text=f.get("type_text", str, ""))
                     for f in rec.records("fields")),
        methods=tuple(_method(m) for m in rec.records("methods")),
        loc=rec.get("loc", int, 0),
        type_references=rec.text_list("type_references"),
    )


def facts_from_dict(data: Any, source: str = "facts") -> CodeFactsModel:
    top = _Record(data, source)
    schema = top.get("facts_schema", int)
    if schema != FACTS_SCHEMA:
        raise SchemaError(source, "facts_schema", f"unsupported version {schema}")

    model = CodeFactsModel(
        system_name=top.get("system", str),
        version=top.get("version", str),
        packages=tuple(PackageEntity(name=p.get("name", str), files=p.text_list("files"),
                                     classes=p.text_list("classes"))
                       for p in top.records("packages")),
        files=tuple(FileEntity(path=f.get("path", str), package=f.get("package", str, ""),
                               classes=f.text_list("classes"), loc=f.get("loc", int, 0))
                    for f in top.records("files")),
        classes=tuple(_class(c) for c in top.records("classes")),
        relations=tuple(Relation(kind=r.get("kind", str), source=r.get("source", str),
                                 target=r.get("target", str),
                                 external=r.get("external", bool, False))
                        for r in top.records("relations")),
        skipped=tuple(SkippedFile(path=s.get("path", str), reason=s.get("reason", str))
                      for s in top.records("skipped")),
    )

    names = [c.qualified_name for c in model.classes]
    if names != sorted(names):
        raise SchemaError(f"{source}.classes", "qualified_name", "array not sorted ascending")
    entities = model.entity_names
    for i, rel in enumerate(model.relations):
        if not rel.external and rel.target not in entities:
            raise SchemaError(f"{source}.relations[{i}]", "target",
                              f"'{rel.target}' does not resolve and is not marked external")
    try:
        validate_model(model)
    except ModelError as exc:
        raise SchemaError(source, "*", str(exc)) from exc
    return model


def read_facts(path: str | Path) -> CodeFactsModel:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"facts file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), "*", f"not valid JSON ({exc})") from exc
    except UnicodeDecodeError as exc:
        raise SchemaError(str(path), "*", f"not valid UTF-8 ({exc.reason} at byte {exc.start})") from exc
    return facts_from_dict(data, source=path.name)
