"""Deterministic model assembly, relation derivation and validation."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import replace

from smellscope.errors import ModelError
from smellscope.model.entities import (
    CLASS_KINDS,
    RELATION_KINDS,
    VISIBILITIES,
    ClassEntity,
    CodeFactsModel,
    FileEntity,
    PackageEntity,
    Relation,
    SkippedFile,
)

logger = logging.getLogger(__name__)


def assemble_model(system: str,
                   version: str,
                   classes: Iterable[ClassEntity],
                   files: Iterable[FileEntity] = (),
                   skipped: Iterable[SkippedFile] = ()) -> CodeFactsModel:
    """Merge per-file results into one sorted, validated model.

    *files* may carry files without classes and the physical LOC of each
    file; files only referenced from ``ClassEntity.file`` are synthesised
    with the summed class LOC.
    """
    ordered = sorted(classes, key=lambda c: c.qualified_name)
    seen: set[str] = set()
    for cls in ordered:
        if cls.qualified_name in seen:
            raise ModelError(f"duplicate class qualified name '{cls.qualified_name}'")
        seen.add(cls.qualified_name)

    file_meta: dict[str, FileEntity] = {}
    for f in files:
        if f.path in file_meta:
            raise ModelError(f"duplicate file '{f.path}'")
        file_meta[f.path] = f

    members: dict[str, list[str]] = {}
    synthesised: set[str] = set()
    for cls in ordered:
        members.setdefault(cls.file, []).append(cls.qualified_name)
        if cls.file not in file_meta:
            file_meta[cls.file] = FileEntity(path=cls.file, package=cls.package)
            synthesised.add(cls.file)

    file_entities: list[FileEntity] = []
    for path in sorted(file_meta):
        meta = file_meta[path]
        names = tuple(sorted(members.get(path, ())))
        loc = meta.loc
        if path in synthesised:
            loc = sum(c.loc for c in ordered if c.file == path)
        file_entities.append(FileEntity(path=path, package=meta.package, classes=names, loc=loc))

    pkg_files: dict[str, list[str]] = {}
    pkg_classes: dict[str, list[str]] = {}
    for f in file_entities:
        pkg_files.setdefault(f.package, []).append(f.path)
        pkg_classes.setdefault(f.package, []).extend(f.classes)
    packages = tuple(
        PackageEntity(name=name, files=tuple(sorted(pkg_files[name])),
                      classes=tuple(sorted(pkg_classes[name])))
        for name in sorted(pkg_files)
    )

    model = CodeFactsModel(
        system_name=system,
        version=version,
        packages=packages,
        files=tuple(file_entities),
        classes=tuple(ordered),
        relations=(),
        skipped=tuple(sorted(skipped, key=lambda s: s.path)),
    )
    model = replace(model, relations=derive_relations(model))
    validate_model(model)
    logger.debug("assembled %s %s: %d classes, %d relations",
                 system, version, len(model.classes), len(model.relations))
    return model


# ====================================================================
#  Relations
# ====================================================================

def derive_relations(model: CodeFactsModel) -> tuple[Relation, ...]:
    """Derive the relation set from entity membership and body facts."""
    known_classes = model.class_index
    known_fields = model.field_names
    known_methods = model.method_index
    relations: set[Relation] = set()

    for f in model.files:
        for name in f.classes:
            relations.add(Relation("contains", f.path, name))

    for cls in model.classes:
        for parent in (cls.superclass, *cls.interfaces):
            if parent:
                relations.add(Relation("inherits", cls.qualified_name, parent,
                                       external=parent not in known_classes))
        for ref in cls.type_references:
            if ref != cls.qualified_name and ref in known_classes:
                relations.add(Relation("depends_on", cls.qualified_name, ref))

        for method in cls.methods:
            body = method.body
            for target in body.calls:
                relations.add(Relation("calls", method.qualified_name, target,
                                       external=target not in known_methods))
            for target in body.external_calls:
                relations.add(Relation("calls", method.qualified_name, target,
                                       external=target not in known_methods))
            touched = [cls.field_qualified_name(n) for n in body.local_accesses]
            touched += [a.qualified_name for a in body.inherited_accesses]
            touched += [a.qualified_name for a in body.foreign_accesses]
            for target in touched:
                if target in known_fields:
                    relations.add(Relation("accesses_field", method.qualified_name, target))

    return tuple(sorted(relations))


# ====================================================================
#  Validation
# ====================================================================

def validate_model(model: CodeFactsModel) -> None:
    """Raise ModelError when any facts-model invariant is broken."""
    names: set[str] = set()

    def claim(name: str, what: str) -> None:
        if name in names:
            raise ModelError(f"duplicate qualified name '{name}' ({what})")
        names.add(name)

    for cls in model.classes:
        claim(cls.qualified_name, "class")
        if cls.kind not in CLASS_KINDS:
            raise ModelError(f"class '{cls.qualified_name}': unknown kind '{cls.kind}'")
        if cls.loc < 0:
            raise ModelError(f"class '{cls.qualified_name}': negative loc")
        for f in cls.fields:
            claim(cls.field_qualified_name(f.name), "field")
            if f.visibility not in VISIBILITIES:
                raise ModelError(f"field '{cls.qualified_name}.{f.name}': bad visibility")
        for m in cls.methods:
            claim(m.qualified_name, "method")
            if m.loc < 0 or m.body.max_nesting < 0:
                raise ModelError(f"method '{m.qualified_name}': negative size fact")
            if m.visibility not in VISIBILITIES:
                raise ModelError(f"method '{m.qualified_name}': bad visibility")

    files = model.file_index
    packages = model.package_index
    for cls in model.classes:
        owner = files.get(cls.file)
        if owner is None or cls.qualified_name not in owner.classes:
            raise ModelError(f"class '{cls.qualified_name}' has no containing file")
        pkg = packages.get(cls.package)
        if pkg is None or cls.qualified_name not in pkg.classes:
            raise ModelError(f"class '{cls.qualified_name}' has no containing package")
    if sum(len(f.classes) for f in model.files) != len(model.classes):
        raise ModelError("file membership does not cover every class exactly once")

    entities = model.entity_names
    seen: set[tuple[str, str, str]] = set()
    for rel in model.relations:
        key = (rel.kind, rel.source, rel.target)
        if rel.kind not in RELATION_KINDS:
            raise ModelError(f"relation {key}: unknown kind")
        if key in seen:
            raise ModelError(f"relation {key}: duplicate")
        seen.add(key)
        if rel.source not in entities:
            raise ModelError(f"relation {key}: source does not resolve")
        if not rel.external and rel.target not in entities:
            raise ModelError(f"relation {key}: dangling target not marked external")
