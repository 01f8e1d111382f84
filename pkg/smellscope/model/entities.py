"""Language-neutral code-facts model.

Qualified-name scheme:
    class   package.Class            (nested: package.Outer.Inner)
    method  package.Class#name(arity)
    field   package.Class.field
    file    path relative to the source root, '/'-separated
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

CLASS_KINDS = ("class", "interface", "enum")
VISIBILITIES = ("public", "protected", "package", "private")
RELATION_KINDS = ("inherits", "contains", "calls", "accesses_field", "depends_on")


def method_qualified_name(class_name: str, name: str, arity: int) -> str:
    return f"{class_name}#{name}({arity})"


def class_qualified_name(package: str, name: str) -> str:
    return f"{package}.{name}" if package else name


# ====================================================================
#  Members
# ====================================================================

@dataclass(frozen=True)
class FieldEntity:
    name: str
    visibility: str = "package"
    is_static: bool = False
    type_text: str = ""


@dataclass(frozen=True)
class Parameter:
    name: str
    type_text: str = ""


@dataclass(frozen=True, order=True)
class AttributeAccess:
    """One attribute touched by a method, keyed by the class that declares it."""

    owner: str
    name: str

    @property
    def qualified_name(self) -> str:
        return f"{self.owner}.{self.name}"


@dataclass(frozen=True)
class BodyFacts:
    """Everything CYCLO, ATFD, LAA, TCC and NOAV need from a method body."""

    decision_points: tuple[str, ...] = ()
    local_accesses: tuple[str, ...] = ()
    inherited_accesses: tuple[AttributeAccess, ...] = ()
    foreign_accesses: tuple[AttributeAccess, ...] = ()
    calls: tuple[str, ...] = ()
    external_calls: tuple[str, ...] = ()
    accessed_variables: tuple[str, ...] = ()
    max_nesting: int = 0


@dataclass(frozen=True)
class MethodEntity:
    qualified_name: str
    name: str
    parameters: tuple[Parameter, ...] = ()
    loc: int = 0
    visibility: str = "package"
    is_static: bool = False
    is_constructor: bool = False
    is_abstract: bool = False
    body: BodyFacts = field(default_factory=BodyFacts)

    @property
    def arity(self) -> int:
        return len(self.parameters)


# ====================================================================
#  Containers
# ====================================================================

@dataclass(frozen=True)
class ClassEntity:
    qualified_name: str
    name: str
    kind: str = "class"
    package: str = ""
    file: str = ""
    superclass: str | None = None
    interfaces: tuple[str, ...] = ()
    fields: tuple[FieldEntity, ...] = ()
    methods: tuple[MethodEntity, ...] = ()
    loc: int = 0
    type_references: tuple[str, ...] = ()

    def field_qualified_name(self, name: str) -> str:
        return f"{self.qualified_name}.{name}"


@dataclass(frozen=True)
class FileEntity:
    path: str
    package: str = ""
    classes: tuple[str, ...] = ()
    loc: int = 0

    @property
    def qualified_name(self) -> str:
        return self.path


@dataclass(frozen=True)
class PackageEntity:
    name: str
    files: tuple[str, ...] = ()
    classes: tuple[str, ...] = ()

    @property
    def qualified_name(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Relation:
    kind: str
    source: str
    target: str
    external: bool = False


@dataclass(frozen=True)
class SkippedFile:
    path: str
    reason: str


# ====================================================================
#  Model
# ====================================================================

@dataclass(frozen=True)
class CodeFactsModel:
    """Immutable facts for one version of one system; arrays sorted by qualified name."""

    system_name: str
    version: str
    packages: tuple[PackageEntity, ...] = ()
    files: tuple[FileEntity, ...] = ()
    classes: tuple[ClassEntity, ...] = ()
    relations: tuple[Relation, ...] = ()
    skipped: tuple[SkippedFile, ...] = ()

    # ------------------------------------------------------------------
    @cached_property
    def class_index(self) -> dict[str, ClassEntity]:
        return {c.qualified_name: c for c in self.classes}

    @cached_property
    def method_index(self) -> dict[str, tuple[ClassEntity, MethodEntity]]:
        return {m.qualified_name: (c, m) for c in self.classes for m in c.methods}

    @cached_property
    def file_index(self) -> dict[str, FileEntity]:
        return {f.path: f for f in self.files}

    @cached_property
    def package_index(self) -> dict[str, PackageEntity]:
        return {p.name: p for p in self.packages}

    @cached_property
    def field_names(self) -> frozenset[str]:
        return frozenset(c.field_qualified_name(f.name) for c in self.classes for f in c.fields)

    @cached_property
    def entity_names(self) -> frozenset[str]:
        return (
            frozenset(self.class_index)
            | frozenset(self.method_index)
            | frozenset(self.file_index)
            | frozenset(self.package_index)
            | self.field_names
        )

    @cached_property
    def subclasses(self) -> dict[str, tuple[str, ...]]:
        """Direct in-model subclasses of each class."""
        children: dict[str, list[str]] = {}
        for c in self.classes:
            for parent in (c.superclass, *c.interfaces):
                if parent in self.class_index:
                    children.setdefault(parent, []).append(c.qualified_name)
        return {k: tuple(sorted(v)) for k, v in children.items()}

    # ------------------------------------------------------------------
    def owner_of(self, method_name: str) -> ClassEntity:
        return self.method_index[method_name][0]

    def in_model_superclass(self, cls: ClassEntity) -> ClassEntity | None:
        if cls.superclass is None:
            return None
        return self.class_index.get(cls.superclass)

    def ancestors(self, class_name: str) -> list[str]:
        """In-model superclass chain, nearest first."""
        chain: list[str] = []
        current = self.class_index.get(class_name)
        while current is not None and current.superclass in self.class_index:
            if current.superclass in chain or current.superclass == class_name:
                break
            chain.append(current.superclass)
            current = self.class_index[current.superclass]
        return chain

    def descendants(self, class_name: str) -> list[str]:
        seen: list[str] = []
        pending = list(self.subclasses.get(class_name, ()))
        while pending:
            name = pending.pop()
            if name in seen or name == class_name:
                continue
            seen.append(name)
            pending.extend(self.subclasses.get(name, ()))
        return sorted(seen)

    @property
    def method_count(self) -> int:
        return sum(len(c.methods) for c in self.classes)
