"""javalang front-end: turn a Java source tree into a CodeFactsModel.

Parsing runs in two passes.  The declaration pass reads every file and
builds a DeclarationIndex (types, fields, method signatures, imports);
the body pass walks each member body against that index.  Both passes are
per-file and may run in a process pool; results are merged by
``assemble_model`` so the output never depends on file order.
"""

from __future__ import annotations

import logging
import os
import re
from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import javalang
from javalang import tree as jtree
from javalang.parser import JavaSyntaxError
from javalang.tokenizer import LexerError

from smellscope.errors import ConfigurationError, ModelError
from smellscope.model.assemble import assemble_model
from smellscope.model.entities import (
    ClassEntity,
    CodeFactsModel,
    FieldEntity,
    FileEntity,
    MethodEntity,
    Parameter,
    SkippedFile,
    class_qualified_name,
    method_qualified_name,
)
from smellscope.parser.body_scanner import BodyScanner, type_name, type_text

logger = logging.getLogger(__name__)

_PARSE_ERRORS = (LexerError, JavaSyntaxError, IndexError, StopIteration, TypeError,
                 RecursionError)
_GENERICS = re.compile(r"<.*>")
_PRIMITIVES = frozenset(
    ("boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var"))
_TYPE_DECLARATIONS = (jtree.ClassDeclaration, jtree.InterfaceDeclaration,
                      jtree.EnumDeclaration, jtree.AnnotationDeclaration)


def erasure(text: str) -> str:
    """``Map<K, V>[]`` -> ``Map``."""
    return _GENERICS.sub("", text or "").replace("[]", "").replace("...", "").strip()


# ====================================================================
#  Declaration index
# ====================================================================

@dataclass(frozen=True)
class FileContext:
    path: str
    package: str
    imports: dict[str, str] = field(default_factory=dict)
    wildcards: tuple[str, ...] = ()


@dataclass(frozen=True)
class ClassDecl:
    qualified_name: str
    name: str
    kind: str
    package: str
    file: str
    enclosing: str | None
    superclass_text: str | None
    interface_texts: tuple[str, ...]
    fields: tuple[FieldEntity, ...]
    methods: tuple[tuple[str, int, str], ...]  # (name, arity, qualified name)


@dataclass(frozen=True)
class FileDeclarations:
    context: FileContext
    classes: tuple[ClassDecl, ...]


class DeclarationIndex:
    """Corpus-wide lookup of declared types and members."""

    def __init__(self, files: list[FileDeclarations]):
        self.classes: dict[str, ClassDecl] = {}
        self.contexts: dict[str, FileContext] = {}
        for decls in files:
            self.contexts[decls.context.path] = decls.context
            for cls in decls.classes:
                if cls.qualified_name in self.classes:
                    other = self.classes[cls.qualified_name].file
                    raise ModelError(f"duplicate class qualified name '{cls.qualified_name}' "
                                     f"in {other} and {cls.file}")
                self.classes[cls.qualified_name] = cls

        self._fields = {qn: {f.name: f for f in c.fields} for qn, c in self.classes.items()}
        self._methods: dict[str, dict[tuple[str, int], str]] = {}
        self._method_owner: dict[str, str] = {}
        for qn, cls in self.classes.items():
            table: dict[tuple[str, int], str] = {}
            for name, arity, method_qn in cls.methods:
                table.setdefault((name, arity), method_qn)
                self._method_owner[method_qn] = qn
            self._methods[qn] = table

        self._super: dict[str, str | None] = {}
        self._interfaces: dict[str, tuple[str, ...]] = {}
        for qn, cls in self.classes.items():
            ctx = self.contexts[cls.file]
            scope = cls.enclosing
            self._super[qn] = (self.resolve_type(cls.superclass_text, ctx, scope)
                               if cls.superclass_text else None)
            self._interfaces[qn] = tuple(
                r for r in (self.resolve_type(t, ctx, scope) for t in cls.interface_texts) if r)
        self._supertypes: dict[str, tuple[str, ...]] = {}

    # ------------------------------------------------------------------
    def resolve_type(self, text: str | None, context: FileContext, scope: str | None) -> str | None:
        """Resolve a source type name to an in-model class, or None."""
        dotted = erasure(text or "")
        if not dotted or dotted in _PRIMITIVES:
            return None
        head, _, rest = dotted.partition(".")

        current = scope
        while current is not None:
            candidate = f"{current}.{dotted}"
            if candidate in self.classes:
                return candidate
            decl = self.classes.get(current)
            current = decl.enclosing if decl else None

        if head in context.imports:
            candidate = context.imports[head] + (f".{rest}" if rest else "")
            return candidate if candidate in self.classes else None
        candidate = class_qualified_name(context.package, dotted)
        if candidate in self.classes:
            return candidate
        for prefix in context.wildcards:
            candidate = f"{prefix}.{dotted}"
            if candidate in self.classes:
                return candidate
        return dotted if dotted in self.classes else None

    def superclass_of(self, class_name: str) -> str | None:
        return self._super.get(class_name)

    def superclass_text(self, class_name: str) -> str | None:
        resolved = self._super.get(class_name)
        if resolved:
            return resolved
        text = self.classes[class_name].superclass_text
        return erasure(text) if text else None

    def interface_names(self, class_name: str) -> tuple[str, ...]:
        cls = self.classes[class_name]
        ctx = self.contexts[cls.file]
        return tuple(self.resolve_type(t, ctx, cls.enclosing) or erasure(t)
                     for t in cls.interface_texts)

    def supertypes(self, class_name: str) -> tuple[str, ...]:
        """In-model superclasses and interfaces, breadth first."""
        cached = self._supertypes.get(class_name)
        if cached is not None:
            return cached
        order: list[str] = []
        pending = [class_name]
        while pending:
            current = pending.pop(0)
            parents = [self._super.get(current), *self._interfaces.get(current, ())]
            for parent in parents:
                if parent and parent != class_name and parent not in order:
                    order.append(parent)
                    pending.append(parent)
        result = tuple(order)
        self._supertypes[class_name] = result
        return result

    def _search_order(self, class_name: str, include_enclosing: bool) -> list[str]:
        order = [class_name, *self.supertypes(class_name)]
        if include_enclosing:
            outer = self.classes[class_name].enclosing if class_name in self.classes else None
            while outer is not None:
                order += [outer, *self.supertypes(outer)]
                outer = self.classes[outer].enclosing
        return order

    def find_field(self, class_name: str, name: str, include_enclosing: bool = True) -> str | None:
        """Class that declares the field *name* visible from *class_name*."""
        if class_name not in self.classes:
            return None
        for candidate in self._search_order(class_name, include_enclosing):
            if name in self._fields.get(candidate, {}):
                return candidate
        return None

    def field_type(self, owner: str, name: str) -> str | None:
        decl = self._fields.get(owner, {}).get(name)
        if decl is None:
            return None
        cls = self.classes[owner]
        return self.resolve_type(decl.type_text, self.contexts[cls.file], owner)

    def find_method(self, class_name: str, name: str, arity: int,
                    include_enclosing: bool = True) -> str | None:
        if class_name not in self.classes:
            return None
        for candidate in self._search_order(class_name, include_enclosing):
            target = self._methods.get(candidate, {}).get((name, arity))
            if target is not None:
                return target
        return None

    def method_owner(self, method_name: str) -> str | None:
        return self._method_owner.get(method_name)


# ====================================================================
#  Source helpers
# ====================================================================

class _LineIndex:
    """Token-line bookkeeping for LOC (non-blank, non-comment lines)."""

    def __init__(self, tokens: list[Any]):
        self._tokens = tokens
        self._starts = [(t.position[0], t.position[1]) for t in tokens]
        self.code_lines = sorted({t.position[0] for t in tokens})

    @property
    def loc(self) -> int:
        return len(self.code_lines)

    def span_loc(self, position: Any) -> int:
        """Code lines from a declaration start to its closing brace or semicolon."""
        if position is None:
            return 0
        line, column = position[0], position[1]
        start = bisect_left(self._starts, (line, column))
        end_line = line
        depth = 0
        for token in self._tokens[start:]:
            value = token.value
            end_line = token.position[0]
            if value == "{":
                depth += 1
            elif value == "}":
                depth -= 1
                if depth == 0:
                    break
            elif value == ";" and depth == 0:
                break
        return bisect_right(self.code_lines, end_line) - bisect_left(self.code_lines, line)


def _read_source(path: Path) -> str:
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        return fh.read()


def _parse(text: str) -> tuple[list[Any], Any]:
    tokens = list(javalang.tokenizer.tokenize(text))
    unit = javalang.parser.Parser(tokens).parse()
    return tokens, unit


def _members(node: Any) -> list[Any]:
    if isinstance(node, jtree.EnumDeclaration):
        body = node.body
        return list(getattr(body, "declarations", None) or []) if body else []
    return list(node.body or [])


def _kind(node: Any) -> str:
    if isinstance(node, jtree.EnumDeclaration):
        return "enum"
    if isinstance(node, (jtree.InterfaceDeclaration, jtree.AnnotationDeclaration)):
        return "interface"
    return "class"


def _visibility(modifiers: Any, in_interface: bool) -> str:
    for level in ("public", "protected", "private"):
        if level in (modifiers or ()):
            return level
    return "public" if in_interface else "package"


def _callables(node: Any) -> list[Any]:
    return [m for m in _members(node)
            if isinstance(m, (jtree.MethodDeclaration, jtree.ConstructorDeclaration))]


def _method_names(class_name: str, members: list[Any]) -> list[str]:
    """Qualified names in declaration order; same-arity overloads get ``~2``, ``~3``."""
    seen: dict[tuple[str, int], int] = {}
    names = []
    for member in members:
        arity = len(member.parameters or ())
        key = (member.name, arity)
        seen[key] = seen.get(key, 0) + 1
        suffix = "" if seen[key] == 1 else f"~{seen[key]}"
        names.append(method_qualified_name(class_name, member.name + suffix, arity))
    return names


def _fields_of(node: Any, class_name: str) -> tuple[FieldEntity, ...]:
    in_interface = _kind(node) == "interface"
    result: list[FieldEntity] = []
    if isinstance(node, jtree.EnumDeclaration) and node.body:
        for constant in node.body.constants or ():
            result.append(FieldEntity(constant.name, "public", True, class_name.rsplit(".", 1)[-1]))
    for member in _members(node):
        if not isinstance(member, (jtree.FieldDeclaration, jtree.ConstantDeclaration)):
            continue
        visibility = _visibility(member.modifiers, in_interface)
        is_static = in_interface or "static" in (member.modifiers or ())
        for declarator in member.declarators:
            result.append(FieldEntity(declarator.name, visibility, is_static, type_text(member.type)))
    return tuple(result)


def _walk_types(node: Any, package: str, prefix: str | None):
    """Yield (qualified name, enclosing name, node) for named type declarations."""
    name = f"{prefix}.{node.name}" if prefix else class_qualified_name(package, node.name)
    yield name, prefix, node
    for member in _members(node):
        if isinstance(member, _TYPE_DECLARATIONS):
            yield from _walk_types(member, package, name)


def _context(path: str, unit: Any) -> FileContext:
    package = unit.package.name if unit.package else ""
    imports: dict[str, str] = {}
    wildcards: list[str] = []
    for imp in unit.imports or ():
        if imp.wildcard:
            wildcards.append(imp.path)
        elif not imp.static:
            imports[imp.path.rsplit(".", 1)[-1]] = imp.path
    return FileContext(path, package, imports, tuple(wildcards))


# ====================================================================
#  Pass 1: declarations
# ====================================================================

def diagnostic(exc: BaseException) -> str:
    """One-line skip reason; javalang syntax errors carry their text in ``description``."""
    kind = type(exc).__name__
    if isinstance(exc, JavaSyntaxError):
        position = getattr(exc.at, "position", None)
        where = f"line {position[0]}, column {position[1]}" if position else "end of input"
        return f"{kind} at {where}: {exc.description or 'unexpected token'}"
    if isinstance(exc, RecursionError):
        return f"{kind}: expression nesting too deep"
    text = str(exc).strip()
    return f"{kind}: {text}" if text else kind


def _load(root: str, rel_path: str) -> tuple[list[Any], Any] | SkippedFile:
    try:
        return _parse(_read_source(Path(root, rel_path)))
    except _PARSE_ERRORS as exc:
        return SkippedFile(rel_path, diagnostic(exc))
    except (OSError, UnicodeError) as exc:
        return SkippedFile(rel_path, f"unreadable: {exc}")


def _declarations(root: str, rel_path: str) -> FileDeclarations | SkippedFile:
    loaded = _load(root, rel_path)
    if isinstance(loaded, SkippedFile):
        return loaded
    return _declare_unit(rel_path, loaded[1])


def _declare_unit(rel_path: str, unit: Any) -> FileDeclarations:
    context = _context(rel_path, unit)
    classes = []
    for top in unit.types or ():
        for qn, enclosing, node in _walk_types(top, context.package, None):
            superclass = None
            interfaces: list[Any] = []
            if isinstance(node, jtree.ClassDeclaration):
                superclass = type_name(node.extends) if node.extends else None
                interfaces = node.implements or []
            elif isinstance(node, jtree.InterfaceDeclaration):
                interfaces = node.extends or []
            elif isinstance(node, jtree.EnumDeclaration):
                interfaces = node.implements or []
            callables = _callables(node)
            classes.append(ClassDecl(
                qualified_name=qn,
                name=node.name,
                kind=_kind(node),
                package=context.package,
                file=rel_path,
                enclosing=enclosing,
                superclass_text=superclass,
                interface_texts=tuple(type_name(i) for i in interfaces),
                fields=_fields_of(node, qn),
                methods=tuple((m.name, len(m.parameters or ()), method_qn)
                              for m, method_qn in zip(callables, _method_names(qn, callables))),
            ))
    return FileDeclarations(context, tuple(classes))


# ====================================================================
#  Pass 2: bodies
# ====================================================================

_WORKER_INDEX: DeclarationIndex | None = None


def _init_worker(index: DeclarationIndex) -> None:
    global _WORKER_INDEX
    _WORKER_INDEX = index


def _scan_in_worker(root: str, rel_path: str) -> tuple[FileEntity, list[ClassEntity]] | SkippedFile:
    assert _WORKER_INDEX is not None
    return _scan_guarded(_WORKER_INDEX, root, rel_path)


def _scan_guarded(index: DeclarationIndex, root: str, rel_path: str,
                  parsed: tuple[list[Any], Any] | None = None,
                  ) -> tuple[FileEntity, list[ClassEntity]] | SkippedFile:
    try:
        return _scan_file(index, root, rel_path, parsed)
    except RecursionError as exc:
        return SkippedFile(rel_path, diagnostic(exc))


def _method_entity(index: DeclarationIndex, context: FileContext, class_name: str,
                   member: Any, qualified: str, in_interface: bool,
                   lines: _LineIndex, refs: set[str]) -> MethodEntity:
    scanner = BodyScanner(index, context, class_name)
    body = scanner.scan_member(member)
    refs.update(scanner.referenced_types)
    modifiers = member.modifiers or set()
    is_constructor = isinstance(member, jtree.ConstructorDeclaration)
    has_body = member.body is not None
    return MethodEntity(
        qualified_name=qualified,
        name=member.name,
        parameters=tuple(Parameter(p.name, type_text(p.type) + ("..." if p.varargs else ""))
                         for p in member.parameters or ()),
        loc=lines.span_loc(member.position),
        visibility=_visibility(modifiers, in_interface),
        is_static="static" in modifiers,
        is_constructor=is_constructor,
        is_abstract="abstract" in modifiers or (in_interface and not has_body),
        body=body,
    )


def _scan_file(index: DeclarationIndex, root: str, rel_path: str,
               parsed: tuple[list[Any], Any] | None = None) -> tuple[FileEntity, list[ClassEntity]]:
    tokens, unit = parsed or _parse(_read_source(Path(root, rel_path)))
    lines = _LineIndex(tokens)
    context = index.contexts[rel_path]
    entities: list[ClassEntity] = []

    for top in unit.types or ():
        for qn, _, node in _walk_types(top, context.package, None):
            in_interface = _kind(node) == "interface"
            refs: set[str] = set()
            callables = _callables(node)
            methods = [
                _method_entity(index, context, qn, member, method_qn, in_interface, lines, refs)
                for member, method_qn in zip(callables, _method_names(qn, callables))
            ]

            # Field types and initializers contribute type references.
            for member in _members(node):
                if isinstance(member, (jtree.FieldDeclaration, jtree.ConstantDeclaration)):
                    scanner = BodyScanner(index, context, qn)
                    scanner.visit(member.type)
                    for declarator in member.declarators:
                        scanner.visit(declarator.initializer)
                    refs.update(scanner.referenced_types)
            for parent in (index.superclass_of(qn), *index.supertypes(qn)):
                if parent:
                    refs.add(parent)
            refs.discard(qn)

            entities.append(ClassEntity(
                qualified_name=qn,
                name=node.name,
                kind=_kind(node),
                package=context.package,
                file=rel_path,
                superclass=index.superclass_text(qn),
                interfaces=index.interface_names(qn),
                fields=index.classes[qn].fields,
                methods=tuple(sorted(methods, key=lambda m: m.qualified_name)),
                loc=lines.span_loc(node.position),
                type_references=tuple(sorted(refs & index.classes.keys())),
            ))
    return FileEntity(rel_path, context.package, tuple(e.qualified_name for e in entities),
                      lines.loc), entities


# ====================================================================
#  Entry point
# ====================================================================

def find_sources(source_root: str | Path) -> list[str]:
    """Relative '/'-separated paths of every ``.java`` file, sorted."""
    root = Path(source_root)
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in filenames:
            if name.endswith(".java"):
                found.append(Path(dirpath, name).relative_to(root).as_posix())
    return sorted(found)


def parse_corpus(source_root: str | Path, system: str, version: str,
                 jobs: int = 1) -> CodeFactsModel:
    """Parse every ``.java`` file below *source_root* into a facts model."""
    root = Path(source_root)
    if not root.is_dir():
        raise ConfigurationError(f"source root does not exist: {root}")

    paths = find_sources(root)
    logger.info("parsing %s %s: %d Java files under %s", system, version, len(paths), root)

    skipped: list[SkippedFile] = []
    declared: list[FileDeclarations] = []
    parsed: dict[str, tuple[list[Any], Any]] = {}

    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_declarations, [str(root)] * len(paths), paths))
    else:
        results = []
        for rel_path in paths:
            loaded = _load(str(root), rel_path)
            if isinstance(loaded, SkippedFile):
                results.append(loaded)
                continue
            parsed[rel_path] = loaded
            results.append(_declare_unit(rel_path, loaded[1]))

    for result in results:
        if isinstance(result, SkippedFile):
            logger.warning("skipping %s: %s", result.path, result.reason)
            skipped.append(result)
        else:
            declared.append(result)

    index = DeclarationIndex(declared)
    scanned = [d.context.path for d in declared]

    if jobs > 1 and len(scanned) > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(index,)) as pool:
            outputs = list(pool.map(_scan_in_worker, [str(root)] * len(scanned), scanned))
    else:
        outputs = [_scan_guarded(index, str(root), p, parsed.get(p)) for p in scanned]

    files: list[FileEntity] = []
    classes: list[ClassEntity] = []
    for output in outputs:
        if isinstance(output, SkippedFile):
            # Declarations of a file skipped here stay out of the model; calls into it
            # become external relations.
            logger.warning("skipping %s: %s", output.path, output.reason)
            skipped.append(output)
            continue
        files.append(output[0])
        classes.extend(output[1])
    return assemble_model(system, version, classes, files=files, skipped=skipped)
