"""Method-body visitor over javalang trees.

Collects decision points, attribute accesses (own, inherited, foreign),
outgoing calls, variables and nesting depth for one method.  Anonymous
classes and lambda bodies are walked in place, so their facts are folded
into the enclosing method.
"""

from __future__ import annotations

import re
from collections import ChainMap
from collections.abc import Iterator
from contextlib import contextmanager
from typing import TYPE_CHECKING, Any

from javalang import tree as jtree
from javalang.ast import Node

from smellscope.model.entities import AttributeAccess, BodyFacts

if TYPE_CHECKING:
    from smellscope.parser.java_parser import DeclarationIndex, FileContext

_ACCESSOR = re.compile(r"^(get|set|is)([A-Z]\w*)$")
_SHORT_CIRCUIT = ("&&", "||")


def accessor_attribute(name: str, arity: int) -> str | None:
    """Attribute name behind a getX/setX/isX call with at most one argument."""
    match = _ACCESSOR.match(name)
    if match is None or arity > 1:
        return None
    rest = match.group(2)
    return rest[0].lower() + rest[1:]


def type_name(node: Any) -> str:
    """Dotted type name without generics or array dimensions."""
    if isinstance(node, jtree.BasicType):
        return node.name
    parts: list[str] = []
    while isinstance(node, jtree.ReferenceType):
        parts.append(node.name)
        node = node.sub_type
    return ".".join(parts)


def type_text(node: Any) -> str:
    """Raw type text including generic arguments and dimensions."""
    if node is None:
        return ""
    if isinstance(node, jtree.BasicType):
        return node.name + "[]" * len(node.dimensions or [])
    parts: list[str] = []
    outer = node
    while isinstance(node, jtree.ReferenceType):
        text = node.name
        if node.arguments:
            text += "<" + ", ".join(_argument_text(a) for a in node.arguments) + ">"
        parts.append(text)
        node = node.sub_type
    return ".".join(parts) + "[]" * len(getattr(outer, "dimensions", None) or [])


def _argument_text(arg: Any) -> str:
    if getattr(arg, "type", None) is None:
        return "?"
    inner = type_text(arg.type)
    if arg.pattern_type in ("extends", "super"):
        return f"? {arg.pattern_type} {inner}"
    return inner


class BodyScanner:
    """Walk one member body and accumulate its facts."""

    def __init__(self, index: DeclarationIndex, context: FileContext, class_name: str):
        self._index = index
        self._context = context
        self._class = class_name
        self._supertypes = set(index.supertypes(class_name))
        self._locals: ChainMap[str, str] = ChainMap()

        self.decision_points: list[str] = []
        self.max_nesting = 0
        self.referenced_types: set[str] = set()
        self._local: set[str] = set()
        self._inherited: set[AttributeAccess] = set()
        self._foreign: set[AttributeAccess] = set()
        self._calls: set[str] = set()
        self._external: set[str] = set()
        self._variables: set[str] = set()

    # ----------------------------------------------------------------
    def scan_member(self, declaration: Any) -> BodyFacts:
        for param in getattr(declaration, "parameters", None) or ():
            self.visit(param)
        self.visit(getattr(declaration, "return_type", None))
        for thrown in getattr(declaration, "throws", None) or ():
            self._reference(thrown)
        self.visit(declaration.body)
        return self.facts()

    def facts(self) -> BodyFacts:
        return BodyFacts(
            decision_points=tuple(self.decision_points),
            local_accesses=tuple(sorted(self._local)),
            inherited_accesses=tuple(sorted(self._inherited)),
            foreign_accesses=tuple(sorted(self._foreign)),
            calls=tuple(sorted(self._calls)),
            external_calls=tuple(sorted(self._external - self._calls)),
            accessed_variables=tuple(sorted(self._variables)),
            max_nesting=self.max_nesting,
        )

    # ----------------------------------------------------------------
    #  Dispatch
    # ----------------------------------------------------------------
    def visit(self, node: Any, depth: int = 0) -> None:
        if isinstance(node, (list, tuple)):
            for item in node:
                self.visit(item, depth)
            return
        if not isinstance(node, Node):
            return
        handler = getattr(self, f"visit_{type(node).__name__}", None)
        if handler is None:
            self.generic_visit(node, depth)
        else:
            handler(node, depth)

    def generic_visit(self, node: Node, depth: int) -> None:
        for attr, child in zip(node.attrs, node.children):
            if attr == "selectors":
                self._visit_chained(child, depth)
            else:
                self.visit(child, depth)

    def _visit_chained(self, selectors: Any, depth: int) -> None:
        # Owners of chained selectors are unknown without full type inference.
        for sel in selectors or ():
            if isinstance(sel, jtree.MethodInvocation):
                self.visit(sel.arguments, depth)
                self._visit_chained(sel.selectors, depth)
            elif isinstance(sel, jtree.ArraySelector):
                self.visit(sel.index, depth)
            elif not isinstance(sel, jtree.MemberReference):
                self.visit(sel, depth)

    def _enter(self, depth: int) -> int:
        level = depth + 1
        self.max_nesting = max(self.max_nesting, level)
        return level

    def _nested(self, node: Node, depth: int) -> None:
        with self._scope():
            self.generic_visit(node, self._enter(depth))

    @contextmanager
    def _scope(self) -> Iterator[None]:
        self._locals = self._locals.new_child()
        try:
            yield
        finally:
            self._locals = self._locals.parents

    # ----------------------------------------------------------------
    #  Control flow
    # ----------------------------------------------------------------
    def visit_IfStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        self.decision_points.append("if")
        level = self._enter(depth)
        self.visit(node.condition, depth)
        self.visit(node.then_statement, level)
        # else-if chains stay on the same level
        if isinstance(node.else_statement, jtree.IfStatement):
            self.visit(node.else_statement, depth)
        else:
            self.visit(node.else_statement, level)

    def visit_ForStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        self.decision_points.append("for")
        self._nested(node, depth)

    def visit_WhileStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        self.decision_points.append("while")
        self._nested(node, depth)

    def visit_DoStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        self.decision_points.append("do")
        self._nested(node, depth)

    def visit_SwitchStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        self._nested(node, depth)

    def visit_TryStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        self._nested(node, depth)

    def visit_SwitchStatementCase(self, node: Any, depth: int) -> None:  # noqa: N802
        labels = [label for label in node.case or () if label != "default"]
        self.decision_points.extend(["case"] * len(labels))
        self.generic_visit(node, depth)

    def visit_CatchClause(self, node: Any, depth: int) -> None:  # noqa: N802
        self.decision_points.append("catch")
        with self._scope():
            param = node.parameter
            if param is not None:
                types = param.types or []
                self._declare(param.name, types[0] if types else "")
                for name in types:
                    self._reference(name)
            self.visit(node.block, depth)

    def visit_BlockStatement(self, node: Any, depth: int) -> None:  # noqa: N802
        with self._scope():
            self.generic_visit(node, depth)

    def visit_LambdaExpression(self, node: Any, depth: int) -> None:  # noqa: N802
        with self._scope():
            self.generic_visit(node, depth)

    def visit_TernaryExpression(self, node: Any, depth: int) -> None:  # noqa: N802
        self.decision_points.append("?:")
        self.generic_visit(node, depth)

    def visit_BinaryOperation(self, node: Any, depth: int) -> None:  # noqa: N802
        # Operator chains nest to the left; walk that spine in a loop.
        right: list[Any] = []
        while isinstance(node, jtree.BinaryOperation):
            if node.operator in _SHORT_CIRCUIT:
                self.decision_points.append(node.operator)
            right.append(node.operandr)
            node = node.operandl
        self.visit(node, depth)
        for operand in reversed(right):
            self.visit(operand, depth)

    # ----------------------------------------------------------------
    #  Declarations
    # ----------------------------------------------------------------
    def visit_LocalVariableDeclaration(self, node: Any, depth: int) -> None:  # noqa: N802
        for declarator in node.declarators or ():
            self._declare(declarator.name, type_name(node.type))
        self.generic_visit(node, depth)

    visit_VariableDeclaration = visit_LocalVariableDeclaration

    def visit_FormalParameter(self, node: Any, depth: int) -> None:  # noqa: N802
        self._declare(node.name, type_name(node.type))
        self.generic_visit(node, depth)

    def visit_InferredFormalParameter(self, node: Any, depth: int) -> None:  # noqa: N802
        self._declare(node.name, "")

    def visit_TryResource(self, node: Any, depth: int) -> None:  # noqa: N802
        self._declare(node.name, type_name(node.type))
        self.generic_visit(node, depth)

    def visit_ReferenceType(self, node: Any, depth: int) -> None:  # noqa: N802
        self._reference(type_name(node))
        current = node
        while isinstance(current, jtree.ReferenceType):
            self.visit(current.arguments, depth)
            current = current.sub_type

    def visit_MethodReference(self, node: Any, depth: int) -> None:  # noqa: N802
        self.visit(node.expression, depth)

    # ----------------------------------------------------------------
    #  Accesses and calls
    # ----------------------------------------------------------------
    def visit_MemberReference(self, node: Any, depth: int) -> None:  # noqa: N802
        if node.qualifier:
            owner = self._qualifier_type(node.qualifier)
            if owner is not None:
                self._member_of(owner, node.member)
        else:
            self._simple_name(node.member)
        self._visit_chained(node.selectors, depth)

    def visit_MethodInvocation(self, node: Any, depth: int) -> None:  # noqa: N802
        arity = len(node.arguments or ())
        if node.qualifier:
            self._qualified_call(node.qualifier, node.member, arity)
        else:
            self._own_call(node.member, arity)
        self.visit(node.arguments, depth)
        self._visit_chained(node.selectors, depth)

    def visit_This(self, node: Any, depth: int) -> None:  # noqa: N802
        selectors = list(node.selectors or ())
        if selectors:
            first = selectors.pop(0)
            if isinstance(first, jtree.MemberReference):
                owner = self._index.find_field(self._class, first.member)
                if owner is not None:
                    self._attribute(owner, first.member)
            elif isinstance(first, jtree.MethodInvocation):
                self._own_call(first.member, len(first.arguments or ()))
                self.visit(first.arguments, depth)
            else:
                self.visit(first, depth)
        self._visit_chained(selectors, depth)

    def visit_SuperMemberReference(self, node: Any, depth: int) -> None:  # noqa: N802
        parent = self._index.superclass_of(self._class)
        if parent is not None:
            owner = self._index.find_field(parent, node.member)
            if owner is not None:
                self._attribute(owner, node.member)
        self._visit_chained(node.selectors, depth)

    def visit_SuperMethodInvocation(self, node: Any, depth: int) -> None:  # noqa: N802
        arity = len(node.arguments or ())
        parent = self._index.superclass_of(self._class)
        target = self._index.find_method(parent, node.member, arity) if parent else None
        if target is not None:
            self._calls.add(target)
        else:
            self._external.add(f"super#{node.member}({arity})")
        self.visit(node.arguments, depth)
        self._visit_chained(node.selectors, depth)

    # ----------------------------------------------------------------
    #  Resolution helpers
    # ----------------------------------------------------------------
    def _declare(self, name: str, type_name_text: str) -> None:
        self._locals[name] = type_name_text
        self._variables.add(name)

    def _reference(self, name: str) -> str | None:
        resolved = self._index.resolve_type(name, self._context, self._class)
        if resolved is not None and resolved != self._class:
            self.referenced_types.add(resolved)
        return resolved

    def _attribute(self, owner: str, name: str) -> None:
        self._variables.add(f"{owner}.{name}")
        if owner == self._class:
            self._local.add(name)
        elif owner in self._supertypes:
            self._inherited.add(AttributeAccess(owner, name))
        else:
            self._foreign.add(AttributeAccess(owner, name))
            self.referenced_types.add(owner)

    def _simple_name(self, name: str) -> None:
        if name in self._locals:
            self._variables.add(name)
            return
        owner = self._index.find_field(self._class, name)
        if owner is not None:
            self._attribute(owner, name)

    def _member_of(self, owner_type: str, member: str) -> None:
        declaring = self._index.find_field(owner_type, member, include_enclosing=False)
        if declaring is not None:
            self._attribute(declaring, member)
        elif f"{owner_type}.{member}" in self._index.classes:
            self._reference(f"{owner_type}.{member}")

    def _name_type(self, name: str) -> str | None:
        """Class that `name.` navigates into: a local, a field, or a class name."""
        if name in self._locals:
            text = self._locals[name]
            return self._index.resolve_type(text, self._context, self._class) if text else None
        owner = self._index.find_field(self._class, name)
        if owner is not None:
            self._attribute(owner, name)
            return self._index.field_type(owner, name)
        return self._reference(name)

    def _qualifier_type(self, qualifier: str) -> str | None:
        head, *rest = qualifier.split(".")
        if rest and head not in self._locals and self._index.find_field(self._class, head) is None:
            whole = self._reference(qualifier)
            if whole is not None:
                return whole
        current = self._name_type(head)
        for segment in rest:
            if current is None:
                return None
            declaring = self._index.find_field(current, segment, include_enclosing=False)
            if declaring is None:
                nested = f"{current}.{segment}"
                current = nested if nested in self._index.classes else None
                continue
            self._attribute(declaring, segment)
            current = self._index.field_type(declaring, segment)
        return current

    def _own_call(self, member: str, arity: int) -> None:
        target = self._index.find_method(self._class, member, arity)
        if target is not None:
            self._calls.add(target)
        else:
            self._external.add(f"?#{member}({arity})")

    def _qualified_call(self, qualifier: str, member: str, arity: int) -> None:
        owner = self._qualifier_type(qualifier)
        if owner is None:
            label = self._locals.get(qualifier) or qualifier
            self._external.add(f"{label}#{member}({arity})")
            return
        if owner != self._class:
            self.referenced_types.add(owner)
        target = self._index.find_method(owner, member, arity, include_enclosing=False)
        if target is not None:
            self._calls.add(target)
        else:
            self._external.add(f"{owner}#{member}({arity})")

        attribute = accessor_attribute(member, arity)
        if attribute is None:
            return
        declaring = self._index.method_owner(target) if target else owner
        if declaring != self._class and declaring not in self._supertypes:
            self._variables.add(f"{declaring}.{attribute}")
            self._foreign.add(AttributeAccess(declaring, attribute))
