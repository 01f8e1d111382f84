"""Programmatic facts-model builders shared by the test suites."""

from __future__ import annotations

from dataclasses import replace

from smellscope.model.assemble import assemble_model
from smellscope.model.entities import (
    AttributeAccess,
    BodyFacts,
    ClassEntity,
    CodeFactsModel,
    FieldEntity,
    MethodEntity,
    Parameter,
    method_qualified_name,
)


def meth(name: str, *, params: int = 0, loc: int = 10, decisions: int = 0, nesting: int = 0,
         local: tuple[str, ...] = (), inherited: tuple[tuple[str, str], ...] = (),
         foreign: tuple[tuple[str, str], ...] = (), calls: tuple[str, ...] = (),
         variables: tuple[str, ...] = (), visibility: str = "package",
         constructor: bool = False) -> MethodEntity:
    """Method without an owner yet; ``klass`` fills in the qualified name."""
    return MethodEntity(
        qualified_name="",
        name=name,
        parameters=tuple(Parameter(f"p{i}", "int") for i in range(params)),
        loc=loc,
        visibility=visibility,
        is_constructor=constructor,
        body=BodyFacts(
            decision_points=("if",) * decisions,
            local_accesses=tuple(local),
            inherited_accesses=tuple(AttributeAccess(o, n) for o, n in inherited),
            foreign_accesses=tuple(AttributeAccess(o, n) for o, n in foreign),
            calls=tuple(calls),
            accessed_variables=tuple(variables),
            max_nesting=nesting,
        ),
    )


def field(name: str, visibility: str = "package", is_static: bool = False) -> FieldEntity:
    return FieldEntity(name, visibility, is_static, "int")


def klass(qualified_name: str, *, loc: int = 45, fields=(), methods=(), superclass=None,
          refs=(), file: str | None = None, kind: str = "class") -> ClassEntity:
    package, _, name = qualified_name.rpartition(".")
    return ClassEntity(
        qualified_name=qualified_name,
        name=name,
        kind=kind,
        package=package,
        file=file or f"{package.replace('.', '/')}/{name}.java",
        superclass=superclass,
        fields=tuple(f if isinstance(f, FieldEntity) else field(f) for f in fields),
        methods=tuple(replace(m, qualified_name=method_qualified_name(qualified_name, m.name, m.arity))
                      for m in methods),
        loc=loc,
        type_references=tuple(refs),
    )


def build(classes, system: str = "fixture", version: str = "1.0") -> CodeFactsModel:
    return assemble_model(system, version, classes)


# ====================================================================
#  Detector fixture: one class per smell plus clean controls
# ====================================================================

STORES = tuple(f"app.S{i}" for i in range(6))


def _detector_classes() -> list[ClassEntity]:
    classes = [klass(name, fields=("value", "count") if name == "app.S0" else ("value",))
               for name in STORES]

    # God Class: six foreign owners, WMC 54, no shared attributes
    classes.append(klass(
        "app.G", loc=200, fields=[f"f{i}" for i in range(6)],
        methods=[meth(f"run{i}", loc=20, decisions=8, local=(f"f{i}",),
                      foreign=((STORES[i], "value"),)) for i in range(6)]))

    # Brain Class around one Brain Method (also Long Method and Complex Class)
    classes.append(klass(
        "app.BR", loc=120, fields=("f1", "f2", "f3"),
        methods=[meth("think", loc=70, decisions=46, nesting=5, local=("f3",),
                      variables=("a", "b", "c", "d", "e", "g")),
                 meth("one", local=("f1",)),
                 meth("two", local=("f2",))]))

    classes += [
        klass("app.CX", loc=60, methods=[meth("branchy", loc=30, decisions=9)]),
        klass("app.L", loc=600, methods=[meth(f"m{i}") for i in range(4)]),
        klass("app.Z", loc=10, methods=[meth("only", loc=3)]),
        klass("app.E", loc=3),
        klass("app.D", fields=[field(f"x{i}", "public") for i in range(6)]),
        klass("app.FE", methods=[meth("envy", loc=20, foreign=(
            ("app.S0", "value"), ("app.S0", "count"), ("app.S1", "value"),
            ("app.S2", "value"), ("app.S3", "value"), ("app.S4", "value")))]),
        klass("app.LM", loc=80, methods=[meth("long", loc=60)]),
        klass("app.LP", methods=[meth("wide", params=5)]),
        klass("app.SS", methods=[meth("target")]),
    ]
    # Shotgun Surgery callers: ten methods in five classes
    classes += [klass(f"app.C{i}", methods=[meth("a", calls=("app.SS#target(0)",)),
                                            meth("b", calls=("app.SS#target(0)",))])
                for i in range(5)]

    # Hub-Like Dependency: two clients in, two stores out
    classes += [
        klass("app.H", refs=("app.S0", "app.S5")),
        klass("app.HC1", refs=("app.H",)),
        klass("app.HC2", refs=("app.H",)),
    ]

    # Refused Bequest: child ignores its parent's protected state
    classes += [
        klass("app.RP", fields=[field("state", "protected")],
              methods=[meth("serve", visibility="public")]),
        klass("app.RB", superclass="app.RP", methods=[meth("work")]),
    ]

    # Unhealthy Inheritance Hierarchy: client depends on parent and child
    classes += [
        klass("app.UP"),
        klass("app.UC", superclass="app.UP", refs=("app.S1", "app.S2")),
        klass("app.UK", refs=("app.UP", "app.UC")),
    ]

    # Class cycle; extra out edges keep A and B away from the hub rule
    classes += [
        klass("app.A", refs=("app.B", "app.S0", "app.S1", "app.S2")),
        klass("app.B", refs=("app.A", "app.S3", "app.S4", "app.S5")),
    ]

    # Package cycle p1 -> p2 -> p1 without a class cycle
    classes += [
        klass("p1.X1", refs=("p2.Y1",)),
        klass("p1.X2"),
        klass("p2.Y1"),
        klass("p2.Y2", refs=("p1.X2",)),
    ]

    # Unstable Dependency: s (I = 1/2) depends on u (I = 2/3)
    classes += [
        klass("q.Top", refs=("s.Mid1",)),
        klass("s.Mid1"),
        klass("s.Mid2", refs=("u.Low1",)),
        klass("u.Low1"),
        klass("u.Low2", refs=("v.Leaf", "w.Leaf")),
        klass("v.Leaf"),
        klass("w.Leaf"),
    ]

    # Clean controls
    classes += [klass(f"app.N{i}", loc=100, fields=("shared",),
                      methods=[meth("x", decisions=1, local=("shared",)),
                               meth("y", decisions=1, local=("shared",))])
                for i in range(3)]
    return classes


def detector_fixture() -> CodeFactsModel:
    return build(_detector_classes())


DETECTOR_EXPECTED: dict[str, set[str]] = {
    "app.G": {"God Class"},
    "app.BR": {"Brain Class", "Brain Method", "Long Method", "Complex Class"},
    "app.CX": {"Complex Class"},
    "app.L": {"Large Class"},
    "app.Z": {"Lazy Class"},
    "app.E": {"Lazy Class"},
    "app.D": {"Data Class"},
    "app.FE": {"Feature Envy"},
    "app.LM": {"Long Method"},
    "app.LP": {"Long Parameter List"},
    "app.SS": {"Shotgun Surgery"},
    "app.H": {"Hub-Like Dependency"},
    "app.RB": {"Refused Bequest"},
    "app.UP": {"Unhealthy Inheritance Hierarchy"},
    "app.A": {"Class Cyclic Dependency"},
    "app.B": {"Class Cyclic Dependency"},
    "p1.X1": {"Package Cyclic Dependency"},
    "p1.X2": {"Package Cyclic Dependency"},
    "p2.Y1": {"Package Cyclic Dependency"},
    "p2.Y2": {"Package Cyclic Dependency"},
    "s.Mid1": {"Unstable Dependency"},
    "s.Mid2": {"Unstable Dependency"},
}
