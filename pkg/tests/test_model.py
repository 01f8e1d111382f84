"""Facts model assembly, validation and the facts interchange file."""

from __future__ import annotations

import json
import tempfile
import unittest
from pathlib import Path

from corpus_builders import build, klass, meth

from smellscope.errors import ModelError, SchemaError
from smellscope.model.assemble import assemble_model
from smellscope.model.entities import Relation
from smellscope.model.facts_io import FACTS_SCHEMA, dump_facts, facts_from_dict, read_facts, write_facts


def _sample():
    return build([
        klass("core.Base", fields=("size",), methods=[meth("grow", local=("size",))]),
        klass("core.Child", superclass="core.Base", methods=[
            meth("use", inherited=(("core.Base", "size"),), calls=("core.Base#grow(0)",)),
            meth("log", calls=("java.io.PrintStream#println(1)",)),
        ]),
        klass("ui.View", refs=("core.Child",), methods=[
            meth("show", params=2, foreign=(("core.Base", "size"),)),
        ]),
    ])


class TestAssembly(unittest.TestCase):

    def test_empty_model(self):
        model = assemble_model("sys", "1.0", [])
        self.assertEqual(model.classes, ())
        self.assertEqual(model.relations, ())
        self.assertEqual(model.method_count, 0)

    def test_membership_is_total(self):
        model = _sample()
        self.assertEqual([p.name for p in model.packages], ["core", "ui"])
        self.assertEqual(model.package_index["core"].classes, ("core.Base", "core.Child"))
        self.assertEqual(model.file_index["ui/View.java"].classes, ("ui.View",))

    def test_entities_sorted(self):
        model = build([klass("b.Z"), klass("a.Y"), klass("a.X")])
        self.assertEqual([c.qualified_name for c in model.classes], ["a.X", "a.Y", "b.Z"])

    def test_relations_derived(self):
        rels = set(_sample().relations)
        self.assertIn(Relation("inherits", "core.Child", "core.Base"), rels)
        self.assertIn(Relation("contains", "core/Base.java", "core.Base"), rels)
        self.assertIn(Relation("calls", "core.Child#use(0)", "core.Base#grow(0)"), rels)
        self.assertIn(Relation("accesses_field", "core.Child#use(0)", "core.Base.size"), rels)
        self.assertIn(Relation("accesses_field", "ui.View#show(2)", "core.Base.size"), rels)
        self.assertIn(Relation("depends_on", "ui.View", "core.Child"), rels)
        self.assertIn(Relation("calls", "core.Child#log(0)", "java.io.PrintStream#println(1)",
                               external=True), rels)

    def test_external_superclass_is_marked(self):
        model = build([klass("a.A", superclass="java.lang.Thread")])
        (rel,) = [r for r in model.relations if r.kind == "inherits"]
        self.assertTrue(rel.external)
        self.assertIsNone(model.in_model_superclass(model.classes[0]))

    def test_duplicate_class_rejected(self):
        with self.assertRaises(ModelError):
            build([klass("a.A"), klass("a.A", file="a/Other.java")])

    def test_duplicate_method_rejected(self):
        with self.assertRaises(ModelError):
            build([klass("a.A", methods=[meth("m", params=1), meth("m", params=1)])])

    def test_hierarchy_queries(self):
        model = build([
            klass("a.A"),
            klass("a.B", superclass="a.A"),
            klass("a.C", superclass="a.B"),
        ])
        self.assertEqual(model.ancestors("a.C"), ["a.B", "a.A"])
        self.assertEqual(model.descendants("a.A"), ["a.B", "a.C"])
        self.assertEqual(model.subclasses["a.A"], ("a.B",))


class TestFactsFile(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.dir = Path(self._tmp.name)

    def test_round_trip(self):
        model = _sample()
        path = self.dir / "facts.json"
        write_facts(model, path)
        self.assertEqual(read_facts(path), model)

    def test_round_trip_empty(self):
        model = assemble_model("sys", "2.0", [])
        path = self.dir / "empty.json"
        write_facts(model, path)
        data = json.loads(path.read_text(encoding="utf-8"))
        self.assertEqual(data["classes"], [])
        self.assertEqual(read_facts(path), model)

    def test_output_is_stable(self):
        self.assertEqual(dump_facts(_sample()), dump_facts(_sample()))

    def test_schema_version_recorded(self):
        data = json.loads(dump_facts(_sample()))
        self.assertEqual(data["facts_schema"], FACTS_SCHEMA)

    def test_schema_error_names_field(self):
        data = json.loads(dump_facts(_sample()))
        del data["classes"][0]["qualified_name"]
        with self.assertRaises(SchemaError) as ctx:
            facts_from_dict(data, "broken.json")
        self.assertEqual(ctx.exception.field, "qualified_name")

    def test_wrong_type_rejected(self):
        data = json.loads(dump_facts(_sample()))
        data["classes"][0]["loc"] = "many"
        with self.assertRaises(SchemaError) as ctx:
            facts_from_dict(data)
        self.assertEqual(ctx.exception.field, "loc")

    def test_invalid_utf8_is_a_schema_error(self):
        path = self.dir / "facts.json"
        path.write_bytes(b'{"system_name": "\xff\xfe"}')
        with self.assertRaises(SchemaError):
            read_facts(path)


if __name__ == "__main__":
    unittest.main()
