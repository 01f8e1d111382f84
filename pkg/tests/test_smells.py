"""Smell detection rules, the detector fixture suite and class-level lifting."""

from __future__ import annotations

import random
import unittest
from dataclasses import replace

import networkx as nx
from corpus_builders import DETECTOR_EXPECTED, build, detector_fixture, klass, meth

from smellscope.errors import ConsistencyError
from smellscope.metrics import compute_metrics
from smellscope.metrics.records import CLASS, METHOD, MetricRecord
from smellscope.settings import ThresholdConfig
from smellscope.smells import detect_smells, lift_to_class_level
from smellscope.smells.architecture_rules import detect_architectural_smells, detect_cycles
from smellscope.smells.catalog import REPORT_ROWS, Granularity, SmellId, SmellInstance
from smellscope.smells.class_rules import detect_class_smells, is_data_class, is_god_class
from smellscope.smells.lifting import class_presence, class_smell_counts
from smellscope.smells.method_rules import detect_method_smells, is_feature_envy


def _class_record(**values) -> MetricRecord:
    return MetricRecord("x.X", CLASS, values)


def _fired(model, config=None) -> set[tuple[SmellId, str]]:
    config = config or ThresholdConfig()
    return {(s.smell_id, s.anchor) for s in detect_smells(compute_metrics(model), model, config)}


# ====================================================================
#  Detector fixture
# ====================================================================

class TestDetectorFixture(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.model = detector_fixture()
        cls.metrics = compute_metrics(cls.model)
        cls.native = detect_smells(cls.metrics, cls.model, ThresholdConfig())
        cls.lifted = lift_to_class_level(cls.native, cls.model)
        cls.presence = class_presence(cls.lifted)

    def test_expected_smells_per_class(self):
        for cls in self.model.classes:
            name = cls.qualified_name
            with self.subTest(cls=name):
                self.assertEqual(self.presence.get(name, set()), DETECTOR_EXPECTED.get(name, set()))

    def test_every_report_row_is_exercised(self):
        seen = set().union(*self.presence.values())
        self.assertEqual(seen, set(REPORT_ROWS))

    def test_god_and_brain_exclusive(self):
        for name, labels in self.presence.items():
            self.assertFalse({"God Class", "Brain Class"} <= labels, name)

    def test_only_catalogued_ids(self):
        self.assertTrue(all(isinstance(s.smell_id, SmellId) for s in self.native))
        self.assertLessEqual({s.smell_id for s in self.native}, set(SmellId))

    def test_output_sorted(self):
        keys = [s.sort_key for s in self.native]
        self.assertEqual(keys, sorted(keys))

    def test_evidence_holds_consulted_metrics(self):
        god = [s for s in self.native if s.smell_id is SmellId.GOD_CLASS]
        self.assertEqual(len(god), 1)
        self.assertEqual(dict(god[0].evidence), {"ATFD": 6, "WMC": 54, "TCC": 0.0})
        envy = [s for s in self.native if s.smell_id is SmellId.FEATURE_ENVY]
        self.assertEqual(envy[0].anchor, "app.FE#envy(0)")
        self.assertEqual(set(envy[0].evidence), {"ATFD_m", "LAA", "FDP"})

    def test_class_instances_lift_to_anchor(self):
        for s in self.native:
            if s.granularity is Granularity.CLASS:
                self.assertEqual(s.lifted_classes, frozenset({s.anchor}))

    def test_metric_ranges(self):
        for record in self.metrics.of(CLASS):
            with self.subTest(cls=record.entity):
                self.assertGreaterEqual(record["WMC"], record["NOM"])
                for metric in ("TCC", "WOC", "BUR", "BOvR"):
                    self.assertGreaterEqual(record[metric], 0.0)
                    self.assertLessEqual(record[metric], 1.0)
        for record in self.metrics.of(METHOD):
            self.assertTrue(0.0 <= record["LAA"] <= 1.0)


# ====================================================================
#  Individual rules
# ====================================================================

class TestClassRules(unittest.TestCase):

    def test_god_class(self):
        config = ThresholdConfig()
        self.assertTrue(is_god_class(_class_record(ATFD=6, WMC=50, TCC=0.2), config))
        self.assertFalse(is_god_class(_class_record(ATFD=6, WMC=50, TCC=0.5), config))
        self.assertFalse(is_god_class(_class_record(ATFD=5, WMC=50, TCC=0.2), config))

    def test_empty_class_is_only_lazy(self):
        model = build([klass("a.Empty", loc=3)])
        found = detect_class_smells(compute_metrics(model), model, ThresholdConfig())
        self.assertEqual([s.smell_id for s in found], [SmellId.LAZY_CLASS])

    def test_data_class_modes(self):
        loose = ThresholdConfig()
        strict = ThresholdConfig(data_class_strict=True)
        mid = _class_record(WOC=0.0, NOPA=6, NOAM=0, WMC=40)
        self.assertTrue(is_data_class(mid, loose))
        self.assertFalse(is_data_class(mid, strict))
        wide = _class_record(WOC=0.0, NOPA=6, NOAM=3, WMC=40)
        self.assertTrue(is_data_class(wide, strict))
        busy = _class_record(WOC=0.5, NOPA=9, NOAM=0, WMC=0)
        self.assertFalse(is_data_class(busy, loose))

    def test_refused_bequest_needs_in_model_parent(self):
        model = build([klass("a.T", superclass="java.lang.Thread", methods=[meth("run")])])
        self.assertNotIn(SmellId.REFUSED_BEQUEST, {s for s, _ in _fired(model)})


class TestMethodRules(unittest.TestCase):

    def test_long_parameter_list(self):
        model = build([klass("a.M", methods=[meth("wide", params=6), meth("tiny", loc=3)])])
        found = detect_method_smells(compute_metrics(model), model, ThresholdConfig())
        self.assertEqual([(s.smell_id, s.anchor) for s in found],
                         [(SmellId.LONG_PARAMETER_LIST, "a.M#wide(6)")])

    def test_feature_envy(self):
        record = MetricRecord("a.M#m(0)", METHOD, {"ATFD_m": 6, "LAA": 0.2, "FDP": 3})
        self.assertTrue(is_feature_envy(record, ThresholdConfig()))
        record = MetricRecord("a.M#m(0)", METHOD, {"ATFD_m": 6, "LAA": 0.2, "FDP": 6})
        self.assertFalse(is_feature_envy(record, ThresholdConfig()))

    def test_long_method_boundary(self):
        model = build([klass("a.M", methods=[meth("at", loc=50), meth("over", loc=51)])])
        fired = _fired(model)
        self.assertIn((SmellId.LONG_METHOD, "a.M#over(0)"), fired)
        self.assertNotIn((SmellId.LONG_METHOD, "a.M#at(0)"), fired)


class TestMonotonicity(unittest.TestCase):

    LOWER_BOUNDS = ("high_cyclo", "large_class_loc", "long_method_loc", "long_params",
                    "brain_method_loc", "brain_nesting", "brain_noav", "shotgun_cm", "shotgun_cc")

    def test_raising_lower_bounds_never_adds(self):
        model = detector_fixture()
        base = ThresholdConfig()
        before = _fired(model, base)
        for key in self.LOWER_BOUNDS:
            with self.subTest(threshold=key):
                raised = replace(base, **{key: getattr(base, key) + 5})
                self.assertLessEqual(_fired(model, raised), before)

    def test_lowering_upper_bounds_never_adds(self):
        model = detector_fixture()
        base = ThresholdConfig()
        before = _fired(model, base)
        for key in ("lazy_class_loc", "lazy_class_nom"):
            with self.subTest(threshold=key):
                lowered = replace(base, **{key: max(1, getattr(base, key) - 2)})
                self.assertLessEqual(_fired(model, lowered), before)


# ====================================================================
#  Architectural rules
# ====================================================================

def _mutually_reachable(graph: nx.DiGraph) -> set[str]:
    reach = {}
    for node in graph.nodes:
        seen, stack = set(), list(graph.successors(node))
        while stack:
            nxt = stack.pop()
            if nxt not in seen:
                seen.add(nxt)
                stack.extend(graph.successors(nxt))
        reach[node] = seen
    return {u for u in graph.nodes for v in graph.nodes
            if u != v and v in reach[u] and u in reach[v]}


class TestArchitecturalRules(unittest.TestCase):

    def test_cycle_example(self):
        model = build([klass("a.A", refs=("a.B",)), klass("a.B", refs=("a.A", "a.C")), klass("a.C")])
        cyclic = {a for s, a in _fired(model) if s is SmellId.CYCLIC_DEPENDENCY}
        self.assertEqual(cyclic, {"a.A", "a.B"})

    def test_acyclic_package_chain(self):
        model = build([klass("p1.A", refs=("p2.B",)), klass("p2.B", refs=("p3.C",)), klass("p3.C")])
        found = detect_architectural_smells(compute_metrics(model), model, ThresholdConfig())
        self.assertFalse([s for s in found if s.smell_id is SmellId.CYCLIC_DEPENDENCY])

    def test_scc_matches_reachability_oracle(self):
        rng = random.Random(20240601)
        for trial in range(200):
            n = rng.randint(1, 12)
            graph = nx.DiGraph()
            graph.add_nodes_from(f"n{i}" for i in range(n))
            density = rng.random() * 0.4
            for u in range(n):
                for v in range(n):
                    if u != v and rng.random() < density:
                        graph.add_edge(f"n{u}", f"n{v}")
            found = {s.anchor for s in detect_cycles(graph, Granularity.CLASS)}
            with self.subTest(trial=trial):
                self.assertEqual(found, _mutually_reachable(graph))

    def test_parent_calling_subclass(self):
        model = build([
            klass("a.P", methods=[meth("go", calls=("a.C#step(0)",))]),
            klass("a.C", superclass="a.P", methods=[meth("step")]),
        ])
        found = detect_architectural_smells(compute_metrics(model), model, ThresholdConfig())
        uih = [s for s in found if s.smell_id is SmellId.UNHEALTHY_INHERITANCE_HIERARCHY]
        self.assertEqual([(s.granularity, s.anchor) for s in uih], [(Granularity.FILE, "a/P.java")])
        self.assertEqual(uih[0].evidence["subclass_dependencies"], 1)

    def test_plain_hierarchy_is_healthy(self):
        model = build([klass("a.P"), klass("a.C", superclass="a.P"), klass("a.K", refs=("a.C",))])
        self.assertNotIn(SmellId.UNHEALTHY_INHERITANCE_HIERARCHY, {s for s, _ in _fired(model)})


# ====================================================================
#  Lifting
# ====================================================================

class TestLifting(unittest.TestCase):

    def setUp(self):
        self.model = build([
            klass("app.A", methods=[meth("think")]),
            klass("app.D", file="app/DE.java"),
            klass("app.E", file="app/DE.java"),
            klass("lib.F"),
            klass("lib.G"),
        ])

    def test_method_lifts_to_owner(self):
        (lifted,) = lift_to_class_level(
            [SmellInstance(SmellId.BRAIN_METHOD, Granularity.METHOD, "app.A#think(0)")], self.model)
        self.assertEqual(lifted.lifted_classes, frozenset({"app.A"}))

    def test_file_lifts_to_its_classes(self):
        (lifted,) = lift_to_class_level(
            [SmellInstance(SmellId.UNHEALTHY_INHERITANCE_HIERARCHY, Granularity.FILE, "app/DE.java")],
            self.model)
        self.assertEqual(lifted.lifted_classes, frozenset({"app.D", "app.E"}))

    def test_package_lifts_to_its_classes(self):
        (lifted,) = lift_to_class_level(
            [SmellInstance(SmellId.UNSTABLE_DEPENDENCY, Granularity.PACKAGE, "lib")], self.model)
        self.assertEqual(lifted.lifted_classes, frozenset({"lib.F", "lib.G"}))

    def test_class_lift_is_identity(self):
        native = SmellInstance(SmellId.GOD_CLASS, Granularity.CLASS, "app.A", frozenset({"app.A"}))
        self.assertEqual(lift_to_class_level([native], self.model), [native])

    def test_missing_anchor_is_fatal(self):
        with self.assertRaises(ConsistencyError):
            lift_to_class_level(
                [SmellInstance(SmellId.LONG_METHOD, Granularity.METHOD, "app.A#gone(0)")], self.model)

    def test_count_preserved(self):
        native = [
            SmellInstance(SmellId.LONG_METHOD, Granularity.METHOD, "app.A#think(0)"),
            SmellInstance(SmellId.CYCLIC_DEPENDENCY, Granularity.PACKAGE, "lib"),
            SmellInstance(SmellId.UNHEALTHY_INHERITANCE_HIERARCHY, Granularity.FILE, "app/DE.java"),
        ]
        lifted = lift_to_class_level(native, self.model)
        self.assertEqual(len(lifted), len(native))
        self.assertTrue(all(s.lifted_classes for s in lifted))

    def test_package_lifting_can_be_disabled(self):
        native = [
            SmellInstance(SmellId.LONG_METHOD, Granularity.METHOD, "app.A#think(0)"),
            SmellInstance(SmellId.CYCLIC_DEPENDENCY, Granularity.PACKAGE, "lib"),
        ]
        lifted = lift_to_class_level(native, self.model, lift_packages=False)
        self.assertEqual([s.smell_id for s in lifted], [SmellId.LONG_METHOD])

    def test_presence_and_counts(self):
        lifted = lift_to_class_level([
            SmellInstance(SmellId.LONG_METHOD, Granularity.METHOD, "app.A#think(0)"),
            SmellInstance(SmellId.CYCLIC_DEPENDENCY, Granularity.PACKAGE, "lib"),
            SmellInstance(SmellId.CYCLIC_DEPENDENCY, Granularity.CLASS, "lib.F", frozenset({"lib.F"})),
        ], self.model)
        presence = class_presence(lifted)
        self.assertEqual(presence["lib.F"], {"Package Cyclic Dependency", "Class Cyclic Dependency"})
        self.assertEqual(presence["app.A"], {"Long Method"})
        counts = class_smell_counts(lifted)
        self.assertEqual(counts["lib.F"], 2)
        self.assertEqual(counts["lib.G"], 1)


if __name__ == "__main__":
    unittest.main()
