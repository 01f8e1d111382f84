"""Command-line pipeline over the bundled mini corpus and over prepared facts files."""

from __future__ import annotations

import csv
import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from corpus_builders import detector_fixture

from smellscope.__main__ import main
from smellscope.app import _move_outputs
from smellscope.errors import ConfigurationError
from smellscope.model.facts_io import write_facts

MINICORPUS = Path(__file__).parent / "data" / "minicorpus"


def _csv_rows(path: Path) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


class _TempCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.dir = Path(self._tmp.name)


class TestRunPipeline(_TempCase):

    def run_minicorpus(self, name: str) -> Path:
        out = self.dir / name
        code = main(["--out-dir", str(out), "--quiet", "run", str(MINICORPUS / "run.conf")])
        self.assertEqual(code, 0)
        return out

    def test_bundle_contents(self):
        out = self.run_minicorpus("out")
        for name in ("bundle.json", "table3.csv", "table4.csv", "table4-shop.csv",
                     "distribution.csv", "corpus_summary.csv", "unmatched_labels.csv",
                     "thresholds.conf", "facts-shop-1.0.json", "metrics-shop-1.1.csv",
                     "smells-shop-1.1.csv"):
            self.assertTrue((out / name).is_file(), name)

        bundle = json.loads((out / "bundle.json").read_text(encoding="utf-8"))
        self.assertEqual(set(bundle["files"]), {p.name for p in out.iterdir()})
        self.assertEqual(bundle["thresholds"]["long_params"], 6)
        versions = {v["version"]: v for v in bundle["versions"]}
        self.assertEqual(versions["1.0"]["classes"], 9)
        self.assertEqual(versions["1.0"]["skipped_files"], 1)
        self.assertEqual(versions["1.1"]["classes"], 10)
        self.assertEqual(bundle["unmatched_labels"], 2)

    def test_report_tables(self):
        out = self.run_minicorpus("out")
        table3 = _csv_rows(out / "table3.csv")
        self.assertEqual(table3[0], ["system", "release", "a", "b", "c", "d", "p", "OR"])
        self.assertEqual([r[:2] for r in table3[1:]], [["shop", "1"], ["shop", "Total"],
                                                        ["Combined", ""]])
        cells = [int(x) for x in table3[1][2:6]]
        # three distinct vulnerable classes, ten classes across both versions
        self.assertEqual(cells[0] + cells[1], 3)
        self.assertEqual(sum(cells), 10)

        table4 = _csv_rows(out / "table4.csv")
        self.assertEqual(len(table4), 1 + 17)
        unmatched = _csv_rows(out / "unmatched_labels.csv")
        self.assertEqual([(r[0], r[3]) for r in unmatched[1:]],
                         [("CVE-2020-0004", "class not found in version"),
                          ("CVE-2021-0005", "version not analysed")])

    def test_runs_are_byte_identical(self):
        first, second = self.run_minicorpus("first"), self.run_minicorpus("second")
        names = sorted(p.name for p in first.iterdir())
        self.assertEqual(names, sorted(p.name for p in second.iterdir()))
        for name in names:
            with self.subTest(file=name):
                self.assertEqual((first / name).read_bytes(), (second / name).read_bytes())

    def test_missing_labels_writes_nothing(self):
        conf = self.dir / "run.conf"
        conf.write_text("labels = nowhere.csv\nout_dir = out\n"
                        f"version = shop 1 1.0 {MINICORPUS / 'v1.0'}\n", encoding="utf-8")
        self.assertEqual(main(["--quiet", "run", str(conf)]), 1)
        self.assertFalse((self.dir / "out").exists())
        self.assertEqual(sorted(p.name for p in self.dir.iterdir()), ["run.conf"])

    def test_unknown_threshold(self):
        bad = self.dir / "thresholds.conf"
        bad.write_text("sensitivity = 3\n", encoding="utf-8")
        code = main(["--out-dir", str(self.dir / "out"), "--thresholds", str(bad), "--quiet",
                     "run", str(MINICORPUS / "run.conf")])
        self.assertEqual(code, 1)
        self.assertFalse((self.dir / "out").exists())


class TestFactsFileRuns(_TempCase):

    def setUp(self):
        super().setUp()
        self.facts = self.dir / "facts.json"
        write_facts(detector_fixture(), self.facts)
        self.labels = self.dir / "labels.csv"
        self.labels.write_text(
            "cve_id,system,affected_version,class_path,severity\n"
            "CVE-1,fixture,1.0,app/G.java,high\n"
            "CVE-2,fixture,1.0,app.N0,\n", encoding="utf-8")

    def test_run_from_facts_file(self):
        conf = self.dir / "run.conf"
        conf.write_text("labels = labels.csv\nout_dir = out\nversion = fixture 1 1.0 facts.json\n",
                        encoding="utf-8")
        self.assertEqual(main(["--quiet", "run", str(conf)]), 0)
        table3 = _csv_rows(self.dir / "out" / "table3.csv")
        self.assertEqual([int(x) for x in table3[1][2:6]][:2], [1, 1])

    def test_facts_file_must_match_config(self):
        conf = self.dir / "run.conf"
        conf.write_text("labels = labels.csv\nout_dir = out\nversion = other 1 1.0 facts.json\n",
                        encoding="utf-8")
        self.assertEqual(main(["--quiet", "run", str(conf)]), 1)

    def test_stage_by_stage(self):
        out = str(self.dir)
        self.assertEqual(main(["--out-dir", out, "--quiet", "metrics", "--facts", str(self.facts)]), 0)
        self.assertEqual(main(["--out-dir", out, "--quiet", "smells", "--facts", str(self.facts)]), 0)
        smells = self.dir / "smells-fixture-1.0.csv"
        self.assertTrue((self.dir / "metrics-fixture-1.0.csv").is_file())
        self.assertTrue(smells.is_file())

        shared = ["--labels", str(self.labels), "--facts", str(self.facts), "--smells", str(smells)]
        self.assertEqual(main(["--out-dir", out, "--quiet", "correlate", *shared]), 0)
        self.assertEqual(main(["--out-dir", out, "--quiet", "report", *shared]), 0)
        for name in ("table3.csv", "table4.csv", "table4-fixture.csv", "tests.json",
                     "corpus_summary.csv", "distribution.csv", "unmatched_labels.csv"):
            self.assertTrue((self.dir / name).is_file(), name)

        table4 = {r[0]: r for r in _csv_rows(self.dir / "table4.csv")[1:]}
        self.assertEqual(table4["Lazy Class"][3], "true")
        tests = json.loads((self.dir / "tests.json").read_text(encoding="utf-8"))
        self.assertEqual(tests["table3"][-1]["system"], "Combined")
        # G is smelly and vulnerable, N0 is clean and vulnerable
        self.assertEqual(tests["table3"][0]["table"], {"a": 1, "b": 1, "c": 21, "d": 23})

    def test_facts_and_smells_must_pair(self):
        code = main(["--out-dir", str(self.dir), "--quiet", "report", "--labels", str(self.labels),
                     "--facts", str(self.facts), str(self.facts), "--smells", "x.csv"])
        self.assertEqual(code, 1)

    def test_no_package_lift(self):
        out = self.dir / "smells.csv"
        self.assertEqual(main(["--quiet", "smells", "--facts", str(self.facts), "--out", str(out),
                               "--no-package-lift"]), 0)
        granularities = {r[1] for r in _csv_rows(out)[1:]}
        self.assertNotIn("package", granularities)
        self.assertIn("file", granularities)

    def test_thresholds_after_subcommand(self):
        strict = self.dir / "strict.conf"
        strict.write_text("sensitivity = 2\n", encoding="utf-8")
        out = self.dir / "smells.csv"
        args = ["--quiet", "smells", "--facts", str(self.facts), "--thresholds", str(strict),
                "--out", str(out)]
        self.assertEqual(main(args), 1)
        self.assertFalse(out.exists())

        strict.write_text("long_params = 6\n", encoding="utf-8")
        self.assertEqual(main(args), 0)
        self.assertTrue(out.is_file())

    def test_json_smells_feed_correlate(self):
        out = str(self.dir)
        self.assertEqual(main(["--out-dir", out, "--format", "json", "--quiet", "smells",
                               "--facts", str(self.facts)]), 0)
        smells = self.dir / "smells-fixture-1.0.json"
        self.assertTrue(smells.is_file())
        self.assertEqual(main(["--out-dir", out, "--quiet", "correlate", "--labels", str(self.labels),
                               "--facts", str(self.facts), "--smells", str(smells)]), 0)
        tests = json.loads((self.dir / "tests.json").read_text(encoding="utf-8"))
        self.assertEqual(tests["table3"][0]["table"], {"a": 1, "b": 1, "c": 21, "d": 23})


class TestMoveOutputs(_TempCase):

    def setUp(self):
        super().setUp()
        self.staging = self.dir / "staging"
        self.staging.mkdir()
        for name in ("a.csv", "b.csv", "c.csv"):
            (self.staging / name).write_text(f"new {name}\n", encoding="utf-8")

    def test_fresh_directory(self):
        out = self.dir / "out"
        self.assertEqual(_move_outputs(self.staging, out), ["a.csv", "b.csv", "c.csv"])
        self.assertEqual((out / "b.csv").read_text(encoding="utf-8"), "new b.csv\n")
        self.assertFalse(self.staging.exists())

    def test_failure_restores_previous_outputs(self):
        out = self.dir / "out"
        out.mkdir()
        (out / "a.csv").write_text("old a\n", encoding="utf-8")
        (out / "notes.txt").write_text("keep\n", encoding="utf-8")
        real_replace = os.replace

        def failing_replace(src, dst):
            if Path(dst) == out / "c.csv":
                raise OSError("disk full")
            real_replace(src, dst)

        with mock.patch("smellscope.app.os.replace", side_effect=failing_replace):
            with self.assertRaises(ConfigurationError):
                _move_outputs(self.staging, out)
        self.assertEqual(sorted(p.name for p in out.iterdir()), ["a.csv", "notes.txt"])
        self.assertEqual((out / "a.csv").read_text(encoding="utf-8"), "old a\n")
        self.assertEqual([p.name for p in self.dir.iterdir() if p.name.startswith(".smellscope")],
                         [])


if __name__ == "__main__":
    unittest.main()
