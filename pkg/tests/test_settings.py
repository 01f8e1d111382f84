"""Threshold and run configuration files."""

from __future__ import annotations

import tempfile
import unittest
from pathlib import Path

from smellscope.errors import ConfigurationError
from smellscope.settings import DEFAULT_THRESHOLDS, RunConfig, ThresholdConfig, write_thresholds


class _ConfigCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.dir = Path(self._tmp.name)

    def write(self, name: str, text: str) -> Path:
        path = self.dir / name
        path.write_text(text, encoding="utf-8")
        return path


class TestThresholds(_ConfigCase):

    def test_defaults_cover_every_field(self):
        self.assertEqual(ThresholdConfig().as_dict(), DEFAULT_THRESHOLDS)
        self.assertEqual(ThresholdConfig.load(None), ThresholdConfig())

    def test_load_overrides(self):
        path = self.write("t.conf", "# stricter\nfew = 3\none_third = 1/4  # ratio\n"
                                    "data_class_strict = yes\n")
        config = ThresholdConfig.load(path)
        self.assertEqual(config.few, 3)
        self.assertEqual(config.one_third, 0.25)
        self.assertTrue(config.data_class_strict)
        self.assertEqual(config.very_high_wmc, 47)

    def test_written_file_loads_back(self):
        config = ThresholdConfig(few=4, half=0.6, data_class_strict=True)
        path = self.dir / "out.conf"
        write_thresholds(config, path)
        self.assertEqual(ThresholdConfig.load(path), config)

    def test_rejections(self):
        cases = {
            "unknown": "sensitivity = 2\n",
            "not a number": "few = lots\n",
            "below one": "long_params = 0\n",
            "ratio out of range": "half = 1.5\n",
            "bad boolean": "data_class_strict = maybe\n",
            "repeated": "few = 4\nfew = 6\n",
            "no separator": "few 4\n",
        }
        for label, text in cases.items():
            with self.subTest(case=label):
                with self.assertRaises(ConfigurationError):
                    ThresholdConfig.load(self.write("bad.conf", text))

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            ThresholdConfig.load(self.dir / "absent.conf")


class TestRunConfig(_ConfigCase):

    def test_paths_resolve_against_config(self):
        path = self.write("run.conf", "labels = data/labels.csv\nout_dir = results\njobs = 3\n"
                                      "lift_packages = off\n"
                                      "version = tomcat 7 7.0.1 src/tomcat 7.0.1\n"
                                      "version = tomcat 7 7.0.2 facts/t.json\n")
        config = RunConfig.load(path)
        base = self.dir.resolve()
        self.assertEqual(config.labels, base / "data" / "labels.csv")
        self.assertEqual(config.out_dir, base / "results")
        self.assertIsNone(config.thresholds)
        self.assertEqual(config.jobs, 3)
        self.assertFalse(config.lift_packages)
        first, second = config.versions
        self.assertEqual((first.system, first.release, first.version), ("tomcat", "7", "7.0.1"))
        self.assertEqual(first.path, base / "src/tomcat 7.0.1")
        self.assertFalse(first.is_facts_file)
        self.assertTrue(second.is_facts_file)

    def test_rejections(self):
        versions = "version = s 1 1.0 src\n"
        cases = {
            "no labels": "out_dir = o\n" + versions,
            "no versions": "labels = l.csv\nout_dir = o\n",
            "short version": "labels = l.csv\nout_dir = o\nversion = s 1.0 src\n",
            "duplicate version": "labels = l.csv\nout_dir = o\n" + versions * 2,
            "unknown key": "labels = l.csv\nout_dir = o\ncolour = red\n" + versions,
            "bad jobs": "labels = l.csv\nout_dir = o\njobs = 0\n" + versions,
        }
        for label, text in cases.items():
            with self.subTest(case=label):
                with self.assertRaises(ConfigurationError):
                    RunConfig.load(self.write("run.conf", text))


if __name__ == "__main__":
    unittest.main()
