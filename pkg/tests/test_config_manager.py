"""
Tests for configuration loading and validation
"""
import json
import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.common import HOME_ENV_VAR, get_app_directory  # noqa: E402
from app.config_manager import DEFAULT_CONFIG, create_config_manager  # noqa: E402
from tests.test_utils import isolated_app_dir  # noqa: E402


class TestConfigManager(unittest.TestCase):
    """ConfigManager against a temporary application directory"""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())
        self.manager = create_config_manager(self.test_dir)

    def tearDown(self):
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def test_hardcoded_defaults_are_materialized(self):
        """Without any file the hardcoded defaults are used and saved"""
        config = self.manager.load_config()
        self.assertEqual(config, DEFAULT_CONFIG)
        saved = json.loads((self.test_dir / "config.json").read_text(encoding="utf-8"))
        self.assertEqual(saved, DEFAULT_CONFIG)

    def test_default_file_is_copied(self):
        default = dict(DEFAULT_CONFIG, max_escalations=1, render_scale=4.0)
        (self.test_dir / "config.default.json").write_text(json.dumps(default))
        config = self.manager.load_config()
        self.assertEqual(config["max_escalations"], 1)
        self.assertTrue((self.test_dir / "config.json").exists())

    def test_missing_keys_are_filled(self):
        (self.test_dir / "config.json").write_text(json.dumps({"fringe_layout": "box"}))
        config = self.manager.load_config()
        self.assertEqual(config["fringe_layout"], "box")
        self.assertEqual(
            config["stats_sample_size"], DEFAULT_CONFIG["stats_sample_size"]
        )

    def test_invalid_values_are_corrected(self):
        (self.test_dir / "config.json").write_text(
            json.dumps(
                {
                    "max_escalations": -4,
                    "fringe_layout": "spiral",
                    "render_arc_samples": 1,
                    "render_scale": "huge",
                    "log_level": "debug",
                }
            )
        )
        config = self.manager.load_config()
        self.assertEqual(config["max_escalations"], 0)
        self.assertEqual(config["fringe_layout"], "shift")
        self.assertEqual(config["render_arc_samples"], 2)
        self.assertEqual(config["render_scale"], DEFAULT_CONFIG["render_scale"])
        self.assertEqual(config["log_level"], "DEBUG")

        saved = json.loads((self.test_dir / "config.json").read_text(encoding="utf-8"))
        self.assertEqual(saved["fringe_layout"], "shift")

    def test_unreadable_json_falls_back(self):
        (self.test_dir / "config.json").write_text("{not json")
        config = self.manager.load_config()
        self.assertEqual(config, DEFAULT_CONFIG)

    def test_save_round_trip(self):
        config = dict(DEFAULT_CONFIG, render_show_grid=True)
        self.manager.save_config(config)
        self.assertTrue(self.manager.load_config()["render_show_grid"])


class TestAppDirectory(unittest.TestCase):
    """P3T_HOME override"""

    def test_env_override(self):
        with isolated_app_dir() as test_dir:
            self.assertEqual(get_app_directory(), test_dir)
            self.assertEqual(create_config_manager().app_dir, test_dir)

    def test_repository_default(self):
        with patch.dict(os.environ):
            os.environ.pop(HOME_ENV_VAR, None)
            self.assertTrue((get_app_directory() / "config.default.json").exists())


if __name__ == "__main__":
    unittest.main()
