"""Tests for config module."""

from unittest.mock import patch

from infinireg.config import (
    DEFAULTS,
    build_default_config,
    config_exists,
    get_bounds,
    get_cap,
    get_log_level,
    get_retry_cap,
    get_ring_size,
    get_samples,
    get_seed,
    load_config,
    save_config,
)


class TestConfigExists:
    def test_exists_false(self, tmp_path):
        with patch("infinireg.config.CONFIG_FILE", tmp_path / "nope.yaml"):
            assert config_exists() is False

    def test_exists_true(self, tmp_path):
        cfg = tmp_path / "config.yaml"
        cfg.write_text("seed: 7\n")
        with patch("infinireg.config.CONFIG_FILE", cfg):
            assert config_exists() is True

    def test_explicit_path(self, tmp_path):
        cfg = tmp_path / "other.yaml"
        cfg.write_text("seed: 7\n")
        assert config_exists(cfg) is True


class TestLoadSaveConfig:
    def test_load_missing(self, tmp_path):
        with patch("infinireg.config.CONFIG_FILE", tmp_path / "missing.yaml"):
            assert load_config() == {}

    def test_load_empty_file(self, tmp_path):
        cfg = tmp_path / "config.yaml"
        cfg.write_text("")
        assert load_config(cfg) == {}

    def test_save_and_load(self, tmp_path):
        cfg_file = tmp_path / "config.yaml"
        with patch("infinireg.config.CONFIG_FILE", cfg_file):
            save_config({"seed": 11, "samples": 5})
            loaded = load_config()
            assert loaded["seed"] == 11
            assert loaded["samples"] == 5

    def test_save_creates_directory(self, tmp_path):
        cfg_file = tmp_path / "subdir" / "config.yaml"
        save_config({"cap": 4}, cfg_file)
        assert cfg_file.exists()
        assert load_config(cfg_file) == {"cap": 4}


class TestGetters:
    def test_defaults(self):
        assert get_seed({}) == 42
        assert get_samples({}) == 25
        assert get_ring_size({}) == (1, 1)
        assert get_bounds({}) == (1, 3)
        assert get_cap({}) == 6
        assert get_retry_cap({}) == 100

    def test_overrides(self):
        config = {"seed": 3, "xvars": 2, "tvars": 3, "degree": 2, "height": 5}
        assert get_seed(config) == 3
        assert get_ring_size(config) == (2, 3)
        assert get_bounds(config) == (2, 5)

    def test_bad_value_falls_back(self):
        assert get_cap({"cap": "lots"}) == 6
        assert get_samples({"samples": None}) == 25

    def test_log_level(self):
        assert get_log_level({}) == "WARNING"
        assert get_log_level({"log_level": "debug"}) == "DEBUG"
        assert get_log_level({"log_level": "chatty"}) == "WARNING"


class TestBuildDefaultConfig:
    def test_build(self):
        config = build_default_config(seed=9, samples=10, cap=8)
        assert config["seed"] == 9
        assert config["samples"] == 10
        assert config["cap"] == 8
        assert config["height"] == DEFAULTS["height"]

    def test_defaults_not_mutated(self):
        build_default_config(seed=1)
        assert DEFAULTS["seed"] == 42
