"""Tests for configuration manager."""

import pytest

from core.config_manager import CONFIG_SCHEMA, ConfigManager, coerce_value, normalize_key
from core.constants import DEFAULT_SEED, DEFAULT_STOP_WORD_ERRORS
from core.exceptions import ParameterError


class TestConfigManagerInit:
    """Tests for ConfigManager initialization."""

    def test_init_without_path(self):
        manager = ConfigManager()
        assert manager.config_path is None
        assert manager._config == {}

    def test_load_without_path_gives_defaults(self):
        manager = ConfigManager()
        config = manager.load()
        assert config["errors"] == DEFAULT_STOP_WORD_ERRORS
        assert config["seed"] == DEFAULT_SEED
        assert config["alpha"] is None
        assert set(config) == set(CONFIG_SCHEMA)


class TestKeys:
    """Tests for key normalisation and coercion."""

    @pytest.mark.parametrize("raw", ["max-iters", "--max-iters", "max_iters", " max_iters "])
    def test_normalize_key(self, raw):
        assert normalize_key(raw) == "max_iters"

    def test_coerce_types(self):
        assert coerce_value("max_iters", "250") == 250
        assert coerce_value("alpha", "0.5") == 0.5
        assert coerce_value("code", " hamming7 ") == "hamming7"
        assert coerce_value("seed", "0x10") == 16

    def test_coerce_blank_numeric_is_unset(self):
        assert coerce_value("mu1", "  ") is None

    def test_unknown_key(self):
        with pytest.raises(ParameterError):
            coerce_value("colour", "blue")

    def test_bad_value(self):
        with pytest.raises(ParameterError):
            coerce_value("errors", "many")


class TestConfigFile:
    """Tests for loading and saving config files."""

    def test_load_file(self, tmp_config_dir):
        path = tmp_config_dir / "run.conf"
        path.write_text(
            "# penalized sweep\n"
            "decoder = penalized\n"
            "alpha = 1.5   # trailing comment\n"
            "\n"
            "max-iters = 300\n"
        )
        manager = ConfigManager(path)

        config = manager.load()

        assert config["decoder"] == "penalized"
        assert config["alpha"] == 1.5
        assert config["max_iters"] == 300

    def test_load_missing_file(self, tmp_config_dir):
        manager = ConfigManager(tmp_config_dir / "missing.conf")
        with pytest.raises(FileNotFoundError):
            manager.load()

    def test_malformed_line_names_location(self, tmp_config_dir):
        path = tmp_config_dir / "bad.conf"
        path.write_text("decoder = bp\njust some words\n")
        with pytest.raises(ParameterError, match="bad.conf:2"):
            ConfigManager(path).load()

    def test_unknown_key_names_location(self, tmp_config_dir):
        path = tmp_config_dir / "bad.conf"
        path.write_text("volume = 11\n")
        with pytest.raises(ParameterError, match="bad.conf:1"):
            ConfigManager(path).load()

    def test_save_then_load(self, tmp_config_dir):
        manager = ConfigManager()
        manager.set("decoder", "bp")
        manager.set("mu2", 20.0)
        path = manager.save(tmp_config_dir / "nested" / "saved.conf")

        reloaded = ConfigManager(path)
        reloaded.load()

        assert reloaded.as_dict() == manager.as_dict()

    def test_save_without_path(self):
        with pytest.raises(ParameterError):
            ConfigManager().save()


class TestGetSet:
    """Tests for value access."""

    def test_get_default(self):
        manager = ConfigManager()
        assert manager.get("transmit") == "zero"
        assert manager.get("alpha", 2.0) == 2.0

    def test_set_coerces(self):
        manager = ConfigManager()
        manager.set("threads", "4")
        assert manager.get("threads") == 4

    def test_set_unknown_key(self):
        with pytest.raises(ParameterError):
            ConfigManager().set("nope", 1)

    def test_update_skips_none(self):
        manager = ConfigManager()
        manager.set("alpha", 1.0)

        manager.update({"alpha": None, "mu1": 7.0})

        assert manager.get("alpha") == 1.0
        assert manager.get("mu1") == 7.0


class TestDecoderOverrides:
    """Tests for decoder parameter overrides."""

    def test_no_overrides_by_default(self):
        assert ConfigManager().decoder_overrides() == {}

    def test_explicit_values_only(self):
        manager = ConfigManager()
        manager.update({"max_iters": 60, "normalization": 0.8, "seed": 3})

        assert manager.decoder_overrides() == {"max_iters": 60, "normalization": 0.8}

    def test_mu1_also_sets_penalty(self):
        manager = ConfigManager()
        manager.set("mu1", 5.0)

        overrides = manager.decoder_overrides()

        assert overrides["mu1"] == 5.0
        assert overrides["mu"] == 5.0
