"""Shared pytest fixtures for workbench tests."""

from pathlib import Path

import numpy as np
import pytest

FIXTURES_DIR = Path(__file__).parent / "fixtures"
PROJECT_PLUGINS_DIR = Path(__file__).parent.parent / "plugins"


@pytest.fixture
def tmp_config_dir(tmp_path):
    """Provide a temporary directory for config files."""
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    return config_dir


@pytest.fixture
def spc3():
    """Single parity check on three bits, H = [[1, 1, 1]]."""
    from core.gf2_code import ParityCheckMatrix
    return ParityCheckMatrix.from_rows(3, [[0, 1, 2]])


@pytest.fixture
def hamming7():
    """(7,4) Hamming code."""
    from core.gf2_code import load_code
    return load_code("hamming7")


@pytest.fixture
def regular96():
    """The 96-bit (3,6)-regular test code."""
    from core.gf2_code import load_code
    return load_code("regular96")


@pytest.fixture
def rng():
    """Seeded generator for reproducible random inputs."""
    return np.random.default_rng(1234)


@pytest.fixture
def mock_plugins_dir():
    """Plugin root holding mock decoder plugins."""
    return FIXTURES_DIR / "mock_plugins"


@pytest.fixture
def decoder_manager():
    """DecoderManager over the real decoder plugins."""
    from core.decoder_manager import DecoderManager
    manager = DecoderManager(PROJECT_PLUGINS_DIR)
    manager.discover_decoders()
    return manager


@pytest.fixture
def write_alist(tmp_path):
    """Write a ParityCheckMatrix as an alist file and return its path."""
    from core.gf2_code import emit_alist

    def _write(h, name="code.alist"):
        path = tmp_path / name
        path.write_bytes(emit_alist(h))
        return path
    return _write
