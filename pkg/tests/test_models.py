"""Tests for core.models module."""

import numpy as np
import pytest

from core.constants import DEFAULT_STOP_WORD_ERRORS, TRANSMIT_RANDOM
from core.exceptions import ParameterError
from core.models import DecodeResult, ExperimentSpec, SweepRecord, Termination


@pytest.fixture
def sample_spec():
    """Spec for a short BP run."""
    return ExperimentSpec(code_ref="regular96", decoder_id="bp", snr_points=[1, 2.5])


class TestDecodeResult:
    """Test cases for DecodeResult."""

    def test_to_dict(self):
        """Test to_dict() renders the word as a bit string."""
        result = DecodeResult(
            word=np.array([1, 1, 0], dtype=np.uint8),
            is_valid_codeword=True,
            iterations=12,
            termination=Termination.CONVERGED,
            wall_time=0.25,
            objective=-3.0,
            decoder="l2box",
        )

        data = result.to_dict()

        assert data["word"] == "110"
        assert data["termination"] == "converged"
        assert data["is_valid_codeword"] is True
        assert data["iterations"] == 12
        assert data["decoder"] == "l2box"

    def test_termination_values(self):
        """Test termination reasons serialize to stable strings."""
        assert [t.value for t in Termination] == ["converged", "max_iters", "early_codeword"]


class TestExperimentSpec:
    """Test cases for ExperimentSpec."""

    def test_defaults(self, sample_spec):
        """Test defaults and normalised SNR points."""
        assert sample_spec.snr_points == (1.0, 2.5)
        assert sample_spec.stop_word_errors == DEFAULT_STOP_WORD_ERRORS
        assert sample_spec.decoder_params == {}

    def test_empty_snr_rejected(self):
        """Test an empty SNR list is rejected."""
        with pytest.raises(ParameterError):
            ExperimentSpec(code_ref="spc3", decoder_id="bp", snr_points=[])

    @pytest.mark.parametrize("changes", [
        {"stop_word_errors": 0},
        {"stop_word_errors": 10, "max_trials": 5},
        {"transmit_mode": "ones"},
        {"master_seed": -1},
        {"threads": 0},
        {"batch_size": 0},
    ])
    def test_invalid_fields(self, changes):
        """Test invariant violations raise ParameterError."""
        with pytest.raises(ParameterError):
            ExperimentSpec(code_ref="spc3", decoder_id="bp", **changes)

    def test_with_updates(self, sample_spec):
        """Test with_updates() returns a validated copy."""
        updated = sample_spec.with_updates(transmit_mode=TRANSMIT_RANDOM, threads=4)

        assert updated.transmit_mode == TRANSMIT_RANDOM
        assert updated.threads == 4
        assert sample_spec.threads == 1

    def test_decoder_params_are_copied(self):
        """Test the caller's dict is not shared."""
        params = {"alpha": 1.0}
        spec = ExperimentSpec(code_ref="spc3", decoder_id="penalized", decoder_params=params)
        params["alpha"] = 2.0

        assert spec.decoder_params == {"alpha": 1.0}

    def test_to_dict(self, sample_spec):
        """Test to_dict() is JSON friendly."""
        data = sample_spec.to_dict()

        assert data["snr_points"] == [1.0, 2.5]
        assert data["decoder_id"] == "bp"


class TestSweepRecord:
    """Test cases for SweepRecord."""

    def test_failed_flag(self):
        """Test failed mirrors the error field."""
        assert not SweepRecord(decoder="bp", code="spc3", snr_db=1.0).failed
        assert SweepRecord(decoder="bp", code="spc3", snr_db=1.0, error="boom").failed

    def test_dict_round_trip(self):
        """Test from_dict(to_dict()) restores the record."""
        record = SweepRecord(
            decoder="penalized", code="regular96", snr_db=2.0, alpha=1.5, mu1=5.0,
            trials=1000, word_errors=17, wer=0.017, seed=9,
        )

        assert SweepRecord.from_dict(record.to_dict()) == record

    def test_from_dict_ignores_unknown_keys(self):
        """Test extra keys are dropped."""
        record = SweepRecord.from_dict({"decoder": "bp", "code": "spc3", "snr_db": 0.0, "extra": 1})

        assert record.decoder == "bp"
