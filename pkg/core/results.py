"""Persistence of sweep results and per-iteration decoder traces."""

import csv
import json
import logging
import subprocess
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from .admm import AdmmState
from .constants import APP_NAME, APP_VERSION
from .models import SweepRecord

logger = logging.getLogger(__name__)

CSV_FIELDS = [
    "decoder", "code", "snr_db", "alpha", "mu1", "mu2", "trials", "word_errors", "bit_errors",
    "wer", "wer_ci_low", "wer_ci_high", "ber", "avg_iterations", "avg_decode_seconds", "seed",
]

TRACE_FIELDS = ["iteration", "primal_residual_pp", "primal_residual_box", "objective"]


def version_string() -> str:
    """``git describe`` of the working tree when available, else the package version."""
    try:
        described = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return APP_VERSION
    if described.returncode != 0 or not described.stdout.strip():
        return APP_VERSION
    return f"{APP_VERSION}+{described.stdout.strip()}"


def write_csv(records: list[SweepRecord], path: Path) -> Path:
    """Write records with the fixed CSV header; unset parameters stay empty."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, extrasaction="ignore")
        writer.writeheader()
        for record in records:
            writer.writerow({k: ("" if v is None else v) for k, v in record.to_dict().items()})
    logger.info(f"Wrote {len(records)} records to {path}")
    return path


def write_json(records: list[SweepRecord], path: Path, metadata: dict[str, Any] | None = None) -> Path:
    """Write records inside a metadata envelope (tool, version, timestamp, run config)."""
    envelope = {
        "tool": APP_NAME,
        "version": version_string(),
        "created": datetime.now(timezone.utc).isoformat(),
        "metadata": metadata or {},
        "records": [record.to_dict() for record in records],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(envelope, f, indent=2, ensure_ascii=False)
    logger.info(f"Wrote {len(records)} records to {path}")
    return path


def read_json(path: Path) -> tuple[dict[str, Any], list[SweepRecord]]:
    """Read an envelope written by write_json(); returns (envelope without records, records)."""
    with open(path, "r", encoding="utf-8") as f:
        envelope = json.load(f)
    records = [SweepRecord.from_dict(item) for item in envelope.pop("records", [])]
    return envelope, records


class TraceWriter:
    """Iteration callback that writes one CSV row per ADMM iteration.

    Usage:
        with TraceWriter(open(path, "w", newline=""), gamma) as trace:
            decoder.decode(..., trace=trace)
    """

    def __init__(self, stream: TextIO, gamma: np.ndarray):
        self._stream = stream
        self._gamma = np.asarray(gamma, dtype=np.float64)
        self._writer = csv.writer(stream)
        self._writer.writerow(TRACE_FIELDS)
        self.rows = 0

    def __call__(self, state: AdmmState) -> None:
        self._writer.writerow([
            state.iter,
            repr(float(state.primal_residual_pp)),
            repr(float(state.primal_residual_box)),
            repr(float(self._gamma @ state.x)),
        ])
        self.rows += 1

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc) -> None:
        self._stream.close()
