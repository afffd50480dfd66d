"""Command-line front end: code info, single-word decoding and Monte Carlo runs.

Exit codes: 0 success (decoded word valid), 1 decoded word invalid,
2 usage or configuration error, 3 I/O error.
"""

import argparse
import asyncio
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .config_manager import CONFIG_SCHEMA, ConfigManager, normalize_key
from .constants import (
    APP_NAME,
    APP_VERSION,
    EXIT_INVALID_WORD,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    TRANSMIT_ALL_ZERO,
    TRANSMIT_RANDOM,
)
from .di_container import ContainerBuilder, DIContainer
from .event_bus import BatchProgress, Topics
from .exceptions import ChannelError, CodeError, DecoderNotFoundError, ParameterError
from .gf2_code import degree_profile, derive_generator, load_code, rank_gf2
from .models import ExperimentSpec, SweepRecord
from .paths import get_results_dir
from .results import TraceWriter, version_string, write_csv, write_json

logger = logging.getLogger(__name__)

TRANSMIT_MODES = {"zero": TRANSMIT_ALL_ZERO, "random": TRANSMIT_RANDOM}
SWEEPS = ("snr", "alpha", "mu", "compare")


def parse_range(text: str) -> list[float]:
    """Parse ``a:step:b`` (inclusive), ``a,b,c`` or a single value.

    Raises:
        ParameterError: malformed text or a non-increasing range.
    """
    text = str(text).strip()
    try:
        if ":" in text:
            start, step, stop = (float(part) for part in text.split(":"))
            if step <= 0 or stop < start:
                raise ParameterError(f"range {text!r} needs step > 0 and end >= start")
            count = math.floor((stop - start) / step + 1e-9) + 1
            return [round(start + i * step, 12) for i in range(count)]
        values = [float(part) for part in text.replace(",", " ").split()]
    except ValueError:
        raise ParameterError(f"cannot parse {text!r} as a value list or a:step:b range") from None
    if not values:
        raise ParameterError("empty value list")
    return values


def read_llr(source: str, n_vars: int) -> np.ndarray:
    """LLRs from a file of whitespace-separated reals, or inline (commas allowed).

    Raises:
        CodeError: unparsable values or wrong count.
    """
    path = Path(source)
    text = path.read_text(encoding="utf-8") if path.is_file() else source
    try:
        gamma = np.array([float(token) for token in text.replace(",", " ").split()], dtype=np.float64)
    except ValueError:
        raise CodeError(f"LLR input contains non-numeric values: {source[:40]!r}") from None
    if gamma.size != n_vars:
        raise CodeError(f"expected {n_vars} LLR values, got {gamma.size}")
    return gamma


def _add_decoder_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--code", help="alist file or registry name (spc3, hamming7, regular96, regular204)")
    parser.add_argument("--decoder", help="l2box, penalized, bp, minsum or normminsum")
    parser.add_argument("--alpha", type=float, help="penalty weight of the penalized decoder")
    parser.add_argument("--mu1", type=float, help="l2-box mu1 (also the penalized decoder's mu)")
    parser.add_argument("--mu2", type=float, help="l2-box mu2")
    parser.add_argument("--epsilon", type=float, help="ADMM stopping tolerance")
    parser.add_argument("--max-iters", type=int, help="iteration cap")
    parser.add_argument("--normalization", type=float, help="normalized min-sum factor")
    parser.add_argument("--llr-clip", type=float, help="message-passing clip level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME, description="l2-box ADMM LDPC decoding workbench")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--config", type=Path, help="key = value configuration file (flags win)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True)

    info = commands.add_parser("info", help="print code dimensions and degree profile")
    info.add_argument("code", help="alist file or registry name")

    decode = commands.add_parser("decode", help="decode one LLR vector")
    _add_decoder_flags(decode)
    decode.add_argument("--llr", required=True, help="LLR file or inline values")
    decode.add_argument("--trace", type=Path, help="write per-iteration residuals as CSV (ADMM decoders)")
    decode.add_argument("--format", choices=["text", "json"], help="output format")

    simulate = commands.add_parser("simulate", help="Monte Carlo WER/BER experiments")
    _add_decoder_flags(simulate)
    simulate.add_argument("--snr", help="Eb/N0 points in dB: a:step:b or a,b,c")
    simulate.add_argument("--sweep", choices=SWEEPS, help="what to sweep (default snr)")
    simulate.add_argument("--grid", help="alpha grid for --sweep alpha")
    simulate.add_argument("--mu1-grid", help="mu1 grid for --sweep mu")
    simulate.add_argument("--mu2-grid", help="mu2 grid for --sweep mu")
    simulate.add_argument("--decoders", help="comma-separated decoder ids for --sweep compare")
    simulate.add_argument("--errors", type=int, help="stop after this many word errors")
    simulate.add_argument("--trials", type=int, help="trial cap per point")
    simulate.add_argument("--seed", type=int, help="master seed")
    simulate.add_argument("--transmit", choices=sorted(TRANSMIT_MODES), help="all-zero or random codewords")
    simulate.add_argument("--threads", type=int, help="worker threads")
    simulate.add_argument("--batch-size", type=int, help="trials per work unit")
    simulate.add_argument("--out", type=Path, help="output file")
    simulate.add_argument("--format", choices=["csv", "json"], help="output format")
    return parser


def resolve_config(args: argparse.Namespace, container: DIContainer) -> ConfigManager:
    """Layer explicit flags over the config file and the defaults."""
    config = container.get("config_manager")
    flags = {normalize_key(k): v for k, v in vars(args).items() if normalize_key(k) in CONFIG_SCHEMA}
    config.update({k: str(v) if isinstance(v, Path) else v for k, v in flags.items()})
    logging.getLogger().setLevel(getattr(logging, str(config.get("log_level")).upper(), logging.INFO))
    return config


def cmd_info(code_ref: str) -> int:
    h = load_code(code_ref)
    rank = rank_gf2(h)
    profile = degree_profile(h)
    print(f"N={h.n_vars} M={h.n_checks} k={h.n_vars - rank} rank={rank}")
    print("variable degrees: " + " ".join(f"{d}:{c}" for d, c in profile["variables"].items()))
    print("check degrees: " + " ".join(f"{d}:{c}" for d, c in profile["checks"].items()))
    return EXIT_OK


def cmd_decode(config: ConfigManager, container: DIContainer, llr: str, trace_path: Path | None) -> int:
    decoders = container.get("decoder_manager")
    decoder_id = config.get("decoder")
    h = load_code(config.get("code"))
    gamma = read_llr(llr, h.n_vars)
    overrides = config.decoder_overrides()

    if trace_path is not None:
        trace_path.parent.mkdir(parents=True, exist_ok=True)
        with TraceWriter(open(trace_path, "w", encoding="utf-8", newline=""), gamma) as trace:
            result = decoders.decode(decoder_id, h, gamma, overrides, trace=trace)
        logger.info(f"Wrote {trace.rows} trace rows to {trace_path}")
    else:
        result = decoders.decode(decoder_id, h, gamma, overrides)

    if config.get("format") == "json":
        print(json.dumps(result.to_dict(), indent=2))
    else:
        data = result.to_dict()
        print(f"decoder={data['decoder']} valid={str(data['is_valid_codeword']).lower()} "
              f"iterations={data['iterations']} termination={data['termination']}")
        print(f"objective={data['objective']:.6g} time={data['wall_time']:.3e}s")
        print(f"word={data['word']}")
    return EXIT_OK if result.is_valid_codeword else EXIT_INVALID_WORD


def experiment_spec(config: ConfigManager) -> ExperimentSpec:
    transmit = config.get("transmit")
    if transmit not in TRANSMIT_MODES:
        raise ParameterError(f"transmit must be one of {sorted(TRANSMIT_MODES)}, got {transmit!r}")
    return ExperimentSpec(
        code_ref=config.get("code"),
        decoder_id=config.get("decoder"),
        decoder_params=config.decoder_overrides(),
        snr_points=tuple(parse_range(config.get("snr"))),
        stop_word_errors=config.get("errors"),
        max_trials=config.get("trials"),
        transmit_mode=TRANSMIT_MODES[transmit],
        master_seed=config.get("seed"),
        threads=config.get("threads"),
        batch_size=config.get("batch_size"),
    )


async def run_sweep(config: ConfigManager, container: DIContainer, spec: ExperimentSpec) -> list[SweepRecord]:
    harness = container.get("harness")
    sweep = config.get("sweep")
    if sweep == "snr":
        return await harness.sweep_snr(spec)
    if sweep == "alpha":
        return await harness.sweep_alpha(spec, parse_range(config.get("grid")))
    if sweep == "mu":
        return await harness.sweep_mu(spec, parse_range(config.get("mu1_grid")), parse_range(config.get("mu2_grid")))
    if sweep == "compare":
        ids = [d.strip() for d in config.get("decoders").split(",") if d.strip()]
        return await harness.compare_decoders(spec, ids)
    raise ParameterError(f"unknown sweep {sweep!r} (expected one of {', '.join(SWEEPS)})")


def format_table(records: list[SweepRecord]) -> str:
    def cell(value: float | None) -> str:
        return "-" if value is None else f"{value:g}"

    lines = [
        f"{'decoder':<11}{'snr_db':>7}{'alpha':>7}{'mu1':>7}{'mu2':>7}{'trials':>10}{'errors':>8}"
        f"{'WER':>11}{'95% CI':>25}{'BER':>11}{'iters':>9}"
    ]
    for r in records:
        if r.failed:
            lines.append(f"{r.decoder:<11}{r.snr_db:>7g}{cell(r.alpha):>7}{cell(r.mu1):>7}{cell(r.mu2):>7}  failed: {r.error}")
            continue
        ci = f"[{r.wer_ci_low:.2e}, {r.wer_ci_high:.2e}]"
        lines.append(
            f"{r.decoder:<11}{r.snr_db:>7g}{cell(r.alpha):>7}{cell(r.mu1):>7}{cell(r.mu2):>7}{r.trials:>10}"
            f"{r.word_errors:>8}{r.wer:>11.3e}{ci:>25}{r.ber:>11.3e}{r.avg_iterations:>9.1f}"
        )
    return "\n".join(lines)


def run_metadata(config: ConfigManager, container: DIContainer, spec: ExperimentSpec) -> dict[str, Any]:
    """Everything needed to reproduce the run, defaults included."""
    decoders = container.get("decoder_manager")
    ids = [spec.decoder_id]
    if config.get("sweep") == "compare":
        ids = [d.strip() for d in config.get("decoders").split(",") if d.strip()]
    resolved = {}
    for decoder_id in ids:
        try:
            resolved[decoder_id] = decoders.resolved_params(decoder_id, spec.decoder_params)
        except (ParameterError, DecoderNotFoundError) as e:
            resolved[decoder_id] = {"error": str(e)}
    return {
        "version": version_string(),
        "spec": spec.to_dict(),
        "config": config.as_dict(),
        "decoder_params": resolved,
    }


def cmd_simulate(config: ConfigManager, container: DIContainer) -> int:
    spec = experiment_spec(config)
    fmt = config.get("format")
    if fmt not in ("csv", "json"):
        raise ParameterError(f"simulate writes csv or json, not {fmt!r}")

    bus = container.get("event_bus")
    bus.subscribe(Topics.BATCH_FINISHED, _log_progress)

    records = asyncio.run(run_sweep(config, container, spec))
    print(format_table(records))

    out = config.get("out")
    path = Path(out) if out else get_results_dir() / f"{config.get('sweep')}-{spec.decoder_id}.{fmt}"
    if not path.suffix:
        path = path.with_suffix(f".{fmt}")
    if fmt == "json":
        write_json(records, path, run_metadata(config, container, spec))
    else:
        write_csv(records, path)
    config.save(path.with_suffix(".conf"))
    print(f"results: {path}")
    return EXIT_OK


def _log_progress(progress: BatchProgress) -> None:
    logger.debug(f"{progress.decoder} @ {progress.snr_db:g} dB: {progress.word_errors} errors / {progress.trials} trials")


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        if args.command == "info":
            return cmd_info(args.code)

        container = ContainerBuilder.build_container(config_path=args.config)
        config = resolve_config(args, container)
        if args.command == "decode":
            return cmd_decode(config, container, args.llr, args.trace)
        return cmd_simulate(config, container)

    except FileNotFoundError as e:
        print(f"error: file not found: {e.filename or e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DecoderNotFoundError, ChannelError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CodeError, OSError, UnicodeDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
