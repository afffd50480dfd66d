"""Monte Carlo WER/BER estimation with early stopping and parameter sweeps.

Every trial draws from its own generator stream, keyed by (master seed, point
index, trial index). Trials are evaluated in fixed-size batches on a thread
pool, and outcomes are folded in trial order, so the stopping point and every
count in a SweepRecord are independent of the number of threads.
"""

import asyncio
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from .channel import ChannelParams, add_awgn, llr_awgn, modulate_bpsk, trial_generator
from .constants import DECODER_L2BOX, DECODER_PENALIZED, TRANSMIT_RANDOM, WILSON_Z
from .decoder_base import BoundDecoder
from .event_bus import BatchProgress, Topics
from .exceptions import DecoderNotFoundError, ParameterError
from .gf2_code import GeneratorMatrix, ParityCheckMatrix, derive_generator, encode, load_code
from .models import ExperimentSpec, SweepRecord, TrialOutcome
from .protocols import IDecoderManager, IEventBus

logger = logging.getLogger(__name__)


def wilson_interval(errors: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% at the default z)."""
    if trials <= 0:
        return 0.0, 1.0
    if not 0 <= errors <= trials:
        raise ParameterError(f"errors={errors} must lie in [0, trials={trials}]")
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4 * trials * trials)) / denom
    low = 0.0 if errors == 0 else max(0.0, min(p, centre - half))
    high = 1.0 if errors == trials else min(1.0, max(p, centre + half))
    return low, high


@dataclass(frozen=True)
class PointContext:
    """Everything a worker thread needs to run trials of one operating point."""

    h: ParityCheckMatrix
    g: GeneratorMatrix
    decode: BoundDecoder
    channel: ChannelParams
    random_codewords: bool
    master_seed: int
    point_index: int


def run_trial(ctx: PointContext, trial_index: int) -> TrialOutcome:
    """Transmit, add noise, decode and compare for one trial."""
    rng = trial_generator(ctx.master_seed, ctx.point_index, trial_index)
    if ctx.random_codewords:
        word = encode(ctx.g, rng.integers(0, 2, size=ctx.g.k))
    else:
        word = np.zeros(ctx.h.n_vars, dtype=np.uint8)
    gamma = llr_awgn(add_awgn(modulate_bpsk(word), ctx.channel, rng), ctx.channel)
    result = ctx.decode(gamma)
    # undetected errors (a valid but different codeword) count as word errors
    bit_errors = int(np.count_nonzero(result.word != word))
    return TrialOutcome(
        word_error=bit_errors > 0,
        bit_errors=bit_errors,
        iterations=result.iterations,
        seconds=result.wall_time,
    )


def run_batch(ctx: PointContext, start: int, stop: int) -> list[TrialOutcome]:
    return [run_trial(ctx, t) for t in range(start, stop)]


def failed_record(spec: ExperimentSpec, snr_db: float, assignment: dict[str, Any], error: Exception) -> SweepRecord:
    """Placeholder row for a parameter assignment that could not be run."""
    return SweepRecord(
        decoder=spec.decoder_id,
        code=str(spec.code_ref),
        snr_db=snr_db,
        alpha=assignment.get("alpha"),
        mu1=assignment.get("mu1", assignment.get("mu")),
        mu2=assignment.get("mu2"),
        seed=spec.master_seed,
        error=f"{type(error).__name__}: {error}",
    )


class MonteCarloHarness:
    """Runs experiments described by ExperimentSpec against the loaded decoders."""

    def __init__(self, decoder_manager: IDecoderManager, event_bus: IEventBus | None = None):
        self._decoders = decoder_manager
        self._event_bus = event_bus
        self._codes: dict[str, tuple[ParityCheckMatrix, GeneratorMatrix]] = {}

    def _publish(self, topic: str, data: Any) -> None:
        if self._event_bus:
            self._event_bus.publish(topic, data)

    def load(self, code_ref: str) -> tuple[ParityCheckMatrix, GeneratorMatrix]:
        """Load (and cache) a code with its generator matrix."""
        key = str(code_ref)
        if key not in self._codes:
            h = load_code(key)
            self._codes[key] = (h, derive_generator(h))
        return self._codes[key]

    async def run_point(
        self,
        spec: ExperimentSpec,
        assignment: dict[str, Any] | None = None,
        point_index: int = 0,
    ) -> SweepRecord:
        """Estimate WER/BER at one parameter assignment.

        Args:
            spec: Experiment description
            assignment: ``snr_db`` plus decoder parameter overrides; the SNR
                defaults to the first of ``spec.snr_points``
            point_index: Seed-stream coordinate of this point

        Raises:
            FileNotFoundError, AlistParseError: the code cannot be loaded.
            ParameterError, DecoderNotFoundError: invalid decoder or parameters.
        """
        assignment = dict(assignment or {})
        snr_db = float(assignment.pop("snr_db", spec.snr_points[0]))
        overrides = {**spec.decoder_params, **assignment}

        h, g = self.load(spec.code_ref)
        decode = self._decoders.bind(spec.decoder_id, h, overrides)
        resolved = self._decoders.resolved_params(spec.decoder_id, overrides)
        # populate cached edge layouts before worker threads share h
        _ = (h.degree_groups, h.var_degrees, h.edge_vars)

        ctx = PointContext(
            h=h,
            g=g,
            decode=decode,
            channel=ChannelParams(snr_db, rate=g.k / h.n_vars),
            random_codewords=spec.transmit_mode == TRANSMIT_RANDOM,
            master_seed=spec.master_seed,
            point_index=point_index,
        )

        logger.info(f"{spec.decoder_id} @ {snr_db:g} dB on {spec.code_ref}: start (point {point_index})")
        self._publish(Topics.POINT_STARTED, {"decoder": spec.decoder_id, "snr_db": snr_db, "point_index": point_index})

        trials = word_errors = bit_errors = iterations = 0
        seconds = 0.0
        next_trial = 0
        loop = asyncio.get_running_loop()

        with ThreadPoolExecutor(max_workers=spec.threads) as executor:
            while trials < spec.max_trials and word_errors < spec.stop_word_errors:
                starts = [
                    next_trial + i * spec.batch_size
                    for i in range(spec.threads)
                    if next_trial + i * spec.batch_size < spec.max_trials
                ]
                batches = await asyncio.gather(*(
                    loop.run_in_executor(executor, run_batch, ctx, s, min(s + spec.batch_size, spec.max_trials))
                    for s in starts
                ))
                next_trial = starts[-1] + spec.batch_size

                for outcome in (o for batch in batches for o in batch):
                    trials += 1
                    word_errors += int(outcome.word_error)
                    bit_errors += outcome.bit_errors
                    iterations += outcome.iterations
                    seconds += outcome.seconds
                    if word_errors >= spec.stop_word_errors or trials >= spec.max_trials:
                        break

                logger.debug(f"{spec.decoder_id} @ {snr_db:g} dB: {word_errors} errors in {trials} trials")
                self._publish(Topics.BATCH_FINISHED, BatchProgress(spec.decoder_id, snr_db, trials, word_errors))

        if word_errors == 0:
            logger.warning(f"{spec.decoder_id} @ {snr_db:g} dB: trial cap {spec.max_trials} reached without errors")

        low, high = wilson_interval(word_errors, trials)
        record = SweepRecord(
            decoder=spec.decoder_id,
            code=str(spec.code_ref),
            snr_db=snr_db,
            alpha=resolved.get("alpha"),
            mu1=resolved.get("mu1", resolved.get("mu")),
            mu2=resolved.get("mu2"),
            trials=trials,
            word_errors=word_errors,
            bit_errors=bit_errors,
            wer=word_errors / trials,
            wer_ci_low=low,
            wer_ci_high=high,
            ber=bit_errors / (trials * h.n_vars),
            avg_iterations=iterations / trials,
            avg_decode_seconds=seconds / trials,
            seed=spec.master_seed,
        )
        logger.info(
            f"{spec.decoder_id} @ {snr_db:g} dB: WER={record.wer:.3e} "
            f"[{low:.3e}, {high:.3e}] BER={record.ber:.3e} after {trials} trials"
        )
        self._publish(Topics.POINT_FINISHED, record)
        return record

    async def sweep_snr(self, spec: ExperimentSpec) -> list[SweepRecord]:
        """One record per SNR point, each on its own seed stream."""
        records = [
            await self.run_point(spec, {"snr_db": snr}, point_index=i)
            for i, snr in enumerate(spec.snr_points)
        ]
        self._publish(Topics.SWEEP_FINISHED, records)
        return records

    async def sweep_alpha(self, spec: ExperimentSpec, alpha_grid: list[float]) -> list[SweepRecord]:
        """Penalized decoder at the first SNR point, one record per alpha.

        Alphas failing the convexity guard yield failed records.
        """
        if spec.decoder_id != DECODER_PENALIZED:
            raise ParameterError(f"alpha sweeps need the {DECODER_PENALIZED} decoder, not {spec.decoder_id}")
        if not alpha_grid:
            raise ParameterError("alpha grid must not be empty")

        snr_db = spec.snr_points[0]
        records = []
        for alpha in alpha_grid:
            assignment = {"snr_db": snr_db, "alpha": float(alpha)}
            try:
                records.append(await self.run_point(spec, assignment))
            except ParameterError as e:
                logger.error(f"alpha={alpha:g}: {e}")
                records.append(failed_record(spec, snr_db, {**spec.decoder_params, **assignment}, e))
        self._publish(Topics.SWEEP_FINISHED, records)
        return records

    async def sweep_mu(
        self,
        spec: ExperimentSpec,
        mu1_grid: list[float],
        mu2_grid: list[float],
    ) -> list[SweepRecord]:
        """l2-box decoder at the first SNR point over mu1 x mu2, mu1-major order."""
        if spec.decoder_id != DECODER_L2BOX:
            raise ParameterError(f"mu sweeps need the {DECODER_L2BOX} decoder, not {spec.decoder_id}")
        if not mu1_grid or not mu2_grid:
            raise ParameterError("mu grids must not be empty")
        if min(mu1_grid) <= 0 or min(mu2_grid) <= 0:
            raise ParameterError("mu1 and mu2 must be positive")

        snr_db = spec.snr_points[0]
        records = [
            await self.run_point(spec, {"snr_db": snr_db, "mu1": float(mu1), "mu2": float(mu2)})
            for mu1 in mu1_grid
            for mu2 in mu2_grid
        ]
        self._publish(Topics.SWEEP_FINISHED, records)
        return records

    async def compare_decoders(self, spec: ExperimentSpec, decoder_ids: list[str]) -> list[SweepRecord]:
        """Same SNR sweep, same seed streams, several decoders.

        Parameters in ``spec.decoder_params`` reach every decoder that accepts
        them. A decoder that cannot run contributes failed records.
        """
        if not decoder_ids:
            raise ParameterError("no decoders to compare")

        records = []
        for decoder_id in decoder_ids:
            decoder_spec = spec.with_updates(decoder_id=decoder_id)
            try:
                records.extend(await self.sweep_snr(decoder_spec))
            except (ParameterError, DecoderNotFoundError) as e:
                logger.error(f"{decoder_id}: {e}")
                records.extend(failed_record(decoder_spec, snr, spec.decoder_params, e) for snr in spec.snr_points)
        return records
