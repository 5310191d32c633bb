"""Monte-Carlo BER harness for the turbo-coded 4x1 link.

One frame is processed as: draw K information bits -> (turbo encode ->
channel interleave) -> zero-pad up to a whole number of space-time blocks
-> map to symbols -> encode blocks -> quasi-static Rayleigh gains + AWGN ->
pairwise ML detection -> (max-log soft demap -> deinterleave -> turbo
decode | hard demap) -> compare against the transmitted bits.

Every random draw comes from a stream keyed by (master_seed, frame_index,
purpose), so a sweep is reproducible bit-for-bit and independent of how
frames or SNR points are scheduled across workers.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channel as ch
from . import stbc
from .modem import (
    DemapMode,
    DetectorOutput,
    Scheme,
    demap_soft,
    make_constellation,
    map_bits,
)
from .turbo import (
    BitFrame,
    TurboConfig,
    channel_deinterleave,
    channel_interleave,
    turbo_decode,
    turbo_encode,
)

N_TX = 4
BLOCK_SYMBOLS = 4

# extra purpose tags for the single-antenna reference link
_PURPOSE_SISO_BITS = 5
_PURPOSE_SISO_GAINS = 6
_PURPOSE_SISO_NOISE = 7


class Coding(enum.Enum):
    UNCODED = "uncoded"
    TURBO = "turbo"


@dataclass(frozen=True)
class SimConfig:
    """Complete description of one simulation campaign."""

    modulation: Scheme = Scheme.QAM4
    coding: Coding = Coding.TURBO
    turbo: TurboConfig = field(default_factory=TurboConfig)
    frame_bits: int = 1022
    snr_points_db: tuple[float, ...] = tuple(float(s) for s in range(11))
    min_frames: int = 10
    min_bit_errors: int = 100
    max_frames: int = 50
    master_seed: int = 1
    channel_mode: ch.ChannelMode = ch.ChannelMode.RAYLEIGH_AWGN
    n_rx: int = 1

    def __post_init__(self):
        if self.frame_bits < 1:
            raise ValueError("frame_bits must be positive")
        if self.min_frames < 1 or self.max_frames < self.min_frames:
            raise ValueError("need 1 <= min_frames <= max_frames")
        if self.min_bit_errors < 1:
            raise ValueError("min_bit_errors must be positive")
        if len(self.snr_points_db) == 0:
            raise ValueError("snr_points_db must not be empty")
        pts = tuple(float(s) for s in self.snr_points_db)
        if any(not math.isfinite(s) for s in pts):
            raise ValueError("sweep SNR points must be finite")
        if any(b >= a for a, b in zip(pts[1:], pts)):
            raise ValueError("sweep SNR points must be strictly increasing")
        object.__setattr__(self, "snr_points_db", pts)


@dataclass(frozen=True)
class BerRecord:
    """Measured error rate at one operating point."""

    snr_db: float
    frames: int
    bits_total: int
    bit_errors: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_total


@dataclass(frozen=True)
class BerCurve:
    """Sweep result: one record per SNR point, in sweep order."""

    config: SimConfig
    records: tuple[BerRecord, ...]


def _noise_spec(cfg: SimConfig, snr_db: float) -> ch.NoiseSpec:
    snr_lin = math.inf if math.isinf(snr_db) else ch.snr_db_to_linear(snr_db)
    return ch.NoiseSpec(snr_linear=snr_lin, n_tx=N_TX, mode=cfg.channel_mode)


def run_frame(cfg: SimConfig, snr_db: float, frame_index: int):
    """Simulate one frame; returns (tx_bits, rx_bits) as BitFrames."""
    c = make_constellation(cfg.modulation)
    spec = _noise_spec(cfg, snr_db)
    seed = cfg.master_seed

    bits_rng = ch.rng_stream(seed, frame_index, ch.PURPOSE_BITS)
    tx_bits = bits_rng.integers(0, 2, size=cfg.frame_bits).astype(np.int8)

    if cfg.coding is Coding.TURBO:
        coded = turbo_encode(BitFrame(tx_bits), cfg.turbo).serialize()
        wire = channel_interleave(coded, seed)
    else:
        wire = tx_bits

    bits_per_block = c.bits_per_symbol * BLOCK_SYMBOLS
    pad = (-wire.size) % bits_per_block
    padded = np.concatenate([wire, np.zeros(pad, dtype=wire.dtype)])
    symbols = map_bits(padded, c)
    blocks = symbols.reshape(-1, BLOCK_SYMBOLS)
    n_blocks = blocks.shape[0]

    gains_rng = ch.rng_stream(seed, frame_index, ch.PURPOSE_GAINS)
    gains = ch.draw_path_gains_batch(
        gains_rng, cfg.channel_mode, n_blocks, n_tx=N_TX, n_rx=cfg.n_rx
    )
    codewords = stbc.encode_blocks(blocks)
    clean = codewords @ gains
    noise_rng = ch.rng_stream(seed, frame_index, ch.PURPOSE_NOISE)
    received = ch.add_awgn(clean, spec, noise_rng)

    want_soft = cfg.coding is Coding.TURBO
    indices, soft = stbc.detect_blocks(received, gains, c, want_soft=want_soft)

    if cfg.coding is Coding.UNCODED:
        hard = c._label_bits[indices.ravel()].ravel()
        rx_bits = hard[: hard.size - pad] if pad else hard
        return BitFrame(tx_bits), BitFrame(rx_bits)

    det = DetectorOutput(
        mode=DemapMode.MAXLOG,
        candidate_metrics=soft.reshape(-1, c.order),
    )
    llrs = demap_soft(det, c, spec.complex_variance).values
    if pad:
        llrs = llrs[: llrs.size - pad]
    coded_llrs = channel_deinterleave(llrs, seed)
    decoded = turbo_decode(coded_llrs, cfg.turbo)
    return BitFrame(tx_bits), decoded


def run_ber_point(cfg: SimConfig, snr_db: float) -> BerRecord:
    """Accumulate frames at one SNR until the stopping rule is met.

    Frames run until ``min_frames`` is reached and either ``min_bit_errors``
    have been counted or ``max_frames`` caps the point.
    """
    frames = 0
    errors = 0
    while True:
        tx, rx = run_frame(cfg, snr_db, frames)
        if len(rx) != len(tx):
            raise RuntimeError("decoded frame length mismatch")
        errors += int(np.count_nonzero(tx.bits != rx.bits))
        frames += 1
        if frames >= cfg.min_frames and (
            errors >= cfg.min_bit_errors or frames >= cfg.max_frames
        ):
            break
    return BerRecord(
        snr_db=float(snr_db),
        frames=frames,
        bits_total=frames * cfg.frame_bits,
        bit_errors=errors,
    )


def _sweep_point(args) -> BerRecord:
    cfg, snr_db = args
    return run_ber_point(cfg, snr_db)


def sweep(cfg: SimConfig, workers: int = 1) -> BerCurve:
    """Run the configured SNR sweep; results identical for any worker count."""
    jobs = [(cfg, s) for s in cfg.snr_points_db]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(_sweep_point, jobs))
    else:
        records = tuple(map(_sweep_point, jobs))
    return BerCurve(config=cfg, records=records)


def ber_gain_db(ber_ref: float, ber_improved: float) -> float:
    """Error-rate ratio expressed in dB: 10*log10(ber_ref / ber_improved)."""
    if not (0.0 < ber_ref <= 1.0) or not (0.0 < ber_improved <= 1.0):
        raise ValueError("BER inputs must lie in (0, 1]")
    return 10.0 * math.log10(ber_ref / ber_improved)


def siso_rayleigh_reference(
    gamma_bar_db: float,
    scheme: Scheme = Scheme.QPSK,
    min_bit_errors: int = 500,
    min_bits: int = 10_000,
    max_bits: int = 50_000_000,
    master_seed: int = 1,
    batch_symbols: int = 20_000,
) -> BerRecord:
    """Single-antenna Rayleigh reference link (used by calibration tests).

    ``gamma_bar_db`` is the average post-detection SNR per bit.  With unit
    symbol energy the symbol SNR is ``gamma_bar * bits_per_symbol``; ML
    detection minimises |y - alpha*x|^2 per symbol.  For Gray QPSK the
    expected BER is 0.5 * (1 - sqrt(g/(1+g))).
    """
    c = make_constellation(scheme)
    gamma = ch.snr_db_to_linear(gamma_bar_db)
    snr_symbol = gamma * c.bits_per_symbol
    spec = ch.NoiseSpec(snr_linear=snr_symbol, n_tx=1)
    errors = 0
    bits_total = 0
    batch = 0
    while bits_total < min_bits or (
        errors < min_bit_errors and bits_total < max_bits
    ):
        rng_b = ch.rng_stream(master_seed, batch, _PURPOSE_SISO_BITS)
        rng_g = ch.rng_stream(master_seed, batch, _PURPOSE_SISO_GAINS)
        rng_n = ch.rng_stream(master_seed, batch, _PURPOSE_SISO_NOISE)
        tx = rng_b.integers(0, 2, size=batch_symbols * c.bits_per_symbol).astype(np.int8)
        x = map_bits(tx, c)
        alpha = ch.draw_path_gains_batch(
            rng_g, ch.ChannelMode.RAYLEIGH_AWGN, x.size, n_tx=1
        )[:, 0, 0]
        y = ch.add_awgn(alpha * x, spec, rng_n)
        d2 = np.abs(y[:, None] - alpha[:, None] * c.points[None, :]) ** 2
        rx = c._label_bits[np.argmin(d2, axis=1)].ravel()
        errors += int(np.count_nonzero(tx != rx))
        bits_total += tx.size
        batch += 1
    return BerRecord(
        snr_db=float(gamma_bar_db),
        frames=batch,
        bits_total=bits_total,
        bit_errors=errors,
    )
