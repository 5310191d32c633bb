"""Turbo-coded 4x1 MISO link simulation with quasi-orthogonal STBC.

Library + CLI for link-level Monte-Carlo BER studies: four-antenna
rate-one quasi-orthogonal space-time block coding, pairwise-decoupled
maximum-likelihood detection, and a rate-1/3 turbo code decoded with the
exact log-MAP algorithm.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .channel import (
    ChannelMode,
    NoiseSpec,
    PathGains,
    add_awgn,
    draw_path_gains,
    draw_path_gains_batch,
    ebn0_db_to_snr_db,
    rng_stream,
    snr_db_to_linear,
    snr_linear_to_db,
)
from .modem import (
    Constellation,
    DemapMode,
    DetectorOutput,
    LlrFrame,
    Scheme,
    demap_hard,
    demap_soft,
    make_constellation,
    map_bits,
)
from .sim import (
    BerCurve,
    BerRecord,
    Coding,
    SimConfig,
    ber_gain_db,
    run_ber_point,
    run_frame,
    siso_rayleigh_reference,
    sweep,
)
from .stbc import (
    DetectedBlock,
    detect_blocks,
    encode_block,
    encode_blocks,
    full_metric,
    ml_detect,
    ml_detect_joint,
    pair_metric_f14,
    pair_metric_f23,
)
from .turbo import (
    BitFrame,
    CodedFrame,
    Termination,
    TurboConfig,
    bcjr_decode,
    channel_deinterleave,
    channel_interleave,
    rsc_encode,
    turbo_decode,
    turbo_encode,
    turbo_interleaver,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ChannelMode",
    "NoiseSpec",
    "PathGains",
    "add_awgn",
    "draw_path_gains",
    "draw_path_gains_batch",
    "ebn0_db_to_snr_db",
    "rng_stream",
    "snr_db_to_linear",
    "snr_linear_to_db",
    "Constellation",
    "DemapMode",
    "DetectorOutput",
    "LlrFrame",
    "Scheme",
    "demap_hard",
    "demap_soft",
    "make_constellation",
    "map_bits",
    "BerCurve",
    "BerRecord",
    "Coding",
    "SimConfig",
    "ber_gain_db",
    "run_ber_point",
    "run_frame",
    "siso_rayleigh_reference",
    "sweep",
    "DetectedBlock",
    "detect_blocks",
    "encode_block",
    "encode_blocks",
    "full_metric",
    "ml_detect",
    "ml_detect_joint",
    "pair_metric_f14",
    "pair_metric_f23",
    "BitFrame",
    "CodedFrame",
    "Termination",
    "TurboConfig",
    "bcjr_decode",
    "channel_deinterleave",
    "channel_interleave",
    "rsc_encode",
    "turbo_decode",
    "turbo_encode",
    "turbo_interleaver",
    "__version__",
]
