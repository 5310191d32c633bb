"""Rate-1/3 parallel-concatenated turbo code with exact log-MAP decoding.

Both constituents are the recursive systematic convolutional code with
feedback polynomial 7 (octal) and forward polynomial 5 (octal), memory 2
(a 4-state trellis).  Each constituent is driven back to the zero state by
its own ``memory`` flush bits, which are transmitted together with their
parities, so a frame of K information bits encodes to ``3K + 4*memory``
coded bits:

    [ systematic K | parity1 K | parity2 K | tail1 2m | tail2 2m ]

where ``tail_i`` interleaves flush inputs and their parities as
``u0, p0, u1, p1, ...``.  The turbo interleaver is a seeded uniform random
permutation; a separate seeded permutation (the channel interleaver)
scatters coded bits across space-time blocks.

Decoding runs the exact forward-backward algorithm (max* = Jacobian
logarithm, no approximation) on each constituent, exchanging extrinsic
information.  LLR convention everywhere: positive means bit 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .channel import (
    PURPOSE_CHANNEL_INTERLEAVER,
    PURPOSE_TURBO_INTERLEAVER,
    rng_stream,
)
from .modem import LlrFrame


class Termination(enum.Enum):
    """Trellis termination policy (both constituents flushed to state 0)."""

    BOTH_TERMINATED = "both-terminated"


@dataclass(frozen=True)
class TurboConfig:
    """Encoder/decoder parameters.

    ``generators`` is the (feedback, forward) octal pair of the constituent
    code; ``memory`` must match its degree.
    """

    generators: tuple[int, int] = (0o7, 0o5)
    memory: int = 2
    interleaver_seed: int = 1
    iterations: int = 4
    termination: Termination = Termination.BOTH_TERMINATED

    def __post_init__(self):
        fb, fw = self.generators
        deg = max(fb.bit_length(), fw.bit_length()) - 1
        if deg != self.memory:
            raise ValueError(
                f"generator pair {self.generators} has memory {deg}, "
                f"config says {self.memory}"
            )
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")


@dataclass
class BitFrame:
    """A frame of information bits."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.ascontiguousarray(self.bits, dtype=np.int8)
        if self.bits.ndim != 1 or self.bits.size == 0:
            raise ValueError("bit frame must be a non-empty 1-D sequence")
        if self.bits.min() < 0 or self.bits.max() > 1:
            raise ValueError("bits must be 0 or 1")

    @property
    def k(self) -> int:
        return self.bits.size

    def __len__(self) -> int:
        return self.bits.size


@dataclass(frozen=True)
class CodedFrame:
    """Encoder output: systematic, both parity streams, and the tails."""

    systematic: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    tail: np.ndarray  # [tail1 (2*memory) | tail2 (2*memory)], each u,p interleaved

    @property
    def k(self) -> int:
        return self.systematic.size

    @property
    def total_length(self) -> int:
        return 3 * self.k + self.tail.size

    def serialize(self) -> np.ndarray:
        """Wire order: systematic, parity1, parity2, tail1, tail2."""
        return np.concatenate(
            [self.systematic, self.parity1, self.parity2, self.tail]
        ).astype(np.int8)


@dataclass(frozen=True)
class _Trellis:
    n_states: int
    next_state: np.ndarray  # (2, S) int32
    parity: np.ndarray  # (2, S) int32
    term_input: np.ndarray  # (S,) int32
    term_parity: np.ndarray  # (S,) int32
    term_next: np.ndarray  # (S,) int32


def _bit_parity(x: int) -> int:
    return bin(x).count("1") & 1


@lru_cache(maxsize=None)
def _build_trellis(generators: tuple[int, int]) -> _Trellis:
    feedback, forward = generators
    memory = max(feedback.bit_length(), forward.bit_length()) - 1
    n_states = 1 << memory
    next_state = np.zeros((2, n_states), dtype=np.int32)
    parity = np.zeros((2, n_states), dtype=np.int32)
    term_input = np.zeros(n_states, dtype=np.int32)
    term_parity = np.zeros(n_states, dtype=np.int32)
    term_next = np.zeros(n_states, dtype=np.int32)
    for s in range(n_states):
        for u in (0, 1):
            a = _bit_parity(feedback & ((u << memory) | s))
            parity[u, s] = _bit_parity(forward & ((a << memory) | s))
            next_state[u, s] = (a << (memory - 1)) | (s >> 1)
        # flush input makes the feedback bit zero
        term_input[s] = _bit_parity(feedback & s)
        term_parity[s] = _bit_parity(forward & s)
        term_next[s] = s >> 1
    return _Trellis(
        n_states=n_states,
        next_state=next_state,
        parity=parity,
        term_input=term_input,
        term_parity=term_parity,
        term_next=term_next,
    )


def rsc_encode(bits, generators: tuple[int, int] = (0o7, 0o5)):
    """Encode one recursive systematic constituent.

    Returns ``(parity, tail)`` where ``parity`` has one bit per input bit
    and ``tail`` holds the ``memory`` flush steps as ``u0, p0, u1, p1, ...``
    chosen to return the register to the zero state.
    """
    b = np.asarray(bits, dtype=np.int64).ravel()
    if b.size == 0:
        raise ValueError("empty input frame")
    tr = _build_trellis(generators)
    memory = tr.n_states.bit_length() - 1
    parity = np.empty(b.size, dtype=np.int8)
    par_tab = tr.parity
    nxt_tab = tr.next_state
    s = 0
    for i, u in enumerate(b):
        parity[i] = par_tab[u, s]
        s = nxt_tab[u, s]
    tail = np.empty(2 * memory, dtype=np.int8)
    for j in range(memory):
        tail[2 * j] = tr.term_input[s]
        tail[2 * j + 1] = tr.term_parity[s]
        s = tr.term_next[s]
    assert s == 0
    return parity, tail


def turbo_interleaver(k: int, seed: int) -> np.ndarray:
    """Seeded uniform random permutation of 0..k-1."""
    if k < 1:
        raise ValueError("frame length must be positive")
    return rng_stream(seed, PURPOSE_TURBO_INTERLEAVER).permutation(k)


def turbo_encode(frame: BitFrame, cfg: TurboConfig) -> CodedFrame:
    """Parallel-concatenated encoding of one information frame."""
    bits = frame.bits.astype(np.int64)
    perm = turbo_interleaver(bits.size, cfg.interleaver_seed)
    parity1, tail1 = rsc_encode(bits, cfg.generators)
    parity2, tail2 = rsc_encode(bits[perm], cfg.generators)
    return CodedFrame(
        systematic=frame.bits.copy(),
        parity1=parity1,
        parity2=parity2,
        tail=np.concatenate([tail1, tail2]),
    )


def channel_interleave(values: np.ndarray, seed: int) -> np.ndarray:
    """Apply the seeded channel permutation (works on bits or LLR values)."""
    v = np.asarray(values)
    perm = rng_stream(seed, PURPOSE_CHANNEL_INTERLEAVER).permutation(v.size)
    return v[perm]


def channel_deinterleave(values: np.ndarray, seed: int) -> np.ndarray:
    """Invert :func:`channel_interleave` for the same seed and length."""
    v = np.asarray(values)
    perm = rng_stream(seed, PURPOSE_CHANNEL_INTERLEAVER).permutation(v.size)
    out = np.empty_like(v)
    out[perm] = v
    return out


def _as_llr_array(x, name: str) -> np.ndarray:
    vals = x.values if isinstance(x, LlrFrame) else np.asarray(x, dtype=np.float64)
    return np.ascontiguousarray(vals, dtype=np.float64)


def bcjr_decode(
    sys_llr,
    par_llr,
    apriori,
    generators: tuple[int, int] = (0o7, 0o5),
    tail_sys=None,
    tail_par=None,
):
    """Exact log-MAP decoding of one constituent code.

    Parameters
    ----------
    sys_llr, par_llr, apriori
        Channel LLRs of the systematic and parity bits and the a-priori
        LLRs of the information bits; all length K.
    tail_sys, tail_par
        LLRs of the ``memory`` flush bits and their parities.  When omitted
        the end state is treated as unknown.

    Returns
    -------
    (posterior, extrinsic) : tuple of LlrFrame
        ``posterior = apriori + sys_llr + extrinsic`` elementwise.
    """
    sys_v = _as_llr_array(sys_llr, "sys_llr")
    par_v = _as_llr_array(par_llr, "par_llr")
    apr_v = _as_llr_array(apriori, "apriori")
    if not (sys_v.size == par_v.size == apr_v.size):
        raise ValueError("sys_llr, par_llr and apriori must share one length")
    tr = _build_trellis(generators)
    memory = tr.n_states.bit_length() - 1
    if tail_sys is None and tail_par is None:
        ts = np.empty(0)
        tp = np.empty(0)
    else:
        ts = _as_llr_array(tail_sys, "tail_sys")
        tp = _as_llr_array(tail_par, "tail_par")
        if ts.size != memory or tp.size != memory:
            raise ValueError(f"tail LLR arrays must have length {memory}")
    posterior = _kernels.bcjr_posteriors(
        sys_v,
        par_v,
        apr_v,
        ts,
        tp,
        tr.next_state,
        tr.parity,
        tr.term_input,
        tr.term_parity,
        tr.term_next,
    )
    extrinsic = posterior - apr_v - sys_v
    return LlrFrame(posterior), LlrFrame(extrinsic)


def _parse_coded_llrs(values: np.ndarray, memory: int):
    n = values.size
    if (n - 4 * memory) % 3 or n <= 4 * memory:
        raise ValueError(f"coded LLR frame of length {n} does not parse")
    k = (n - 4 * memory) // 3
    sys_v = values[:k]
    par1 = values[k : 2 * k]
    par2 = values[2 * k : 3 * k]
    t1 = values[3 * k : 3 * k + 2 * memory]
    t2 = values[3 * k + 2 * memory :]
    return k, sys_v, par1, par2, (t1[0::2], t1[1::2]), (t2[0::2], t2[1::2])


def turbo_decode(coded_llrs, cfg: TurboConfig) -> BitFrame:
    """Iterative decoding of a serialized coded frame back to info bits.

    Runs ``cfg.iterations`` rounds of constituent-1 / constituent-2 log-MAP
    passes with extrinsic exchange, then hard-decides the final posterior
    (LLR >= 0 decodes to bit 0).
    """
    values = _as_llr_array(coded_llrs, "coded_llrs")
    k, sys_v, par1, par2, (t1s, t1p), (t2s, t2p) = _parse_coded_llrs(
        values, cfg.memory
    )
    perm = turbo_interleaver(k, cfg.interleaver_seed)
    sys_perm = sys_v[perm]
    apriori1 = np.zeros(k)
    ext1 = np.zeros(k)
    inv = np.empty(k, dtype=np.int64)
    inv[perm] = np.arange(k)
    for _ in range(cfg.iterations):
        post1, e1 = bcjr_decode(
            sys_v, par1, apriori1, cfg.generators, tail_sys=t1s, tail_par=t1p
        )
        ext1 = e1.values
        post2, e2 = bcjr_decode(
            sys_perm, par2, ext1[perm], cfg.generators, tail_sys=t2s, tail_par=t2p
        )
        apriori1 = e2.values[inv]
    final_posterior = sys_v + ext1 + apriori1
    return BitFrame((final_posterior < 0).astype(np.int8))
