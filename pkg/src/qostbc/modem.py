"""Constellations, bit/symbol mapping, and LLR demapping.

Four unit-average-energy constellations with fixed Gray labelings:

* ``QPSK``  -- (+/-1 +/- 1j)/sqrt(2), one bit per axis.
* ``QAM4``  -- square 4-QAM on the axes {1, 1j, -1, -1j} (a 45-degree
  rotation of QPSK, kept as a distinct scheme).
* ``PSK16`` -- exp(2j*pi*k/16) with a binary-reflected Gray ring label.
* ``QAM16`` -- {+/-1, +/-3}^2 / sqrt(10), per-axis Gray labels.

The exact (index, label, point) tables are frozen in
``docs/constellations.md``; they are part of the package contract, so two
independent builds produce bit-identical mappings.

LLR sign convention used throughout the package: **positive LLR means bit
0 is the more likely value**.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

# Cap applied to every demapped LLR so that noiseless (zero-variance)
# operation still yields finite soft values.
LLR_MAX = 1000.0

_SQRT2 = np.sqrt(2.0)
_SQRT10 = np.sqrt(10.0)


class Scheme(enum.Enum):
    """Supported modulation schemes."""

    QPSK = "qpsk"
    QAM4 = "qam4"
    PSK16 = "psk16"
    QAM16 = "qam16"


class DemapMode(enum.Enum):
    """Soft-demapper operating mode."""

    HARD = "hard"
    MAXLOG = "maxlog"


@dataclass
class LlrFrame:
    """A frame of log-likelihood ratios (positive => bit 0 more likely)."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("LLR frame must be one-dimensional")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("LLR frame contains non-finite values")

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Constellation:
    """Unit-average-energy point set with Gray bit labels.

    ``labels[i]`` is the bit-string carried by ``points[i]``; the first
    character is the first bit of the symbol's bit group.  Instances are
    immutable and safe to share across threads/processes.
    """

    name: Scheme
    points: np.ndarray
    labels: tuple[str, ...]
    bits_per_symbol: int
    # derived lookup tables, filled in __post_init__
    _bits_to_index: np.ndarray = field(repr=False, default=None)
    _label_bits: np.ndarray = field(repr=False, default=None)
    _bit_is_one: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        points = np.ascontiguousarray(self.points, dtype=np.complex128)
        object.__setattr__(self, "points", points)
        if len(self.labels) != points.size:
            raise ValueError("one label per point required")
        if any(len(lab) != self.bits_per_symbol for lab in self.labels):
            raise ValueError("label width must equal bits_per_symbol")
        label_ints = np.array([int(lab, 2) for lab in self.labels])
        if len(set(label_ints.tolist())) != points.size:
            raise ValueError("labels must be a bijection onto the points")
        table = np.empty(2**self.bits_per_symbol, dtype=np.int64)
        table[label_ints] = np.arange(points.size)
        bits = np.array(
            [[int(ch) for ch in lab] for lab in self.labels], dtype=np.int8
        )
        object.__setattr__(self, "_bits_to_index", table)
        object.__setattr__(self, "_label_bits", bits)
        object.__setattr__(self, "_bit_is_one", bits.T.astype(bool))

    @property
    def order(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class DetectorOutput:
    """Per-symbol detector output consumed by :func:`demap_soft`.

    ``HARD`` mode carries the decided point index for each symbol;
    ``MAXLOG`` mode carries, for each symbol, the minimum pairwise detection
    metric achieved by every candidate point (shape ``(n_symbols, order)``).
    """

    mode: DemapMode
    hard_indices: np.ndarray | None = None
    candidate_metrics: np.ndarray | None = None


def _gray(n: int) -> int:
    return n ^ (n >> 1)


def make_constellation(name: Scheme | str) -> Constellation:
    """Build one of the four supported constellations by name."""
    scheme = name if isinstance(name, Scheme) else Scheme(name)
    if scheme is Scheme.QPSK:
        labels = tuple(f"{k:02b}" for k in range(4))
        points = np.array(
            [((1 - 2 * (k >> 1)) + 1j * (1 - 2 * (k & 1))) / _SQRT2 for k in range(4)]
        )
    elif scheme is Scheme.QAM4:
        # Gray cycle around the diamond 1 -> 1j -> -1 -> -1j.
        labels = ("00", "01", "11", "10")
        points = np.array([1.0 + 0j, 1j, -1.0 + 0j, -1j])
    elif scheme is Scheme.PSK16:
        labels = tuple(f"{_gray(k):04b}" for k in range(16))
        points = np.exp(2j * np.pi * np.arange(16) / 16.0)
    elif scheme is Scheme.QAM16:
        amps = (-3.0, -1.0, 1.0, 3.0)
        gray2 = ("00", "01", "11", "10")
        labels = tuple(gray2[i] + gray2[q] for i in range(4) for q in range(4))
        points = np.array(
            [(amps[i] + 1j * amps[q]) / _SQRT10 for i in range(4) for q in range(4)]
        )
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown scheme {name!r}")
    return Constellation(
        name=scheme,
        points=points,
        labels=labels,
        bits_per_symbol=len(labels[0]),
    )


def map_bits(bits, c: Constellation) -> np.ndarray:
    """Map a bit sequence to constellation symbols.

    Parameters
    ----------
    bits : array_like of {0, 1}
        Length must be a multiple of ``c.bits_per_symbol``.
    c : Constellation

    Returns
    -------
    ndarray of complex128, one symbol per bit group.
    """
    b = np.asarray(bits, dtype=np.int64).ravel()
    bps = c.bits_per_symbol
    if b.size % bps:
        raise ValueError(f"bit count {b.size} is not a multiple of {bps}")
    if b.size and (b.min() < 0 or b.max() > 1):
        raise ValueError("bits must be 0 or 1")
    weights = 1 << np.arange(bps - 1, -1, -1)
    vals = b.reshape(-1, bps) @ weights
    return c.points[c._bits_to_index[vals]]


def nearest_point(symbols, c: Constellation) -> np.ndarray:
    """Indices of the closest constellation points (ties -> lowest index)."""
    s = np.asarray(symbols, dtype=np.complex128).ravel()
    d2 = np.abs(s[:, None] - c.points[None, :]) ** 2
    return np.argmin(d2, axis=1)


def demap_hard(symbols, c: Constellation) -> np.ndarray:
    """Minimum-distance hard decisions back to bits.

    Equidistant points resolve to the lowest point index, so the decision is
    deterministic.
    """
    idx = nearest_point(symbols, c)
    return c._label_bits[idx].ravel().astype(np.int8)


def demap_soft(block_metrics: DetectorOutput, c: Constellation, noise_var: float) -> LlrFrame:
    """Turn detector output into bit LLRs (positive => bit 0).

    ``noise_var`` is the total (complex) noise variance per received sample.
    In ``HARD`` mode each decided bit becomes ``+/- 4/noise_var``.  In
    ``MAXLOG`` mode the LLR of bit ``b`` is::

        [min metric over candidates with b=1  -  min over b=0] / noise_var

    Any common offset in the candidate metrics cancels in the difference.
    All outputs are clipped to ``+/- LLR_MAX`` so a zero-variance (noiseless)
    run still produces finite values.
    """
    if noise_var < 0:
        raise ValueError("noise_var must be non-negative")
    if block_metrics.mode is DemapMode.HARD:
        if block_metrics.hard_indices is None:
            raise ValueError("HARD demap requires hard_indices")
        idx = np.asarray(block_metrics.hard_indices, dtype=np.int64).ravel()
        bits = c._label_bits[idx].astype(np.float64)
        mag = LLR_MAX if noise_var == 0 else min(4.0 / noise_var, LLR_MAX)
        llr = mag * (1.0 - 2.0 * bits)
    elif block_metrics.mode is DemapMode.MAXLOG:
        if block_metrics.candidate_metrics is None:
            raise ValueError("MAXLOG demap requires candidate_metrics")
        m = np.asarray(block_metrics.candidate_metrics, dtype=np.float64)
        if m.ndim != 2 or m.shape[1] != c.order:
            raise ValueError("candidate_metrics must have shape (n_symbols, order)")
        scale = 1.0 / noise_var if noise_var > 0 else np.inf
        ones = c._bit_is_one  # (bits_per_symbol, order)
        llr = np.empty((m.shape[0], c.bits_per_symbol))
        for b in range(c.bits_per_symbol):
            m1 = np.where(ones[b], m, np.inf).min(axis=1)
            m0 = np.where(ones[b], np.inf, m).min(axis=1)
            gap = m1 - m0
            with np.errstate(invalid="ignore"):
                raw = gap * scale
            # zero gap at infinite scale is still a zero LLR
            raw[gap == 0.0] = 0.0
            llr[:, b] = np.clip(raw, -LLR_MAX, LLR_MAX)
    else:
        raise ValueError(f"unknown demap mode {block_metrics.mode!r}")
    return LlrFrame(llr.ravel())
