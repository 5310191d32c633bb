"""Turbo codec tests: constituent encoder, BCJR, and the full loop."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qostbc.modem import LlrFrame
from qostbc.turbo import (
    BitFrame,
    TurboConfig,
    bcjr_decode,
    channel_deinterleave,
    channel_interleave,
    rsc_encode,
    turbo_decode,
    turbo_encode,
    turbo_interleaver,
)


def _naive_rsc(bits):
    """Independent shift-register transcription of the (7,5) recursive code."""
    d1 = d2 = 0
    parity = []
    for u in bits:
        a = u ^ d1 ^ d2
        parity.append(a ^ d2)
        d1, d2 = a, d1
    tail = []
    for _ in range(2):
        u = d1 ^ d2
        a = 0
        tail.extend([u, a ^ d2])
        d1, d2 = a, d1
    return parity, tail, (d1, d2)


def test_impulse_response_matches_hand_run():
    # hand-computed parity of an impulse through the 4-state trellis:
    # 1 1 1 0 then the period-3 pattern 1 1 0 repeating
    bits = np.zeros(10, dtype=int)
    bits[0] = 1
    parity, tail = rsc_encode(bits)
    assert parity.tolist() == [1, 1, 1, 0, 1, 1, 0, 1, 1, 0]
    assert tail.tolist() == [1, 0, 1, 1]


def test_zero_input_encodes_to_zero():
    parity, tail = rsc_encode(np.zeros(64, dtype=int))
    assert not parity.any()
    assert not tail.any()


@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
@settings(max_examples=60, deadline=None)
def test_rsc_matches_naive_and_terminates(bits):
    parity, tail = rsc_encode(bits)
    n_parity, n_tail, end_state = _naive_rsc(bits)
    assert parity.tolist() == n_parity
    assert tail.tolist() == n_tail
    assert end_state == (0, 0)


def test_rsc_rejects_empty_input():
    with pytest.raises(ValueError):
        rsc_encode([])


def test_interleaver_is_a_seeded_permutation():
    p = turbo_interleaver(1022, seed=3)
    assert sorted(p.tolist()) == list(range(1022))
    assert np.array_equal(p, turbo_interleaver(1022, seed=3))
    assert not np.array_equal(p, turbo_interleaver(1022, seed=4))


def test_turbo_and_channel_interleavers_differ_for_same_seed():
    k = 256
    p_turbo = turbo_interleaver(k, seed=7)
    p_chan = channel_interleave(np.arange(k), seed=7)
    assert not np.array_equal(p_turbo, p_chan)


def test_channel_interleave_round_trip():
    rng = np.random.default_rng(1)
    x = rng.standard_normal(777)
    y = channel_interleave(x, seed=9)
    assert not np.array_equal(x, y)
    assert np.array_equal(channel_deinterleave(y, seed=9), x)


def test_coded_frame_layout():
    cfg = TurboConfig()
    k = 1022
    frame = BitFrame(np.random.default_rng(0).integers(0, 2, k))
    coded = turbo_encode(frame, cfg)
    assert coded.total_length == 3 * k + 8 == 3074
    wire = coded.serialize()
    assert wire.size == 3074
    assert np.array_equal(wire[:k], frame.bits)
    assert np.array_equal(wire[k : 2 * k], coded.parity1)
    assert np.array_equal(wire[2 * k : 3 * k], coded.parity2)
    # parity1 is the plain-order constituent, parity2 the interleaved one
    p1, t1 = rsc_encode(frame.bits)
    perm = turbo_interleaver(k, cfg.interleaver_seed)
    p2, t2 = rsc_encode(frame.bits[perm])
    assert np.array_equal(coded.parity1, p1)
    assert np.array_equal(coded.parity2, p2)
    assert np.array_equal(coded.tail, np.concatenate([t1, t2]))


def test_turbo_config_validation():
    with pytest.raises(ValueError):
        TurboConfig(iterations=0)
    with pytest.raises(ValueError):
        TurboConfig(generators=(0o17, 0o15), memory=2)


def _exhaustive_map(sys_llr, par_llr, apriori, tail_sys, tail_par):
    """Posterior LLRs by brute-force marginalisation over all info words."""
    K = len(sys_llr)
    words = np.array(
        [[(w >> (K - 1 - i)) & 1 for i in range(K)] for w in range(2**K)]
    )
    logp = np.zeros(2**K)
    for w in range(2**K):
        u = words[w]
        parity, tail = rsc_encode(u)
        ts, tp = tail[0::2], tail[1::2]
        logp[w] = 0.5 * (
            np.sum((1 - 2 * u) * (sys_llr + apriori))
            + np.sum((1 - 2 * parity) * par_llr)
            + np.sum((1 - 2 * ts) * tail_sys)
            + np.sum((1 - 2 * tp) * tail_par)
        )
    post = np.empty(K)
    for k in range(K):
        one = words[:, k] == 1
        post[k] = np.logaddexp.reduce(logp[~one]) - np.logaddexp.reduce(logp[one])
    return post


def test_bcjr_equals_exhaustive_map():
    rng = np.random.default_rng(42)
    K = 8
    for _ in range(30):
        sys_llr = rng.normal(0, 3, K)
        par_llr = rng.normal(0, 3, K)
        apriori = rng.normal(0, 1, K)
        ts = rng.normal(0, 3, 2)
        tp = rng.normal(0, 3, 2)
        post, _ = bcjr_decode(sys_llr, par_llr, apriori, tail_sys=ts, tail_par=tp)
        oracle = _exhaustive_map(sys_llr, par_llr, apriori, ts, tp)
        assert np.abs(post.values - oracle).max() < 1e-6


def test_bcjr_posterior_identity():
    # posterior = apriori + channel systematic + extrinsic
    rng = np.random.default_rng(17)
    K = 200
    sys_llr = rng.normal(0, 2, K)
    par_llr = rng.normal(0, 2, K)
    apriori = rng.normal(0, 1, K)
    ts = rng.normal(0, 2, 2)
    tp = rng.normal(0, 2, 2)
    post, ext = bcjr_decode(sys_llr, par_llr, apriori, tail_sys=ts, tail_par=tp)
    resid = post.values - apriori - sys_llr - ext.values
    assert np.abs(resid).max() < 1e-9


def test_bcjr_all_zero_input_gives_zero_posteriors():
    K = 50
    z = np.zeros(K)
    post, ext = bcjr_decode(z, z, z, tail_sys=np.zeros(2), tail_par=np.zeros(2))
    assert np.abs(post.values).max() < 1e-9
    assert np.abs(ext.values).max() < 1e-9


def test_bcjr_length_validation():
    with pytest.raises(ValueError):
        bcjr_decode(np.zeros(8), np.zeros(7), np.zeros(8))
    with pytest.raises(ValueError):
        bcjr_decode(np.zeros(8), np.zeros(8), np.zeros(8), tail_sys=np.zeros(1), tail_par=np.zeros(2))


def _llrs_for(bits, magnitude=8.0):
    return magnitude * (1.0 - 2.0 * np.asarray(bits, dtype=float))


@pytest.mark.parametrize("k", [8, 100, 1022])
def test_turbo_round_trip_clean_llrs(k):
    cfg = TurboConfig()
    rng = np.random.default_rng(k)
    frame = BitFrame(rng.integers(0, 2, k))
    wire = turbo_encode(frame, cfg).serialize()
    decoded = turbo_decode(LlrFrame(_llrs_for(wire)), cfg)
    assert np.array_equal(decoded.bits, frame.bits)


def test_turbo_decode_rejects_unparseable_length():
    cfg = TurboConfig()
    with pytest.raises(ValueError):
        turbo_decode(np.zeros(100), cfg)  # (100-8) % 3 != 0


def test_turbo_corrects_noisy_llrs():
    # Gaussian channel LLRs around +-2; a rate-1/3 code at this quality
    # decodes a 1022-bit frame essentially error-free
    cfg = TurboConfig(iterations=4)
    rng = np.random.default_rng(77)
    frame = BitFrame(rng.integers(0, 2, 1022))
    wire = turbo_encode(frame, cfg).serialize()
    # BPSK over AWGN with sigma^2 = 1: LLR = 2y/sigma^2
    tx = 1.0 - 2.0 * wire.astype(float)
    y = tx + rng.normal(0, 1.0, wire.size)
    decoded = turbo_decode(LlrFrame(2.0 * y), cfg)
    n_err = int(np.count_nonzero(decoded.bits != frame.bits))
    assert n_err == 0


def test_iteration_trend_mean_ber_non_increasing():
    # fixed moderate noise; average over many frames
    rng = np.random.default_rng(5)
    k = 128
    sigma = 1.25
    frames = []
    for _ in range(200):
        frame = np.random.default_rng(rng.integers(2**32)).integers(0, 2, k)
        frames.append(frame)
    bers = []
    for iters in (1, 5):
        cfg = TurboConfig(iterations=iters)
        errs = 0
        for i, bits in enumerate(frames):
            frame = BitFrame(bits)
            wire = turbo_encode(frame, cfg).serialize()
            noise_rng = np.random.default_rng(i)
            y = (1.0 - 2.0 * wire.astype(float)) + noise_rng.normal(0, sigma, wire.size)
            decoded = turbo_decode(LlrFrame(2.0 * y / sigma**2), cfg)
            errs += int(np.count_nonzero(decoded.bits != bits))
        bers.append(errs / (len(frames) * k))
    assert bers[1] <= bers[0]


def test_bit_frame_validation():
    with pytest.raises(ValueError):
        BitFrame(np.array([], dtype=int))
    with pytest.raises(ValueError):
        BitFrame(np.array([0, 2]))
    f = BitFrame(np.array([0, 1, 1]))
    assert f.k == len(f) == 3
