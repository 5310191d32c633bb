"""Fading, noise, and RNG stream tests."""

import math

import numpy as np
import pytest

from qostbc.channel import (
    PURPOSE_GAINS,
    PURPOSE_NOISE,
    ChannelMode,
    NoiseSpec,
    add_awgn,
    draw_path_gains,
    draw_path_gains_batch,
    ebn0_db_to_snr_db,
    rng_stream,
    snr_db_to_linear,
    snr_linear_to_db,
)


def test_awgn_only_bypass_pins_first_antenna():
    rng = rng_stream(0, 0, PURPOSE_GAINS)
    g = draw_path_gains(rng, ChannelMode.AWGN_ONLY).gains
    assert g.shape == (4, 1)
    assert g[0, 0] == 1.0
    assert np.all(g[1:] == 0.0)


def test_rayleigh_gains_unit_power():
    rng = rng_stream(123, 0, PURPOSE_GAINS)
    g = draw_path_gains_batch(rng, ChannelMode.RAYLEIGH_AWGN, 250_000, n_tx=4)
    p = np.mean(np.abs(g) ** 2)
    assert abs(p - 1.0) < 0.01
    # variance split evenly between real and imaginary parts
    assert abs(np.var(g.real) - 0.5) < 0.01
    assert abs(np.var(g.imag) - 0.5) < 0.01
    assert abs(np.mean(g)) < 0.01


def test_real_imag_components_uncorrelated():
    rng = rng_stream(5, 0, PURPOSE_GAINS)
    g = draw_path_gains_batch(rng, ChannelMode.RAYLEIGH_AWGN, 200_000, n_tx=1).ravel()
    corr = np.mean(g.real * g.imag)
    assert abs(corr) < 0.01


def test_same_key_reproduces_draws():
    a = rng_stream(9, 4, PURPOSE_NOISE).standard_normal(32)
    b = rng_stream(9, 4, PURPOSE_NOISE).standard_normal(32)
    assert np.array_equal(a, b)


def test_distinct_keys_give_distinct_streams():
    a = rng_stream(9, 4, PURPOSE_NOISE).standard_normal(32)
    b = rng_stream(9, 5, PURPOSE_NOISE).standard_normal(32)
    c = rng_stream(9, 4, PURPOSE_GAINS).standard_normal(32)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_noise_variance_convention():
    # snr = 2 with n_tx = 4 makes the per-dimension variance exactly 1
    spec = NoiseSpec(snr_linear=2.0, n_tx=4)
    assert spec.per_dimension_variance == pytest.approx(1.0)
    assert spec.complex_variance == pytest.approx(2.0)
    rng = rng_stream(3, 0, PURPOSE_NOISE)
    z = np.zeros(400_000, dtype=complex)
    y = add_awgn(z, spec, rng)
    assert abs(np.var(y.real) - 1.0) < 0.01
    assert abs(np.var(y.imag) - 1.0) < 0.01


def test_noiseless_cap_is_exact_passthrough():
    spec = NoiseSpec(snr_linear=math.inf)
    assert spec.noiseless
    assert spec.per_dimension_variance == 0.0
    rng = rng_stream(0, 0, PURPOSE_NOISE)
    x = np.array([1 + 2j, -0.5 + 0.25j])
    y = add_awgn(x, spec, rng)
    assert np.array_equal(x, y)


def test_noise_spec_rejects_bad_snr():
    with pytest.raises(ValueError):
        NoiseSpec(snr_linear=0.0)
    with pytest.raises(ValueError):
        NoiseSpec(snr_linear=-1.0)


def test_snr_conversions():
    assert snr_db_to_linear(2.0) == pytest.approx(1.5848931924611136)
    assert snr_linear_to_db(snr_db_to_linear(7.3)) == pytest.approx(7.3)
    with pytest.raises(ValueError):
        snr_linear_to_db(0.0)


def test_ebn0_conversion():
    # Eb/N0 = snr / (bits_per_symbol * n_tx); QPSK over 4 antennas -> x8
    assert ebn0_db_to_snr_db(0.0, 2, 4) == pytest.approx(10 * math.log10(8))
    assert ebn0_db_to_snr_db(3.0, 4, 1) == pytest.approx(3.0 + 10 * math.log10(4))


def test_batch_and_single_draws_share_distribution_layout():
    a = draw_path_gains_batch(rng_stream(7, 0, PURPOSE_GAINS), ChannelMode.RAYLEIGH_AWGN, 3)
    b = draw_path_gains(rng_stream(7, 0, PURPOSE_GAINS), ChannelMode.RAYLEIGH_AWGN).gains
    assert np.array_equal(a[0], b)


def test_unknown_mode_rejected():
    rng = rng_stream(0, 0, PURPOSE_GAINS)
    with pytest.raises(ValueError):
        draw_path_gains_batch(rng, "bogus", 1)
