import numpy as np
import pytest
from hypothesis import given, strategies as st

from digivoice.dsp import (
    PcmBuffer,
    WindowSpec,
    concat,
    dft_power_oracle,
    frame_view,
    goertzel_bank,
    goertzel_power,
    mix,
    synth_sweep,
    synth_tone,
)

SR = 44100


def brute_dft_peak(x, sr):
    """Peak frequency from a full O(N^2) DFT over every bin."""
    n = x.size
    k = np.arange(n // 2 + 1)
    basis = np.exp(-2j * np.pi * np.outer(k, np.arange(n)) / n)
    return k[np.argmax(np.abs(basis @ x))] * sr / n


def test_tone_length_and_peak():
    buf = synth_tone(1000, 0.020, 1.0, SR)
    assert len(buf) == 882
    assert brute_dft_peak(buf.samples, SR) == pytest.approx(1000, abs=SR / 882 / 2)


def test_zero_amplitude_is_silent():
    buf = synth_tone(440, 0.05, 0.0, SR)
    assert len(buf) == round(0.05 * SR)
    assert not buf.samples.any()


@pytest.mark.parametrize("freq, dur", [(23000, 0.02), (22050, 0.02), (0, 0.02), (-5, 0.02), (1000, 0.0), (1000, -1)])
def test_synth_rejects(freq, dur):
    with pytest.raises(ValueError):
        synth_tone(freq, dur, 1.0, SR)


@given(st.floats(50, 20000), st.floats(0.001, 0.2), st.floats(0, 1))
def test_peak_never_exceeds_amplitude(freq, dur, amp):
    buf = synth_tone(freq, dur, amp, SR)
    assert np.abs(buf.samples).max(initial=0) <= amp + 1e-12


def test_mix_identity_and_symmetry():
    a = synth_tone(1000, 0.02)
    np.testing.assert_array_equal(mix([a]).samples, a.samples)
    np.testing.assert_allclose(mix([a, a]).samples, a.samples)


@pytest.mark.parametrize("ramp_s, rel", [(0.0, 1e-9), (0.002, 0.05)])
def test_mix_two_tones_quarter_energy(ramp_s, rel):
    # 70 Hz apart over 0.1 s is a whole number of cycles; ramps add a small cross term
    w = WindowSpec(0, 4410)
    a, b = synth_tone(700, 0.1, ramp_s=ramp_s), synth_tone(770, 0.1, ramp_s=ramp_s)
    both = mix([a, b])
    for f, alone in ((700, a), (770, b)):
        assert dft_power_oracle(both, f, w) == pytest.approx(dft_power_oracle(alone, f, w) / 4, rel=rel)


def test_mix_pads_and_rejects_mixed_rates():
    a, b = synth_tone(1000, 0.01), synth_tone(1000, 0.03)
    assert len(mix([a, b])) == len(b)
    with pytest.raises(ValueError):
        mix([a, synth_tone(1000, 0.01, sample_rate=8000)])
    with pytest.raises(ValueError):
        mix([])


@given(st.lists(st.integers(1, 3000), min_size=1, max_size=5), st.integers(0, 2**32 - 1))
def test_mix_stays_in_range(lengths, seed):
    rng = np.random.default_rng(seed)
    bufs = [PcmBuffer(rng.uniform(-1, 1, n)) for n in lengths]
    out = mix(bufs)
    assert len(out) == max(lengths)
    assert np.abs(out.samples).max() <= 1.0


def test_concat_lengths():
    sym = synth_tone(1000, 0.02)
    assert len(concat([sym] * 10)) == 8820
    assert len(concat([sym])) == len(sym)
    with pytest.raises(ValueError):
        concat([sym, synth_tone(1000, 0.02, sample_rate=8000)])


def test_goertzel_tone_energy():
    # with the 2 ms ramps the tone keeps (mean envelope)^2 of the flat-tone energy
    n = 882
    buf = synth_tone(1000, 0.020, 1.0, SR)
    g = goertzel_power(buf, 1000)
    assert g == pytest.approx(dft_power_oracle(buf, 1000), rel=1e-9)
    flat = synth_tone(1000, 0.020, 1.0, SR, ramp_s=0.0)
    assert goertzel_power(flat, 1000) == pytest.approx((n / 2) ** 2, rel=0.02)
    env = buf.samples / np.where(flat.samples == 0, 1, flat.samples)
    expected = (n / 2) ** 2 * np.mean(env[flat.samples != 0]) ** 2
    assert g == pytest.approx(expected, rel=0.02)


def test_goertzel_silence_and_sidelobe():
    assert goertzel_power(PcmBuffer(np.zeros(500)), 1234) == 0.0
    buf = synth_tone(1000, 0.02)
    assert goertzel_power(buf, 5000) < 0.01 * goertzel_power(buf, 1000)


def test_oracle_peak_scan():
    buf = synth_tone(2000, 0.1)
    probes = np.arange(500, 6001, 10)
    energies = [dft_power_oracle(buf, f) for f in probes]
    assert probes[int(np.argmax(energies))] == 2000
    assert dft_power_oracle(PcmBuffer(np.zeros(100)), 300) == 0.0


def test_window_bounds():
    buf = PcmBuffer(np.ones(100))
    with pytest.raises(ValueError):
        goertzel_power(buf, 1000, WindowSpec(50, 51))
    with pytest.raises(ValueError):
        WindowSpec(-1, 5)
    with pytest.raises(ValueError):
        WindowSpec(0, 0)


def _case(rng):
    n = int(rng.integers(1, 2000))
    x = rng.uniform(-1, 1, n) * rng.uniform(0, 1)
    start = int(rng.integers(0, n))
    length = int(rng.integers(1, n - start + 1))
    return PcmBuffer(x), float(rng.uniform(1, SR / 2 - 1)), WindowSpec(start, length)


def test_goertzel_matches_oracle_many(rng):
    for _ in range(2000):
        buf, f, w = _case(rng)
        g, o = goertzel_power(buf, f, w), dft_power_oracle(buf, f, w)
        assert abs(g - o) <= 1e-6 * max(o, 1)


@given(st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
def test_goertzel_quadratic_scaling(c, seed):
    rng = np.random.default_rng(seed)
    buf, f, w = _case(rng)
    base = goertzel_power(buf, f, w)
    scaled = goertzel_power(buf.scaled(c), f, w)
    assert scaled == pytest.approx(c * c * base, rel=1e-9, abs=1e-12)


def test_bank_matches_scalar(rng):
    x = rng.normal(size=(3, 700))
    freqs = (440.0, 1000.0, 3333.3)
    bank = goertzel_bank(x, freqs, SR)
    for i in range(3):
        for j, f in enumerate(freqs):
            assert bank[i, j] == pytest.approx(goertzel_power(PcmBuffer(x[i]), f), rel=1e-9)


def test_frame_view_zero_pads():
    x = np.arange(5.0)
    np.testing.assert_array_equal(frame_view(x, [-2, 3], 3), [[0, 0, 0], [3, 4, 0]])


def test_sweep_moves_up():
    buf = synth_sweep((1000, 2000), 0.25)
    half = len(buf) // 2
    lo = dft_power_oracle(buf, 1250, WindowSpec(0, half))
    hi = dft_power_oracle(buf, 1250, WindowSpec(half, half))
    assert lo > 10 * hi


def test_buffer_is_read_only():
    buf = synth_tone(1000, 0.01)
    with pytest.raises(ValueError):
        buf.samples[0] = 1.0
    assert buf.duration_s == pytest.approx(len(buf) / SR)
