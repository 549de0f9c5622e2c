import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from digivoice.channel import (
    ChannelSpec,
    apply_channel,
    awgn,
    dump_channel_spec,
    load_channel_spec,
    parse_channel_spec,
    response_curve,
)
from digivoice.dsp import PcmBuffer, goertzel_power, synth_tone


def db(ratio):
    return 10 * np.log10(ratio)


def test_identity_spec():
    buf = synth_tone(1234, 0.2, 0.8)
    out = apply_channel(ChannelSpec(), buf)
    np.testing.assert_allclose(out.samples, buf.samples, atol=1e-6)


@pytest.mark.parametrize("amp", [0.25, 0.5])
def test_measured_snr(amp):
    # at full scale the final clip trims noise peaks and inflates the SNR by ~0.5 dB
    buf = synth_tone(1000, 2.0, amp)
    clean = apply_channel(ChannelSpec(), buf).samples
    noisy = apply_channel(ChannelSpec(snr_db=20, seed=5), buf).samples
    assert db(np.mean(clean ** 2) / np.mean((noisy - clean) ** 2)) == pytest.approx(20, abs=0.5)


def test_notch():
    # a notch only removes what lies within +-30 Hz, so the tone must be long
    # enough for its own spectrum to fit inside it
    spec = ChannelSpec(notches=(2000.0,))
    hit = synth_tone(2000, 2.0, 0.5)
    miss = synth_tone(2500, 2.0, 0.5)
    assert db(goertzel_power(apply_channel(spec, hit), 2000) / goertzel_power(hit, 2000)) <= -50
    assert abs(db(goertzel_power(apply_channel(spec, miss), 2500) / goertzel_power(miss, 2500))) < 1


@settings(max_examples=10)
@given(st.floats(300, 8000), st.floats(0.1, 2.0), st.floats(0.1, 2.0))
def test_response_gain(freq, g_lo, g_hi):
    spec = ChannelSpec(response=((200.0, g_lo), (9000.0, g_hi)))
    buf = synth_tone(freq, 0.5, 0.3)
    expected = float(response_curve(spec, np.array([freq]))[0]) ** 2
    ratio = goertzel_power(apply_channel(spec, buf), freq) / goertzel_power(buf, freq)
    assert ratio == pytest.approx(expected, rel=0.05)


def test_gain_then_clip():
    buf = synth_tone(500, 0.1, 1.0)
    out = apply_channel(ChannelSpec(gain=2.0, clip=0.5), buf)
    assert np.abs(out.samples).max() == pytest.approx(0.5)
    assert len(out) == len(buf)


def test_reproducible():
    buf = synth_tone(700, 0.3)
    spec = ChannelSpec(snr_db=3, notches=(1500.0,), seed=99)
    a, b = apply_channel(spec, buf), apply_channel(spec, buf)
    assert a.samples.tobytes() == b.samples.tobytes()
    assert not np.array_equal(a.samples, apply_channel(spec.with_seed(100), buf).samples)


def test_awgn():
    buf = synth_tone(1000, 10.0, 0.5)
    assert awgn(buf, None) is buf
    a, b = awgn(buf, 10, seed=1), awgn(buf, 10, seed=1)
    assert np.array_equal(a.samples, b.samples)
    var = np.var(a.samples - buf.samples)
    assert var == pytest.approx(np.mean(buf.samples ** 2) / 10, rel=0.02)
    with pytest.raises(ValueError):
        awgn(PcmBuffer(np.zeros(100)), 10)


@pytest.mark.parametrize("kwargs", [dict(clip=0.0), dict(clip=1.5), dict(response=((100, -1),)), dict(gain=-1)])
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        ChannelSpec(**kwargs)


def test_spec_file_round_trip(tmp_path):
    spec = ChannelSpec(snr_db=12.5, response=((100.0, 0.5), (5000.0, 1.0)), notches=(2000.0, 3000.0),
                       gain=0.8, clip=0.9, seed=7)
    path = tmp_path / "air.txt"
    path.write_text("# test channel\n" + dump_channel_spec(spec))
    assert load_channel_spec(path) == spec
    assert load_channel_spec(path, seed=8).seed == 8
    assert parse_channel_spec("snr_db = none\n").snr_db is None
    with pytest.raises(ValueError, match="line 1"):
        parse_channel_spec("colour = blue")
