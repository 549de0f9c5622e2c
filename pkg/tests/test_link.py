import numpy as np
import pytest

from conftest import pad_silence, random_payload
from digivoice.dsp import PcmBuffer
from digivoice.errors import SyncError, TruncatedFrameError
from digivoice.link import FskLink, preamble_duration_s
from digivoice.case1 import preset
from digivoice.voices import BYTE_VOICES, VOICES, decode, describe, encode, link_for


@pytest.mark.parametrize("voice", BYTE_VOICES)
@pytest.mark.parametrize("framed", [False, True])
def test_byte_round_trip(voice, framed, rng):
    for _ in range(8):
        payload = random_payload(rng, max_len=20)
        buf = pad_silence(encode(voice, payload, framed), rng)
        assert decode(voice, buf, framed) == payload


@pytest.mark.parametrize("voice", BYTE_VOICES)
def test_edge_payloads(voice):
    for payload in (b"", b"\x00", b"\xff" * 9, bytes(range(7))):
        assert decode(voice, encode(voice, payload), False) == payload
        assert decode(voice, encode(voice, payload, True), True) == payload


def test_r2d2_framed():
    buf = encode("r2d2", "Hello 42.", framed=True)
    assert decode("r2d2", buf, framed=True) == "hello 42."


def test_preamble_is_eight_symbols():
    for voice in BYTE_VOICES:
        link = link_for(voice)
        assert len(link.preamble()) == 8 * round(link.sync_T() * 44100)
        assert preamble_duration_s(link) == pytest.approx(8 * link.sync_T(), abs=1e-4)


def test_fsk_sync_bank_is_whole_bins():
    link = FskLink(preset("fsk256"))
    bank = link.sync_bank()
    spacing = np.diff(bank)
    assert np.allclose((spacing * 0.02) % 1, 0)
    assert len(bank) <= 8


def test_truncated_transmission():
    buf = encode("ask8_fast", b"abcdefgh", framed=True)
    cut = PcmBuffer(buf.samples[: len(buf) - 3 * 882])
    with pytest.raises(TruncatedFrameError):
        decode("ask8_fast", cut, framed=True)


def test_no_signal():
    with pytest.raises(SyncError):
        decode("fsk256", PcmBuffer(np.zeros(44100)))


def test_wrong_rate():
    buf = encode("ask8_fast", b"x")
    with pytest.raises(ValueError):
        link_for("ask8_fast", 8000).receive(buf)


@pytest.mark.parametrize("voice", VOICES)
def test_describe(voice):
    text = "\n".join(describe(voice))
    assert f"voice: {voice}" in text


def test_unknown_voice():
    with pytest.raises(ValueError):
        encode("dolphin", b"x")
    with pytest.raises(ValueError):
        link_for("r2d2")
