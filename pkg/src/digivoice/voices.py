"""Name -> transmitter/receiver for every voice the CLI knows."""

from __future__ import annotations

from .case1 import PRESET_NAMES, AskConfig, FskConfig, data_rate, preset
from .cricket import CricketConfig
from .dsp import DEFAULT_SAMPLE_RATE, PcmBuffer
from .errors import FrameError
from .framing import build_frame, parse_frame
from .link import AskLink, CricketLink, FskLink, Link
from .r2d2 import R2d2Alphabet, r2d2_decode, r2d2_encode
from .urlcodec import url_decode_audio, url_encode_audio

VOICES = PRESET_NAMES + ("r2d2", "cricket", "url")
BYTE_VOICES = PRESET_NAMES + ("cricket",)
TEXT_VOICES = ("r2d2", "url")


def check_voice(voice: str) -> None:
    if voice not in VOICES:
        raise ValueError(f"unknown voice {voice!r}; choose from {', '.join(VOICES)}")


def link_for(voice: str, sample_rate: int = DEFAULT_SAMPLE_RATE) -> Link:
    if voice in PRESET_NAMES:
        cfg = preset(voice, sample_rate)
        return AskLink(cfg) if isinstance(cfg, AskConfig) else FskLink(cfg)
    if voice == "cricket":
        return CricketLink(CricketConfig(sample_rate=sample_rate))
    raise ValueError(f"voice {voice!r} does not carry raw bytes")


def encode(voice: str, payload: bytes | str, framed: bool = False,
           sample_rate: int = DEFAULT_SAMPLE_RATE) -> PcmBuffer:
    """Payload is bytes for byte voices and text for ``r2d2`` and ``url``."""
    check_voice(voice)
    if voice == "r2d2":
        alphabet = R2d2Alphabet(sample_rate=sample_rate)
        text = payload.decode("ascii") if isinstance(payload, bytes) else payload
        if framed:
            # frame bytes travel as hex digits, which are all R2D2 symbols
            text = build_frame(text.lower().encode("ascii")).hex()
        return r2d2_encode(text, alphabet)
    if voice == "url":
        text = payload.decode("ascii") if isinstance(payload, bytes) else payload
        return url_encode_audio(text, sample_rate=sample_rate)
    data = payload.encode("utf-8") if isinstance(payload, str) else bytes(payload)
    return link_for(voice, sample_rate).transmit(data, framed)


def decode(voice: str, buf: PcmBuffer, framed: bool = False) -> bytes | str:
    check_voice(voice)
    if voice == "r2d2":
        text = r2d2_decode(buf, R2d2Alphabet(sample_rate=buf.sample_rate))
        if framed:
            try:
                raw = bytes.fromhex(text)
            except ValueError as exc:
                raise FrameError(f"framed R2D2 stream is not hex: {exc}") from None
            return parse_frame(raw).decode("ascii")
        return text
    if voice == "url":
        return url_decode_audio(buf)
    return link_for(voice, buf.sample_rate).receive(buf, framed)


def describe(voice: str, sample_rate: int = DEFAULT_SAMPLE_RATE) -> list[str]:
    """Human-readable parameter sheet for ``dv info``."""
    check_voice(voice)
    lines = [f"voice: {voice}"]
    if voice in PRESET_NAMES:
        cfg = preset(voice, sample_rate)
        kind = "B-ASK (parallel on/off tones)" if isinstance(cfg, AskConfig) else "M-ary FSK"
        bank = cfg.tone_bank
        lines += [
            f"modulation: {kind}",
            f"tones: {len(bank)} ({bank[0]:g} Hz .. {bank[-1]:g} Hz, step {bank[1] - bank[0]:g} Hz)",
            "tone bank (Hz): " + " ".join(f"{f:g}" for f in bank),
            f"symbol duration: {cfg.symbol_duration_s * 1000:g} ms",
            f"bits/symbol: {cfg.bits_per_symbol}",
            f"data rate: {data_rate(cfg):g} bps",
        ]
        if isinstance(cfg, FskConfig):
            lines.append(f"sub-resolution spacing: {bank[1] - bank[0] < 1 / cfg.symbol_duration_s}")
    elif voice == "r2d2":
        from .r2d2 import r2d2_sentence_stats
        alphabet = R2d2Alphabet(sample_rate=sample_rate)
        lines += [
            f"symbols: {alphabet.size} (26 beeps, 4 chirps, 10 grunts)",
            f"durations: beep {alphabet.beep_s * 1000:g} ms, chirp {alphabet.chirp_s * 1000:g} ms, "
            f"grunt {alphabet.grunt_s * 1000:g} ms",
        ]
        sentence = " ".join(["abcde"] * 12) + "."
        stats = r2d2_sentence_stats(sentence, alphabet)
        lines.append(f"12-word sentence: {stats['duration_s']:.2f} s, {stats['info_bps']:.1f} bps")
        lines.append("alphabet:")
        lines += [f"  {c!r:5} {cls:6} {desc}" for c, cls, desc in alphabet.table()]
    elif voice == "cricket":
        cfg = CricketConfig(sample_rate=sample_rate)
        lines += [
            f"carrier: {cfg.carrier_hz:g} Hz",
            f"triad: 3 x {cfg.beep_s * 1000:g} ms beeps, {cfg.intra_gap_s * 1000:g} ms gaps",
            f"symbol period: {cfg.symbol_period_s * 1000:g} ms",
            f"phase slots: {cfg.phase_slots} x {cfg.slot_width_s * 1000:g} ms",
            "amplitude levels: " + ", ".join(f"{a:g}" for a in cfg.amp_levels),
            f"symbols: {cfg.phase_slots * len(cfg.amp_levels)}",
            "bits/symbol: 5",
            f"data rate: {cfg.bit_rate:.1f} bps",
        ]
    else:
        from .urlcodec import DEFAULT_DICTIONARY, SYMBOL_S, SchemeClass, band_config
        for scheme in (SchemeClass.MAILTO, SchemeClass.HTTP):
            cfg = band_config(scheme, sample_rate)
            lines.append(f"{scheme.value} band (Hz): " + " ".join(f"{f:g}" for f in cfg.tone_bank))
        lines += [
            f"symbol duration: {SYMBOL_S * 1000:g} ms",
            "bits/symbol: 8",
            f"channel data rate: {8 / SYMBOL_S:g} bps",
            f"dictionary: {len(DEFAULT_DICTIONARY.entries)} entries, 6-bit codes",
        ]
    return lines
