"""Multi-tone binary ASK and M-ary FSK modems with the four published presets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dsp import (
    DEFAULT_SAMPLE_RATE,
    PcmBuffer,
    goertzel_bank,
    num_samples,
    tone_table,
)
from .errors import AlignmentError

PRESET_NAMES = ("ask8_fast", "ask8_slow", "ask128", "fsk256")

ASK8_BANK = tuple(1000.0 + 250.0 * i for i in range(8))
ASK128_BANK = tuple(700.0 + 70.0 * i for i in range(128))
FSK256_BANK = tuple(1000.0 + 20.0 * k for k in range(256))

# Symbol ramps leak up to ~10% of a tone's on-energy into an idle neighbour on
# one-bin banks.  Flooring at 1/16 keeps the threshold at or above a quarter of
# on-energy, the midpoint in amplitude.
MIN_FLOOR_RATIO = 1 / 16


def _validate_bank(tone_bank: Sequence[float], sample_rate: int) -> tuple[float, ...]:
    bank = tuple(float(f) for f in tone_bank)
    if not bank:
        raise ValueError("tone bank is empty")
    if any(b <= a for a, b in zip(bank, bank[1:])):
        raise ValueError("tone bank must be strictly increasing")
    if bank[0] <= 0 or bank[-1] >= sample_rate / 2:
        raise ValueError("tone bank must lie strictly between 0 Hz and Nyquist")
    return bank


@dataclass(frozen=True)
class AskConfig:
    tone_bank: tuple[float, ...]
    symbol_duration_s: float
    sample_rate: int = DEFAULT_SAMPLE_RATE
    name: str = "ask"

    def __post_init__(self):
        object.__setattr__(self, "tone_bank", _validate_bank(self.tone_bank, self.sample_rate))
        if self.symbol_duration_s <= 0:
            raise ValueError("symbol duration must be positive")

    @property
    def bits_per_symbol(self) -> int:
        return len(self.tone_bank)

    @property
    def symbol_samples(self) -> int:
        return num_samples(self.symbol_duration_s, self.sample_rate)

    @property
    def sub_resolution(self) -> bool:
        """True when adjacent tones sit closer than the 1/T Fourier resolution."""
        spacing = min((b - a for a, b in zip(self.tone_bank, self.tone_bank[1:])), default=math.inf)
        return spacing < 1.0 / self.symbol_duration_s


@dataclass(frozen=True)
class FskConfig:
    tone_bank: tuple[float, ...]
    symbol_duration_s: float
    sample_rate: int = DEFAULT_SAMPLE_RATE
    name: str = "fsk"

    def __post_init__(self):
        object.__setattr__(self, "tone_bank", _validate_bank(self.tone_bank, self.sample_rate))
        m = len(self.tone_bank)
        if m < 2 or m & (m - 1):
            raise ValueError(f"FSK alphabet size must be a power of two >= 2, got {m}")
        if m > 256:
            raise ValueError("FSK alphabets above 256 tones are not supported")
        if self.symbol_duration_s <= 0:
            raise ValueError("symbol duration must be positive")

    @property
    def bits_per_symbol(self) -> int:
        return len(self.tone_bank).bit_length() - 1

    @property
    def symbol_samples(self) -> int:
        return num_samples(self.symbol_duration_s, self.sample_rate)


def preset(name: str, sample_rate: int = DEFAULT_SAMPLE_RATE) -> AskConfig | FskConfig:
    if name == "ask8_fast":
        return AskConfig(ASK8_BANK, 0.020, sample_rate, name)
    if name == "ask8_slow":
        return AskConfig(ASK8_BANK, 0.100, sample_rate, name)
    if name == "ask128":
        return AskConfig(ASK128_BANK, 0.100, sample_rate, name)
    if name == "fsk256":
        return FskConfig(FSK256_BANK, 0.020, sample_rate, name)
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")


def data_rate(config: AskConfig | FskConfig) -> float:
    return config.bits_per_symbol / config.symbol_duration_s


# -- bit helpers -------------------------------------------------------------

def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bits_to_bytes(bits: Sequence[int]) -> bytes:
    """Pack MSB-first; a trailing partial byte is dropped."""
    bits = np.asarray(bits, dtype=np.uint8)
    whole = bits.size - bits.size % 8
    return np.packbits(bits[:whole]).tobytes()


def as_bits(bits: Sequence[int]) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.int64).reshape(-1)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit strings may contain only 0 and 1")
    return arr.astype(np.uint8)


def pad_bits(bits: np.ndarray, group: int) -> np.ndarray:
    rem = (-bits.size) % group
    return np.concatenate([bits, np.zeros(rem, dtype=np.uint8)]) if rem else bits


def ask_symbols(cfg: AskConfig, rows: np.ndarray) -> np.ndarray:
    """Waveforms for on/off rows of shape (n_symbols, M); each tone at amplitude 1/M.

    Equivalent to mixing all M tones with the off tones replaced by silence.
    """
    table = tone_table(cfg.tone_bank, cfg.symbol_samples, cfg.sample_rate, True)
    return (np.asarray(rows, dtype=np.float64) @ table) / cfg.bits_per_symbol


def ask_modulate(cfg: AskConfig, bits: Sequence[int]) -> PcmBuffer:
    bits = pad_bits(as_bits(bits), cfg.bits_per_symbol)
    rows = bits.reshape(-1, cfg.bits_per_symbol)
    return PcmBuffer(ask_symbols(cfg, rows).reshape(-1), cfg.sample_rate)


def symbol_frames(buf: PcmBuffer, symbol_samples: int) -> np.ndarray:
    if len(buf) % symbol_samples:
        raise AlignmentError(
            f"buffer of {len(buf)} samples is not a whole number of {symbol_samples}-sample symbols"
        )
    return buf.samples.reshape(-1, symbol_samples)


def ask_thresholds(cfg: AskConfig, cal) -> np.ndarray:
    on, floor = cal.for_tones(cfg.tone_bank)
    floor = np.maximum(floor, MIN_FLOOR_RATIO * on)
    return np.sqrt(on * floor)


def ask_energies(cfg: AskConfig, buf: PcmBuffer) -> np.ndarray:
    frames = symbol_frames(buf, cfg.symbol_samples)
    return goertzel_bank(frames, cfg.tone_bank, cfg.sample_rate)


def ask_demodulate(cfg: AskConfig, buf: PcmBuffer, cal) -> np.ndarray:
    """Per symbol and tone: 1 when the energy beats the calibrated threshold."""
    if buf.sample_rate != cfg.sample_rate:
        raise ValueError("buffer sample rate does not match the configuration")
    thresholds = ask_thresholds(cfg, cal)
    energies = ask_energies(cfg, buf)
    return (energies > thresholds[None, :]).astype(np.uint8).reshape(-1)


def fsk_values(cfg: FskConfig, payload: bytes) -> np.ndarray:
    b = cfg.bits_per_symbol
    bits = pad_bits(bytes_to_bits(payload), b).reshape(-1, b)
    weights = 1 << np.arange(b - 1, -1, -1)
    return (bits.astype(np.int64) * weights).sum(axis=1)


def fsk_modulate(cfg: FskConfig, payload: bytes) -> PcmBuffer:
    table = tone_table(cfg.tone_bank, cfg.symbol_samples, cfg.sample_rate, False)
    values = fsk_values(cfg, payload)
    return PcmBuffer(table[values].reshape(-1), cfg.sample_rate)


def fsk_energies(cfg: FskConfig, buf: PcmBuffer) -> np.ndarray:
    frames = symbol_frames(buf, cfg.symbol_samples)
    return goertzel_bank(frames, cfg.tone_bank, cfg.sample_rate)


def fsk_symbols_to_bytes(cfg: FskConfig, values: np.ndarray) -> bytes:
    b = cfg.bits_per_symbol
    bits = ((np.asarray(values)[:, None] >> np.arange(b - 1, -1, -1)[None, :]) & 1).reshape(-1)
    return bits_to_bytes(bits)


def fsk_demodulate(cfg: FskConfig, buf: PcmBuffer) -> bytes:
    """Argmax over the bank per symbol; ties resolve to the lowest tone index."""
    if buf.sample_rate != cfg.sample_rate:
        raise ValueError("buffer sample rate does not match the configuration")
    values = np.argmax(fsk_energies(cfg, buf), axis=1)
    return fsk_symbols_to_bytes(cfg, values)
