"""Cricket voice: 32 symbols from the onset slot and loudness of a three-beep train.

A symbol period holds one triad of carrier beeps.  The triad starts in one of
eight 20 ms phase slots and all three beeps share one of four amplitude
levels, giving ``value = slot * 4 + level`` and five bits per symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .case1 import as_bits, pad_bits
from .dsp import DEFAULT_SAMPLE_RATE, PcmBuffer, frame_view, goertzel_bank, num_samples, tone_table
from .errors import AlignmentError, DecodeError

BITS_PER_SYMBOL = 5
ONSET_HOP_S = 0.005


@dataclass(frozen=True)
class CricketConfig:
    carrier_hz: float = 4500.0
    beep_s: float = 0.015
    intra_gap_s: float = 0.010
    symbol_period_s: float = 0.225
    phase_slots: int = 8
    slot_width_s: float = 0.020
    amp_levels: tuple[float, ...] = (1.00, 0.63, 0.40, 0.25)
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        object.__setattr__(self, "amp_levels", tuple(float(a) for a in self.amp_levels))
        if self.phase_slots * len(self.amp_levels) != 1 << BITS_PER_SYMBOL:
            raise ValueError("phase slots x amplitude levels must equal 32")
        if any(b >= a for a, b in zip(self.amp_levels, self.amp_levels[1:])):
            raise ValueError("amplitude levels must be strictly decreasing")
        if not all(0 < a <= 1 for a in self.amp_levels):
            raise ValueError("amplitude levels must lie in (0, 1]")
        if not 0 < self.carrier_hz < self.sample_rate / 2:
            raise ValueError("carrier must lie below Nyquist")
        last_end = self.slot_offset(self.phase_slots - 1) + self.triad_samples
        if last_end > self.period_samples:
            raise ValueError("latest triad would spill into the next symbol period")

    @property
    def beep_samples(self) -> int:
        return num_samples(self.beep_s, self.sample_rate)

    @property
    def beep_stride(self) -> int:
        return self.beep_samples + num_samples(self.intra_gap_s, self.sample_rate)

    @property
    def triad_samples(self) -> int:
        return 2 * self.beep_stride + self.beep_samples

    @property
    def period_samples(self) -> int:
        return num_samples(self.symbol_period_s, self.sample_rate)

    @property
    def slot_samples(self) -> int:
        return num_samples(self.slot_width_s, self.sample_rate)

    def slot_offset(self, slot: int) -> int:
        return slot * self.slot_samples

    @property
    def bit_rate(self) -> float:
        return BITS_PER_SYMBOL / self.symbol_period_s


@dataclass(frozen=True)
class CricketSymbol:
    phase_slot: int
    amp_level: int

    def __post_init__(self):
        if not 0 <= self.phase_slot < 8 or not 0 <= self.amp_level < 4:
            raise ValueError(f"invalid cricket symbol ({self.phase_slot}, {self.amp_level})")

    @property
    def value(self) -> int:
        return self.phase_slot * 4 + self.amp_level

    @classmethod
    def from_value(cls, value: int) -> "CricketSymbol":
        return cls(value // 4, value % 4)


DEFAULT_CONFIG = CricketConfig()


def beep(cfg: CricketConfig, amplitude: float = 1.0) -> np.ndarray:
    return amplitude * tone_table((float(cfg.carrier_hz),), cfg.beep_samples, cfg.sample_rate)[0]


def cricket_symbol_waveform(cfg: CricketConfig, sym: CricketSymbol) -> PcmBuffer:
    return PcmBuffer(_symbol_table(cfg)[sym.value], cfg.sample_rate)


@lru_cache(maxsize=8)
def _symbol_table(cfg: CricketConfig) -> np.ndarray:
    table = np.zeros((1 << BITS_PER_SYMBOL, cfg.period_samples))
    for value in range(table.shape[0]):
        sym = CricketSymbol.from_value(value)
        b = beep(cfg, cfg.amp_levels[sym.amp_level])
        for i in range(3):
            start = cfg.slot_offset(sym.phase_slot) + i * cfg.beep_stride
            table[value, start: start + b.size] = b
    table.setflags(write=False)
    return table


def bits_to_values(bits: Sequence[int]) -> np.ndarray:
    bits = pad_bits(as_bits(bits), BITS_PER_SYMBOL).reshape(-1, BITS_PER_SYMBOL)
    return bits.astype(np.int64) @ (1 << np.arange(BITS_PER_SYMBOL - 1, -1, -1))


def values_to_bits(values: Sequence[int]) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(BITS_PER_SYMBOL - 1, -1, -1)
    return ((values[:, None] >> shifts[None, :]) & 1).astype(np.uint8).reshape(-1)


def cricket_encode(bits: Sequence[int], cfg: CricketConfig = DEFAULT_CONFIG) -> PcmBuffer:
    values = bits_to_values(bits)
    return PcmBuffer(_symbol_table(cfg)[values].reshape(-1), cfg.sample_rate)


def _reference_energies(cfg: CricketConfig, cal) -> tuple[np.ndarray, float]:
    on, floor = cal.for_tones((float(cfg.carrier_hz),))
    levels = on[0] * np.square(cfg.amp_levels)
    presence = max(0.1 * levels[-1], 4.0 * floor[0])
    return levels, presence


def _analyse(cfg: CricketConfig, buf: PcmBuffer, cal):
    """Per period: detected phase slot, mean beep energy, presence flag."""
    n = cfg.period_samples
    if len(buf) % n:
        raise AlignmentError(f"buffer of {len(buf)} samples is not a whole number of {n}-sample periods")
    periods = len(buf) // n
    tone = (float(cfg.carrier_hz),)
    hop = num_samples(ONSET_HOP_S, cfg.sample_rate)
    onsets = np.arange(0, n - cfg.triad_samples + 1, hop)
    beeps = np.arange(3) * cfg.beep_stride
    rel = (onsets[:, None] + beeps[None, :]).reshape(-1)
    starts = (np.arange(periods)[:, None] * n + rel[None, :]).reshape(-1)
    env = goertzel_bank(frame_view(buf.samples, starts, cfg.beep_samples), tone, cfg.sample_rate)
    score = env.reshape(periods, onsets.size, 3).sum(axis=2)
    onset = onsets[np.argmax(score, axis=1)]
    slots = np.clip(np.rint(onset / cfg.slot_samples), 0, cfg.phase_slots - 1).astype(np.int64)

    exact = (np.arange(periods) * n + slots * cfg.slot_samples)[:, None] + beeps[None, :]
    e = goertzel_bank(frame_view(buf.samples, exact.reshape(-1), cfg.beep_samples), tone, cfg.sample_rate)
    mean_energy = e.reshape(periods, 3).mean(axis=1)

    levels, presence = _reference_energies(cfg, cal)
    present = mean_energy > presence
    dist = np.abs(np.log(np.maximum(mean_energy, 1e-300))[:, None] - np.log(levels)[None, :])
    amp = np.argmin(dist, axis=1)
    return slots, amp, present


def cricket_decode_values(cfg: CricketConfig, buf: PcmBuffer, cal) -> np.ndarray:
    slots, amp, present = _analyse(cfg, buf, cal)
    if not present.all():
        idx = int(np.flatnonzero(~present)[0])
        raise DecodeError(f"no beep triad detected in symbol period {idx}")
    return slots * len(cfg.amp_levels) + amp


def cricket_decode(cfg: CricketConfig, buf: PcmBuffer, cal) -> np.ndarray:
    return values_to_bits(cricket_decode_values(cfg, buf, cal))


def count_trailing_silent_periods(cfg: CricketConfig, buf: PcmBuffer, cal) -> int:
    _, _, present = _analyse(cfg, buf, cal)
    silent = 0
    for p in present[::-1]:
        if p:
            break
        silent += 1
    return silent
