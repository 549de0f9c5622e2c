"""Signal primitives shared by every voice.

Buffers are float64 numpy arrays wrapped in an immutable :class:`PcmBuffer`.
Energy at a probe frequency is the squared magnitude of the complex
single-bin projection ``|sum x[n] exp(-j w n)|^2`` with no 1/N scaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

DEFAULT_SAMPLE_RATE = 44100
RAMP_S = 0.002


@dataclass(frozen=True)
class PcmBuffer:
    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64).reshape(-1)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        if int(self.sample_rate) != self.sample_rate or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate}")
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate

    def scaled(self, factor: float) -> "PcmBuffer":
        return PcmBuffer(self.samples * factor, self.sample_rate)

    def slice(self, start: int, stop: int | None = None) -> "PcmBuffer":
        return PcmBuffer(self.samples[start:stop], self.sample_rate)


@dataclass(frozen=True)
class WindowSpec:
    start_sample: int
    length: int

    def __post_init__(self):
        if self.start_sample < 0:
            raise ValueError("window start must be >= 0")
        if self.length < 1:
            raise ValueError("window length must be >= 1")

    @classmethod
    def whole(cls, buf: PcmBuffer) -> "WindowSpec":
        return cls(0, len(buf))

    def check(self, buf: PcmBuffer) -> None:
        if self.start_sample + self.length > len(buf):
            raise ValueError(
                f"window [{self.start_sample}, {self.start_sample + self.length}) "
                f"exceeds buffer of {len(buf)} samples"
            )


def num_samples(duration_s: float, sample_rate: int) -> int:
    return int(round(duration_s * sample_rate))


def silence(duration_s: float, sample_rate: int = DEFAULT_SAMPLE_RATE) -> PcmBuffer:
    return PcmBuffer(np.zeros(num_samples(duration_s, sample_rate)), sample_rate)


def ramp_envelope(n: int, sample_rate: int, ramp_s: float = RAMP_S) -> np.ndarray:
    """Unit envelope with raised-cosine onset and offset ramps."""
    env = np.ones(n)
    r = min(num_samples(ramp_s, sample_rate), n // 2)
    if r > 0:
        rise = 0.5 - 0.5 * np.cos(np.pi * np.arange(r) / r)
        env[:r] = rise
        env[n - r:] = rise[::-1]
    return env


def _check_freq(freq_hz: float, sample_rate: int) -> None:
    if not 0 < freq_hz < sample_rate / 2:
        raise ValueError(f"frequency {freq_hz} Hz outside (0, Nyquist={sample_rate / 2} Hz)")


def synth_tone(
    freq_hz: float,
    duration_s: float,
    amplitude: float = 1.0,
    sample_rate: int = DEFAULT_SAMPLE_RATE,
    phase: float = 0.0,
    ramp_s: float = RAMP_S,
) -> PcmBuffer:
    _check_freq(freq_hz, sample_rate)
    if duration_s <= 0:
        raise ValueError(f"duration must be positive, got {duration_s}")
    if not 0.0 <= amplitude <= 1.0:
        raise ValueError(f"amplitude must lie in [0, 1], got {amplitude}")
    n = num_samples(duration_s, sample_rate)
    t = np.arange(n) / sample_rate
    wave = amplitude * np.sin(2 * np.pi * freq_hz * t + phase)
    return PcmBuffer(wave * ramp_envelope(n, sample_rate, ramp_s), sample_rate)


def synth_sweep(
    breakpoints_hz: Sequence[float],
    duration_s: float,
    amplitude: float = 1.0,
    sample_rate: int = DEFAULT_SAMPLE_RATE,
    ramp_s: float = RAMP_S,
) -> PcmBuffer:
    """Continuous-phase sweep through evenly spaced frequency breakpoints."""
    for f in breakpoints_hz:
        _check_freq(f, sample_rate)
    n = num_samples(duration_s, sample_rate)
    pos = np.linspace(0.0, len(breakpoints_hz) - 1, n, endpoint=False)
    inst = np.interp(pos, np.arange(len(breakpoints_hz)), breakpoints_hz)
    phase = 2 * np.pi * np.cumsum(inst) / sample_rate
    wave = amplitude * np.sin(phase - phase[0]) if n else np.zeros(0)
    return PcmBuffer(wave * ramp_envelope(n, sample_rate, ramp_s), sample_rate)


def mix(buffers: Sequence[PcmBuffer]) -> PcmBuffer:
    """Element-wise mean of the inputs, shorter ones zero-padded."""
    if not buffers:
        raise ValueError("mix needs at least one buffer")
    sr = _common_rate(buffers)
    n = max(len(b) for b in buffers)
    out = np.zeros(n)
    for b in buffers:
        out[: len(b)] += b.samples
    return PcmBuffer(out / len(buffers), sr)


def concat(buffers: Sequence[PcmBuffer], sample_rate: int | None = None) -> PcmBuffer:
    if not buffers:
        return PcmBuffer(np.zeros(0), sample_rate or DEFAULT_SAMPLE_RATE)
    sr = _common_rate(buffers)
    if sample_rate is not None and sample_rate != sr:
        raise ValueError(f"expected sample rate {sample_rate}, buffers have {sr}")
    return PcmBuffer(np.concatenate([b.samples for b in buffers]), sr)


def _common_rate(buffers: Sequence[PcmBuffer]) -> int:
    rates = {b.sample_rate for b in buffers}
    if len(rates) != 1:
        raise ValueError(f"mixed sample rates: {sorted(rates)}")
    return rates.pop()


def goertzel_power(buf: PcmBuffer, freq_hz: float, window: WindowSpec | None = None) -> float:
    """Single-bin energy via the second-order Goertzel recurrence."""
    window = window or WindowSpec.whole(buf)
    window.check(buf)
    _check_freq(freq_hz, buf.sample_rate)
    x = buf.samples[window.start_sample: window.start_sample + window.length]
    w = 2 * np.pi * freq_hz / buf.sample_rate
    coeff = 2 * np.cos(w)
    s1 = s2 = 0.0
    for sample in x.tolist():
        s1, s2 = sample + coeff * s1 - s2, s1
    return max(s1 * s1 + s2 * s2 - coeff * s1 * s2, 0.0)


def goertzel_bank(frames: np.ndarray, freqs_hz: Sequence[float], sample_rate: int) -> np.ndarray:
    """Goertzel energies for every row of ``frames`` at every probe frequency.

    Same quantity as :func:`goertzel_power`, computed as a projection onto
    cached cosine/sine bases so a whole bank costs two matrix products.
    Returns an array of shape ``frames.shape[:-1] + (len(freqs),)``.
    """
    frames = np.asarray(frames, dtype=np.float64)
    freqs = tuple(float(f) for f in freqs_hz)
    for f in freqs:
        _check_freq(f, sample_rate)
    n = frames.shape[-1]
    if n == 0 or not freqs:
        return np.zeros(frames.shape[:-1] + (len(freqs),))
    cos_b, sin_b = _projection_basis(freqs, n, int(sample_rate))
    re, im = frames @ cos_b, frames @ sin_b
    return re * re + im * im


@lru_cache(maxsize=64)
def _projection_basis(freqs: tuple[float, ...], n: int, sample_rate: int) -> tuple[np.ndarray, np.ndarray]:
    phase = 2 * np.pi * np.arange(n)[:, None] * np.asarray(freqs)[None, :] / sample_rate
    cos_b, sin_b = np.cos(phase), np.sin(phase)
    cos_b.setflags(write=False)
    sin_b.setflags(write=False)
    return cos_b, sin_b


def dft_power_oracle(buf: PcmBuffer, freq_hz: float, window: WindowSpec | None = None) -> float:
    """Reference energy from direct cosine/sine inner products."""
    window = window or WindowSpec.whole(buf)
    window.check(buf)
    _check_freq(freq_hz, buf.sample_rate)
    x = buf.samples[window.start_sample: window.start_sample + window.length]
    phase = 2 * np.pi * freq_hz * np.arange(x.size) / buf.sample_rate
    re = float(np.dot(x, np.cos(phase)))
    im = float(np.dot(x, np.sin(phase)))
    return re * re + im * im


def frame_view(x: np.ndarray, starts: Sequence[int] | np.ndarray, length: int) -> np.ndarray:
    """Rows ``x[s:s+length]`` for each start; out-of-range samples read as zero."""
    starts = np.asarray(starts, dtype=np.int64)
    if starts.size == 0:
        return np.zeros((0, length))
    lo = min(0, int(starts.min()))
    hi = max(x.size, int(starts.max()) + length)
    padded = np.zeros(hi - lo)
    padded[-lo: -lo + x.size] = x
    return np.lib.stride_tricks.sliding_window_view(padded, length)[starts - lo]


def schroeder_phases(count: int) -> np.ndarray:
    """Phase set that keeps the crest factor of an equal-amplitude multitone low."""
    k = np.arange(count)
    return np.pi * k * k / max(count, 1)


@lru_cache(maxsize=64)
def tone_table(tone_bank: tuple[float, ...], n: int, sample_rate: int, schroeder: bool = False) -> np.ndarray:
    """Ramped unit-amplitude tones of ``n`` samples, one row per frequency."""
    t = np.arange(n) / sample_rate
    phases = schroeder_phases(len(tone_bank)) if schroeder else np.zeros(len(tone_bank))
    table = np.sin(2 * np.pi * np.outer(tone_bank, t) + phases[:, None])
    table *= ramp_envelope(n, sample_rate)[None, :]
    table.setflags(write=False)
    return table
