"""Simulated air channel: frequency response with notches, gain, AWGN, clipping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.signal import firwin2, oaconvolve

from .dsp import PcmBuffer

NOTCH_HALF_WIDTH_HZ = 30.0
NOTCH_GAIN = 0.001
FIR_TAPS = 16385
GRID_POINTS = 8193


@dataclass(frozen=True)
class ChannelSpec:
    snr_db: float | None = None
    response: tuple[tuple[float, float], ...] = ()
    notches: tuple[float, ...] = ()
    gain: float = 1.0
    clip: float = 1.0
    seed: int = 0

    def __post_init__(self):
        response = tuple(sorted((float(f), float(g)) for f, g in self.response))
        object.__setattr__(self, "response", response)
        object.__setattr__(self, "notches", tuple(float(f) for f in self.notches))
        if any(g < 0 for _, g in response):
            raise ValueError("response gains must be non-negative")
        if not 0 < self.clip <= 1:
            raise ValueError("clip must lie in (0, 1]")
        if self.gain < 0:
            raise ValueError("gain must be non-negative")
        if self.snr_db is not None and math.isinf(self.snr_db) and self.snr_db > 0:
            object.__setattr__(self, "snr_db", None)

    @property
    def flat(self) -> bool:
        return not self.notches and all(g == 1.0 for _, g in self.response)

    def with_seed(self, seed: int) -> "ChannelSpec":
        return replace(self, seed=seed)


def response_curve(spec: ChannelSpec, freqs: np.ndarray) -> np.ndarray:
    """Linear magnitude gain at ``freqs``: interpolated response times notches."""
    freqs = np.asarray(freqs, dtype=np.float64)
    if spec.response:
        pts = np.array(spec.response)
        gain = np.interp(freqs, pts[:, 0], pts[:, 1])
    else:
        gain = np.ones_like(freqs)
    for f0 in spec.notches:
        gain = np.where(np.abs(freqs - f0) <= NOTCH_HALF_WIDTH_HZ, NOTCH_GAIN, gain)
    return gain


@lru_cache(maxsize=16)
def _kernel(response: tuple, notches: tuple, sample_rate: int) -> np.ndarray:
    spec = ChannelSpec(response=response, notches=notches)
    grid = np.linspace(0.0, sample_rate / 2, GRID_POINTS)
    taps = firwin2(FIR_TAPS, grid, response_curve(spec, grid), fs=sample_rate, window="blackman")
    taps.setflags(write=False)
    return taps


def apply_response(spec: ChannelSpec, x: np.ndarray, sample_rate: int) -> np.ndarray:
    """Linear-phase FIR shaping with its group delay removed, so output aligns with input."""
    if spec.flat or x.size == 0:
        return x.copy()
    taps = _kernel(spec.response, spec.notches, int(sample_rate))
    delay = (taps.size - 1) // 2
    return oaconvolve(x, taps)[delay: delay + x.size]


def noise_std(signal: np.ndarray, snr_db: float) -> float:
    power = float(np.mean(np.square(signal))) if signal.size else 0.0
    if power <= 0:
        raise ValueError("cannot scale noise to an SNR for a silent signal")
    return math.sqrt(power / 10 ** (snr_db / 10))


def awgn(buf: PcmBuffer, snr_db: float | None, seed: int = 0) -> PcmBuffer:
    """Add white Gaussian noise at ``snr_db`` relative to the buffer's mean power."""
    if snr_db is None or (math.isinf(snr_db) and snr_db > 0):
        return buf
    sigma = noise_std(buf.samples, snr_db)
    noise = np.random.default_rng(seed).normal(0.0, sigma, len(buf))
    return PcmBuffer(buf.samples + noise, buf.sample_rate)


def apply_channel(spec: ChannelSpec, buf: PcmBuffer) -> PcmBuffer:
    y = apply_response(spec, buf.samples, buf.sample_rate) * spec.gain
    if spec.snr_db is not None:
        y = y + np.random.default_rng(spec.seed).normal(0.0, noise_std(y, spec.snr_db), y.size)
    return PcmBuffer(np.clip(y, -spec.clip, spec.clip), buf.sample_rate)


# -- key=value spec files ---------------------------------------------------------

def _pairs(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for item in text.replace(";", ",").split(","):
        if item.strip():
            f, g = item.split(":")
            out.append((float(f), float(g)))
    return tuple(out)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


_PARSERS = {
    "snr_db": lambda v: None if v.lower() in ("", "none", "inf") else float(v),
    "response": _pairs,
    "notches": _floats,
    "gain": float,
    "clip": float,
    "seed": int,
}


def parse_channel_spec(text: str, **overrides) -> ChannelSpec:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    ``response`` is ``hz:gain`` pairs separated by commas, ``notches`` a comma list.
    """
    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower()
        if not sep or key not in _PARSERS:
            raise ValueError(f"line {lineno}: expected one of {', '.join(_PARSERS)} as key=value")
        fields[key] = _PARSERS[key](value.strip())
    fields.update({k: v for k, v in overrides.items() if v is not None})
    return ChannelSpec(**fields)


def load_channel_spec(path: str | Path, **overrides) -> ChannelSpec:
    return parse_channel_spec(Path(path).read_text(), **overrides)


def dump_channel_spec(spec: ChannelSpec) -> str:
    lines = [
        f"snr_db = {'none' if spec.snr_db is None else spec.snr_db}",
        "response = " + ", ".join(f"{f:g}:{g:g}" for f, g in spec.response),
        "notches = " + ", ".join(f"{f:g}" for f in spec.notches),
        f"gain = {spec.gain:g}",
        f"clip = {spec.clip:g}",
        f"seed = {spec.seed}",
    ]
    return "\n".join(lines) + "\n"
