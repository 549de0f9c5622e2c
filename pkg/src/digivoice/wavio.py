"""16-bit mono PCM WAV files."""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np

from .dsp import PcmBuffer

FULL_SCALE = 32767


def quantize(samples: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(samples) * FULL_SCALE), -FULL_SCALE - 1, FULL_SCALE).astype("<i2")


def write_wav(path: str | Path, buf: PcmBuffer) -> None:
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(buf.sample_rate)
        w.writeframes(quantize(buf.samples).tobytes())


def read_wav(path: str | Path) -> PcmBuffer:
    with wave.open(str(path), "rb") as w:
        if w.getsampwidth() != 2:
            raise ValueError(f"{path}: only 16-bit PCM is supported, got {8 * w.getsampwidth()}-bit")
        channels, rate = w.getnchannels(), w.getframerate()
        raw = np.frombuffer(w.readframes(w.getnframes()), dtype="<i2")
    if channels != 1:
        # keep the first channel
        raw = raw.reshape(-1, channels)[:, 0]
    return PcmBuffer(raw.astype(np.float64) / FULL_SCALE, rate)
