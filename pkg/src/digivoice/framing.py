"""Frame format, CRC, and the acoustic preamble used for sync and calibration.

Wire layout: ``length (u16, big-endian) | payload | CRC-16/CCITT-FALSE (u16, big-endian)``
with the CRC taken over length and payload.

The preamble is eight symbols of duration T over a tone bank:
``on on off | on off on on off``.  The first two symbols give the per-tone
on-energy, the third the noise floor; the whole on/off sequence is the
correlation landmark.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dsp import DEFAULT_SAMPLE_RATE, PcmBuffer, frame_view, goertzel_bank, num_samples, tone_table
from .errors import CalibrationError, CrcError, FrameError, SyncError, TruncatedFrameError

MAX_PAYLOAD = 0xFFFF
HEADER_SIZE = 2
TRAILER_SIZE = 2

PREAMBLE_PATTERN = (1, 1, 0, 1, 0, 1, 1, 0)
PREAMBLE_SYMBOLS = len(PREAMBLE_PATTERN)
CAL_ON_SYMBOLS = (0, 1)
CAL_SILENCE_SYMBOL = 2

SYNC_CORRELATION = 0.9
# weakest on-window must beat the strongest off-window by this factor; noise
# energy summed over K tones spreads less, so the bar drops as 1/sqrt(K)
SYNC_CONTRAST = 4.0
SINGLE_TONE_CONTRAST = 20.0
SEARCH_LIMIT_S = 10.0
MAX_SYNC_TONES = 32


def _crc_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021) if crc & 0x8000 else crc << 1
        table.append(crc & 0xFFFF)
    return table


_CRC_TABLE = _crc_table()


def crc16_ccitt_false(data: bytes, crc: int = 0xFFFF) -> int:
    for byte in data:
        crc = ((crc << 8) & 0xFFFF) ^ _CRC_TABLE[(crc >> 8) ^ byte]
    return crc


def build_frame(payload: bytes) -> bytes:
    payload = bytes(payload)
    if len(payload) > MAX_PAYLOAD:
        raise ValueError(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    body = struct.pack(">H", len(payload)) + payload
    return body + struct.pack(">H", crc16_ccitt_false(body))


def frame_size(header: bytes) -> int:
    """Total frame size implied by the first two bytes."""
    if len(header) < HEADER_SIZE:
        raise TruncatedFrameError("need two header bytes")
    return HEADER_SIZE + struct.unpack(">H", bytes(header[:2]))[0] + TRAILER_SIZE


def parse_frame(data: bytes) -> bytes:
    data = bytes(data)
    if len(data) < HEADER_SIZE + TRAILER_SIZE:
        raise TruncatedFrameError(f"frame needs at least 4 bytes, got {len(data)}")
    size = frame_size(data)
    if size > len(data):
        raise TruncatedFrameError(f"header promises {size} bytes, only {len(data)} present")
    body, (crc,) = data[: size - TRAILER_SIZE], struct.unpack(">H", data[size - TRAILER_SIZE: size])
    if crc16_ccitt_false(body) != crc:
        raise CrcError(f"CRC mismatch: computed {crc16_ccitt_false(body):#06x}, frame says {crc:#06x}")
    if size < len(data):
        raise FrameError(f"{len(data) - size} bytes follow the frame")
    return body[HEADER_SIZE:]


@dataclass(frozen=True)
class Calibration:
    tones: tuple[float, ...]
    on_energy: np.ndarray
    noise_floor: np.ndarray

    def __post_init__(self):
        on = np.asarray(self.on_energy, dtype=np.float64)
        floor = np.asarray(self.noise_floor, dtype=np.float64)
        if on.shape != (len(self.tones),) or floor.shape != on.shape:
            raise CalibrationError("calibration arrays must match the tone list")
        if (floor < 0).any() or not (on > floor).all():
            raise CalibrationError("on-energy must exceed the noise floor for every tone")
        object.__setattr__(self, "on_energy", on)
        object.__setattr__(self, "noise_floor", floor)

    def for_tones(self, bank: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        index = {round(f, 6): i for i, f in enumerate(self.tones)}
        try:
            idx = [index[round(float(f), 6)] for f in bank]
        except KeyError as exc:
            raise CalibrationError(f"calibration has no entry for tone {exc.args[0]} Hz") from None
        return self.on_energy[idx], self.noise_floor[idx]

    def scaled(self, factor: float) -> "Calibration":
        return Calibration(self.tones, self.on_energy * factor, self.noise_floor * factor)


@dataclass(frozen=True)
class PreambleMatch:
    payload_offset: int
    cal: Calibration
    correlation: float


def preamble_on_symbol(bank: Sequence[float], symbol_samples: int, sample_rate: int,
                       amplitude: float | None = None) -> np.ndarray:
    bank = tuple(float(f) for f in bank)
    amp = 1.0 / len(bank) if amplitude is None else amplitude
    return amp * tone_table(bank, symbol_samples, sample_rate, True).sum(axis=0)


def emit_preamble(bank: Sequence[float], T: float, sample_rate: int = DEFAULT_SAMPLE_RATE,
                  amplitude: float | None = None) -> PcmBuffer:
    """Eight-symbol preamble; each on-symbol sounds every bank tone at ``amplitude``.

    The default per-tone amplitude 1/len(bank) makes an on-symbol identical to
    an all-ones ASK symbol over the same bank.
    """
    n = num_samples(T, sample_rate)
    on = preamble_on_symbol(bank, n, sample_rate, amplitude)
    if np.abs(on).max(initial=0.0) > 1.0:
        raise ValueError("preamble amplitude would exceed full scale")
    off = np.zeros(n)
    return PcmBuffer(np.concatenate([on if p else off for p in PREAMBLE_PATTERN]), sample_rate)


def _sync_tones(bank: Sequence[float]) -> tuple[float, ...]:
    bank = tuple(float(f) for f in bank)
    if len(bank) <= MAX_SYNC_TONES:
        return bank
    idx = np.linspace(0, len(bank) - 1, MAX_SYNC_TONES).round().astype(int)
    return tuple(bank[i] for i in idx)


def _pattern_scores(symbol_energy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pearson correlation with the pattern and on/off contrast, per candidate row."""
    p = np.asarray(PREAMBLE_PATTERN, dtype=np.float64)
    pc = p - p.mean()
    xc = symbol_energy - symbol_energy.mean(axis=1, keepdims=True)
    denom = np.linalg.norm(xc, axis=1) * np.linalg.norm(pc)
    corr = np.divide(xc @ pc, denom, out=np.zeros(len(xc)), where=denom > 0)
    on = symbol_energy[:, p == 1].min(axis=1)
    off = symbol_energy[:, p == 0].max(axis=1)
    contrast = np.divide(on, off, out=np.full(len(xc), np.inf), where=off > 0)
    contrast[on <= 0] = 0.0
    return corr, contrast


def _window_energy(x: np.ndarray, starts: np.ndarray, n: int, tones, sample_rate: int) -> np.ndarray:
    return goertzel_bank(frame_view(x, starts, n), tones, sample_rate)


def required_contrast(num_tones: int) -> float:
    return max(SYNC_CONTRAST, SINGLE_TONE_CONTRAST / np.sqrt(num_tones))


def detect_preamble(buf: PcmBuffer, bank: Sequence[float], T: float,
                    search_limit_s: float = SEARCH_LIMIT_S) -> PreambleMatch:
    """Find the first preamble within ``search_limit_s`` and calibrate from it."""
    sr = buf.sample_rate
    n = num_samples(T, sr)
    hop = max(1, n // 4)
    tones = _sync_tones(bank)
    span = PREAMBLE_SYMBOLS * n
    limit = min(len(buf), num_samples(search_limit_s, sr) + span)
    x = buf.samples[:limit]
    if x.size < span:
        raise SyncError("buffer shorter than a preamble")

    # full-symbol windows every quarter symbol, energy summed over sync tones
    starts = np.arange(0, x.size - n + 1, hop)
    win = _window_energy(x, starts, n, tones, sr).sum(axis=1)
    last = win.size - 4 * (PREAMBLE_SYMBOLS - 1)
    if last <= 0:
        raise SyncError("buffer shorter than a preamble")
    cand = np.arange(last)[:, None] + 4 * np.arange(PREAMBLE_SYMBOLS)[None, :]
    corr, contrast = _pattern_scores(win[cand])
    ok = np.flatnonzero((corr >= SYNC_CORRELATION) & (contrast >= required_contrast(len(tones))))
    if ok.size == 0:
        raise SyncError("no preamble found")
    first = ok[0]
    near = ok[ok <= first + 4]
    best = near[np.argmax(corr[near])]

    offset = _refine_offset(x, int(best) * hop, hop, n, tones, sr)
    sym_starts = offset + n * np.arange(PREAMBLE_SYMBOLS)
    energy = _window_energy(buf.samples, sym_starts, n, tuple(float(f) for f in bank), sr)
    on = energy[list(CAL_ON_SYMBOLS)].mean(axis=0)
    floor = energy[CAL_SILENCE_SYMBOL]
    if not (on > floor).all():
        raise SyncError("preamble found but calibration shows no on/off contrast")
    cal = Calibration(tuple(float(f) for f in bank), on, floor)
    sym_corr, _ = _pattern_scores(
        _window_energy(buf.samples, sym_starts, n, tones, sr).sum(axis=1)[None, :])
    return PreambleMatch(offset + span, cal, float(sym_corr[0]))


def _refine_offset(x: np.ndarray, coarse: int, radius: int, n: int, tones, sr: int) -> int:
    """Coarse-to-fine search for the offset maximising on-minus-off symbol energy."""
    p = np.asarray(PREAMBLE_PATTERN, dtype=np.float64)
    weights = np.where(p == 1, 1.0 / p.sum(), -1.0 / (p.size - p.sum()))
    center, step = coarse, max(1, radius // 4)
    while True:
        offsets = center + step * np.arange(-4, 5)
        starts = (offsets[:, None] + n * np.arange(PREAMBLE_SYMBOLS)[None, :]).reshape(-1)
        e = _window_energy(x, starts, n, tones, sr).sum(axis=1).reshape(len(offsets), -1)
        center = int(offsets[np.argmax(e @ weights)])
        if step == 1:
            return center
        step = max(1, step // 4)
