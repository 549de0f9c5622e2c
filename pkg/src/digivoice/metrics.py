"""Rate arithmetic, bit error rate and seeded BER-vs-SNR sweeps."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .case1 import as_bits, bytes_to_bits
from .channel import ChannelSpec, apply_channel
from .dsp import PcmBuffer
from .errors import DecodeError, FrameError, SyncError
from .framing import build_frame, parse_frame
from .voices import BYTE_VOICES, link_for

# silence around each sweep transmission, so sync has to search
SWEEP_PAD_S = 0.05


def phoneme_rate(num_phonemes: int, phonemes_per_s: float) -> float:
    if num_phonemes < 2:
        raise ValueError("need at least two phonemes to carry information")
    if phonemes_per_s <= 0:
        raise ValueError("phoneme rate must be positive")
    return math.log2(num_phonemes) * phonemes_per_s


def bit_error_rate(sent: Sequence[int], received: Sequence[int]) -> float:
    a, b = as_bits(sent), as_bits(received)
    if a.size != b.size:
        raise ValueError(f"length mismatch: sent {a.size} bits, received {b.size}")
    if a.size == 0:
        raise ValueError("bit error rate of zero bits is undefined")
    return float(np.count_nonzero(a != b)) / a.size


def throughput(payload_bits: int, audio_duration_s: float) -> float:
    if audio_duration_s <= 0:
        raise ValueError("audio duration must be positive")
    return payload_bits / audio_duration_s


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    trials: int
    total_bits: int
    bit_errors: int
    ber: float
    mean_decode_status: float


@dataclass(frozen=True)
class TrialResult:
    bits: int
    errors: int
    ok: bool


def trial_seed(seed: int, snr_index: int, trial_index: int) -> int:
    return seed ^ (snr_index * 10**6 + trial_index)


def run_trial(voice: str, snr_db: float | None, payload_bytes: int, seed: int,
              base: ChannelSpec = ChannelSpec()) -> TrialResult:
    """One framed trip through the channel.

    Bits are compared on the raw frame bytes.  A trial that loses sync
    contributes no bits; it only lowers the decode status.
    """
    rng = np.random.default_rng(seed)
    payload = rng.integers(0, 256, payload_bytes, dtype=np.uint8).tobytes()
    frame = build_frame(payload)
    link = link_for(voice)
    tx = link.transmit(payload, framed=True)
    pad = np.zeros(int(SWEEP_PAD_S * tx.sample_rate))
    tx = PcmBuffer(np.concatenate([pad, tx.samples, pad]), tx.sample_rate)
    spec = ChannelSpec(snr_db, base.response, base.notches, base.gain, base.clip, seed)
    rx = apply_channel(spec, tx)
    try:
        match = link.sync(rx)
    except SyncError:
        return TrialResult(0, 0, False)
    got = link.receive_bytes(rx, len(frame), match)
    errors = int(np.count_nonzero(bytes_to_bits(got) != bytes_to_bits(frame)))
    try:
        ok = parse_frame(got) == payload
    except (FrameError, DecodeError):
        ok = False
    return TrialResult(8 * len(frame), errors, ok)


def sweep_ber(voice: str, snr_list: Iterable[float | None], trials: int, payload_bytes: int,
              seed: int, base: ChannelSpec = ChannelSpec()) -> list[SweepRow]:
    if voice not in BYTE_VOICES:
        raise ValueError(f"sweeps need a byte-carrying voice ({', '.join(BYTE_VOICES)}), got {voice!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for i, snr in enumerate(snr_list):
        results = [run_trial(voice, snr, payload_bytes, trial_seed(seed, i, t), base) for t in range(trials)]
        bits = sum(r.bits for r in results)
        errors = sum(r.errors for r in results)
        rows.append(SweepRow(
            snr_db=math.inf if snr is None else float(snr),
            trials=trials,
            total_bits=bits,
            bit_errors=errors,
            ber=errors / bits if bits else 0.0,
            mean_decode_status=sum(r.ok for r in results) / trials,
        ))
    return rows


def parse_snr_range(text: str) -> list[float]:
    """``LO:HI:STEP`` inclusive of HI, or a comma list; ``inf`` means no noise."""
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise ValueError("SNR step must be positive")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [lo + k * step for k in range(count)]
    return [float(v) for v in text.split(",") if v.strip()]


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f.name for f in fields(SweepRow)])
    for row in rows:
        writer.writerow(astuple(row))
    return out.getvalue()
