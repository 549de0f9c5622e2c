"""Preamble + payload transmission for the byte-carrying modems.

Every transmission starts with the sync/calibration preamble.  Framed mode
sends ``build_frame(payload)``; the receiver reads the length header and
then exactly the promised number of bytes.  Unframed mode sends the raw
payload and the receiver finds its end from the audio itself:

* ASK appends one marker symbol (first tone on, remaining tones = count of
  padding bytes) and the last sounding symbol is taken as the marker.
* FSK and cricket stop at the last symbol that carries signal energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import cricket as ck
from .case1 import (
    AskConfig,
    FskConfig,
    ask_energies,
    ask_symbols,
    ask_thresholds,
    bits_to_bytes,
    bytes_to_bits,
    fsk_energies,
    fsk_modulate,
    fsk_symbols_to_bytes,
    pad_bits,
)
from .dsp import PcmBuffer, concat, num_samples
from .errors import DecodeError, TruncatedFrameError
from .framing import (
    HEADER_SIZE,
    Calibration,
    PreambleMatch,
    build_frame,
    detect_preamble,
    emit_preamble,
    frame_size,
    parse_frame,
    preamble_on_symbol,
)

# FSK symbols quieter than this fraction of the expected tone energy are silence
FSK_PRESENCE = 0.05
FSK_SYNC_TONES = 8


class Link:
    """Shared transmit/receive logic; subclasses supply the modem."""

    sample_rate: int
    symbol_samples: int

    # -- modem hooks -----------------------------------------------------------
    def sync_bank(self) -> tuple[float, ...]:
        raise NotImplementedError

    def sync_T(self) -> float:
        raise NotImplementedError

    def preamble_amplitude(self) -> float | None:
        return None

    def symbols_for(self, nbytes: int) -> int:
        raise NotImplementedError

    def modulate(self, data: bytes) -> PcmBuffer:
        raise NotImplementedError

    def demodulate(self, buf: PcmBuffer, cal: Calibration, nbytes: int) -> bytes:
        raise NotImplementedError

    def unframed_tail(self, data: bytes) -> PcmBuffer | None:
        return None

    def decode_unframed(self, buf: PcmBuffer, cal: Calibration) -> bytes:
        raise NotImplementedError

    # -- shared ----------------------------------------------------------------
    def preamble(self) -> PcmBuffer:
        return emit_preamble(self.sync_bank(), self.sync_T(), self.sample_rate, self.preamble_amplitude())

    def transmit(self, payload: bytes, framed: bool = False) -> PcmBuffer:
        data = build_frame(payload) if framed else bytes(payload)
        parts = [self.preamble(), self.modulate(data)]
        if not framed:
            tail = self.unframed_tail(data)
            if tail is not None:
                parts.append(tail)
        return concat(parts, self.sample_rate)

    def sync(self, buf: PcmBuffer) -> PreambleMatch:
        if buf.sample_rate != self.sample_rate:
            raise ValueError(f"expected {self.sample_rate} Hz audio, got {buf.sample_rate} Hz")
        return detect_preamble(buf, self.sync_bank(), self.sync_T())

    def body(self, buf: PcmBuffer, match: PreambleMatch, nsym: int | None = None) -> PcmBuffer:
        """Whole symbols after the preamble; exactly ``nsym`` of them when given."""
        start = match.payload_offset
        n = self.symbol_samples
        # sync may land a few samples late; a nearly complete last symbol still counts
        slack = n // 4
        avail = max(0, len(buf) - start + slack) // n
        if nsym is None:
            nsym = avail
        elif nsym > avail:
            raise TruncatedFrameError(f"need {nsym} symbols after the preamble, only {avail} present")
        x = buf.samples[start: start + nsym * n]
        if x.size < nsym * n:
            x = np.concatenate([x, np.zeros(nsym * n - x.size)])
        return PcmBuffer(x, buf.sample_rate)

    def receive_bytes(self, buf: PcmBuffer, nbytes: int, match: PreambleMatch | None = None) -> bytes:
        """Demodulate exactly ``nbytes`` after the preamble, with no frame checks."""
        match = match or self.sync(buf)
        return self.demodulate(self.body(buf, match, self.symbols_for(nbytes)), match.cal, nbytes)

    def receive(self, buf: PcmBuffer, framed: bool = False) -> bytes:
        match = self.sync(buf)
        if not framed:
            return self.decode_unframed(self.body(buf, match), match.cal)
        header = self.receive_bytes(buf, HEADER_SIZE, match)
        return parse_frame(self.receive_bytes(buf, frame_size(header), match))


@dataclass(frozen=True)
class AskLink(Link):
    cfg: AskConfig

    @property
    def sample_rate(self) -> int:
        return self.cfg.sample_rate

    @property
    def symbol_samples(self) -> int:
        return self.cfg.symbol_samples

    def sync_bank(self):
        return self.cfg.tone_bank

    def sync_T(self):
        return self.cfg.symbol_duration_s

    def symbols_for(self, nbytes: int) -> int:
        return math.ceil(8 * nbytes / self.cfg.bits_per_symbol)

    def modulate(self, data: bytes) -> PcmBuffer:
        bits = pad_bits(bytes_to_bits(data), self.cfg.bits_per_symbol)
        rows = bits.reshape(-1, self.cfg.bits_per_symbol)
        return PcmBuffer(ask_symbols(self.cfg, rows).reshape(-1), self.sample_rate)

    def _bits(self, buf: PcmBuffer, cal: Calibration) -> np.ndarray:
        return ask_energies(self.cfg, buf) > ask_thresholds(self.cfg, cal)[None, :]

    def demodulate(self, buf, cal, nbytes):
        return bits_to_bytes(self._bits(buf, cal).reshape(-1))[:nbytes]

    def unframed_tail(self, data: bytes) -> PcmBuffer:
        m = self.cfg.bits_per_symbol
        pad_bytes = (-8 * len(data)) % m // 8
        marker = [1] + [(pad_bytes >> s) & 1 for s in range(m - 2, -1, -1)]
        return PcmBuffer(ask_symbols(self.cfg, np.array([marker])).reshape(-1), self.sample_rate)

    def decode_unframed(self, buf, cal):
        rows = self._bits(buf, cal)
        sounding = np.flatnonzero(rows.any(axis=1))
        if sounding.size == 0:
            raise DecodeError("no end-of-payload marker after the preamble")
        last = int(sounding[-1])
        marker = rows[last].astype(int)
        pad = int("".join(map(str, marker[1:])) or "0", 2)
        data = bits_to_bytes(rows[:last].reshape(-1).astype(np.uint8))
        if pad > len(data):
            raise DecodeError(f"end marker claims {pad} padding bytes, payload has {len(data)}")
        return data[: len(data) - pad]


@dataclass(frozen=True)
class FskLink(Link):
    cfg: FskConfig

    @property
    def sample_rate(self) -> int:
        return self.cfg.sample_rate

    @property
    def symbol_samples(self) -> int:
        return self.cfg.symbol_samples

    @cached_property
    def _sync_bank(self) -> tuple[float, ...]:
        bank = self.cfg.tone_bank
        spacing = bank[1] - bank[0]
        T = self.cfg.symbol_duration_s
        for step in range(1, len(bank)):
            cycles = step * spacing * T
            if cycles >= 1 - 1e-9 and abs(cycles - round(cycles)) < 1e-9:
                break
        else:
            step = max(1, math.ceil(1 / (spacing * T)))
        # few loud tones sync better than many quiet ones under a peak limit
        step *= max(1, math.ceil(len(bank) / (FSK_SYNC_TONES * step)))
        return bank[::step]

    def sync_bank(self):
        return self._sync_bank

    def sync_T(self):
        return self.cfg.symbol_duration_s

    @cached_property
    def _preamble_amplitude(self) -> float:
        unit = preamble_on_symbol(self._sync_bank, self.symbol_samples, self.sample_rate, 1.0)
        return 0.98 / float(np.abs(unit).max())

    def preamble_amplitude(self):
        return self._preamble_amplitude

    def symbols_for(self, nbytes: int) -> int:
        return math.ceil(8 * nbytes / self.cfg.bits_per_symbol)

    def modulate(self, data: bytes) -> PcmBuffer:
        return fsk_modulate(self.cfg, data)

    def demodulate(self, buf, cal, nbytes):
        values = np.argmax(fsk_energies(self.cfg, buf), axis=1)
        return fsk_symbols_to_bytes(self.cfg, values)[:nbytes]

    def decode_unframed(self, buf, cal):
        energies = fsk_energies(self.cfg, buf)
        if energies.shape[0] == 0:
            return b""
        on, _ = cal.for_tones(self._sync_bank)
        expected = float(np.median(on)) / self._preamble_amplitude ** 2
        sounding = np.flatnonzero(energies.max(axis=1) > FSK_PRESENCE * expected)
        if sounding.size == 0:
            return b""
        values = np.argmax(energies[: sounding[-1] + 1], axis=1)
        return fsk_symbols_to_bytes(self.cfg, values)


@dataclass(frozen=True)
class CricketLink(Link):
    cfg: ck.CricketConfig = ck.DEFAULT_CONFIG

    @property
    def sample_rate(self) -> int:
        return self.cfg.sample_rate

    @property
    def symbol_samples(self) -> int:
        return self.cfg.period_samples

    def sync_bank(self):
        return (float(self.cfg.carrier_hz),)

    def sync_T(self):
        return self.cfg.beep_s

    def preamble_amplitude(self):
        return self.cfg.amp_levels[0]

    def symbols_for(self, nbytes: int) -> int:
        return math.ceil(8 * nbytes / ck.BITS_PER_SYMBOL)

    def modulate(self, data: bytes) -> PcmBuffer:
        return ck.cricket_encode(bytes_to_bits(data), self.cfg)

    def demodulate(self, buf, cal, nbytes):
        return bits_to_bytes(ck.cricket_decode(self.cfg, buf, cal))[:nbytes]

    def decode_unframed(self, buf, cal):
        silent = ck.count_trailing_silent_periods(self.cfg, buf, cal)
        keep = len(buf) // self.symbol_samples - silent
        body = buf.slice(0, keep * self.symbol_samples)
        return bits_to_bytes(ck.cricket_decode(self.cfg, body, cal))


def preamble_duration_s(link: Link) -> float:
    return 8 * num_samples(link.sync_T(), link.sample_rate) / link.sample_rate
