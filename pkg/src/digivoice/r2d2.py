"""R2D2 text voice: letters as beeps, digits as grunts, space and punctuation as chirps.

Forty symbols in three sound classes, each with its own duration:

* beep (100 ms): one tone from a 26-tone bank, one per letter a-z
* grunt (200 ms): a subset of a 4-tone bank sounded together, one per digit
* chirp (250 ms): a frequency sweep whose shape encodes ' ', '.', ',' or '?'
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dsp import DEFAULT_SAMPLE_RATE, PcmBuffer, concat, goertzel_bank, mix, num_samples, synth_sweep, synth_tone
from .errors import DecodeError

LETTERS = string.ascii_lowercase
DIGITS = string.digits
CHIRP_CHARS = " .,?"
ALPHABET = LETTERS + CHIRP_CHARS + DIGITS

LOOKAHEAD_S = 0.080
GATE_FRAME_S = 0.001
# frames quieter than this fraction of the loudest frame count as silence
SILENCE_GATE = 1e-4
MIN_CENTROID_SHIFT_HZ = 80.0
# a beep window must put this share of the bank's line energy into one line
BEEP_LINE_SHARE = 0.5
CHIRP_SEGMENTS = 5


class UnsupportedCharacter(ValueError):
    def __init__(self, char: str, position: int):
        super().__init__(f"character {char!r} at position {position} has no R2D2 symbol")
        self.char = char
        self.position = position


def _grunt_combos() -> tuple[tuple[int, ...], ...]:
    pairs = list(itertools.combinations(range(4), 2))
    triples = list(itertools.combinations(range(4), 3))
    return tuple(pairs + triples)


@dataclass(frozen=True)
class R2d2Alphabet:
    beep_freqs: tuple[float, ...] = tuple(1500.0 + 100.0 * i for i in range(26))
    chirp_low_hz: float = 4500.0
    chirp_high_hz: float = 5500.0
    grunt_bank: tuple[float, ...] = (500.0, 600.0, 700.0, 800.0)
    grunt_combos: tuple[tuple[int, ...], ...] = _grunt_combos()
    beep_s: float = 0.100
    chirp_s: float = 0.250
    grunt_s: float = 0.200
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        if len(self.beep_freqs) != 26 or len(self.grunt_combos) != 10 or len(self.grunt_bank) != 4:
            raise ValueError("R2D2 alphabet needs 26 beeps, 4 chirps and 10 grunts")
        if any(len(c) < 2 for c in self.grunt_combos) or len(set(self.grunt_combos)) != 10:
            raise ValueError("grunts must be distinct tone subsets of size >= 2")
        nyq = self.sample_rate / 2
        if max(self.beep_freqs + self.grunt_bank + (self.chirp_high_hz,)) >= nyq:
            raise ValueError("all R2D2 frequencies must lie below Nyquist")
        beep_lo, beep_hi = min(self.beep_freqs), max(self.beep_freqs)
        if max(self.grunt_bank) >= beep_lo or not (self.chirp_low_hz > beep_hi or self.chirp_high_hz < beep_lo):
            raise ValueError("beep, grunt and chirp frequency regions must be disjoint")

    @property
    def size(self) -> int:
        return len(self.beep_freqs) + len(CHIRP_CHARS) + len(self.grunt_combos)

    def chirp_breakpoints(self, char: str) -> tuple[float, ...]:
        lo, hi = self.chirp_low_hz, self.chirp_high_hz
        return {" ": (lo, hi), ".": (hi, lo), ",": (lo, hi, lo), "?": (hi, lo, hi)}[char]

    def duration_of(self, char: str) -> float:
        if char in LETTERS:
            return self.beep_s
        if char in DIGITS:
            return self.grunt_s
        return self.chirp_s

    def regions(self) -> dict[str, tuple[float, float]]:
        pad = 100.0
        return {
            "grunt": (min(self.grunt_bank) - pad, max(self.grunt_bank) + pad),
            "beep": (min(self.beep_freqs) - pad, max(self.beep_freqs) + pad),
            "chirp": (self.chirp_low_hz - pad, self.chirp_high_hz + pad),
        }

    def table(self) -> list[tuple[str, str, str]]:
        """(character, class, description) rows for every symbol."""
        rows = [(c, "beep", f"{f:.0f} Hz") for c, f in zip(LETTERS, self.beep_freqs)]
        for c in CHIRP_CHARS:
            path = " -> ".join(f"{f:.0f}" for f in self.chirp_breakpoints(c))
            rows.append((c, "chirp", f"{path} Hz sweep"))
        for d, combo in zip(DIGITS, self.grunt_combos):
            rows.append((d, "grunt", " + ".join(f"{self.grunt_bank[i]:.0f}" for i in combo) + " Hz"))
        return rows


DEFAULT_ALPHABET = R2d2Alphabet()


def normalize_text(text: str) -> str:
    text = text.lower()
    for i, ch in enumerate(text):
        if ch not in ALPHABET:
            raise UnsupportedCharacter(ch, i)
    return text


@lru_cache(maxsize=256)
def symbol_waveform(char: str, alphabet: R2d2Alphabet = DEFAULT_ALPHABET) -> PcmBuffer:
    sr = alphabet.sample_rate
    if char in LETTERS:
        return synth_tone(alphabet.beep_freqs[LETTERS.index(char)], alphabet.beep_s, 1.0, sr)
    if char in DIGITS:
        combo = alphabet.grunt_combos[DIGITS.index(char)]
        return mix([synth_tone(alphabet.grunt_bank[i], alphabet.grunt_s, 1.0, sr) for i in combo])
    if char in CHIRP_CHARS:
        return synth_sweep(alphabet.chirp_breakpoints(char), alphabet.chirp_s, 1.0, sr)
    raise UnsupportedCharacter(char, 0)


def r2d2_encode(text: str, alphabet: R2d2Alphabet = DEFAULT_ALPHABET) -> PcmBuffer:
    text = normalize_text(text)
    return concat([symbol_waveform(c, alphabet) for c in text], alphabet.sample_rate)


def r2d2_sentence_stats(text: str, alphabet: R2d2Alphabet = DEFAULT_ALPHABET) -> dict[str, float]:
    """Air time and information rate, counting only letters and digits as content."""
    text = normalize_text(text)
    if not text:
        raise ValueError("rate of an empty message is undefined")
    duration = sum(num_samples(alphabet.duration_of(c), alphabet.sample_rate) for c in text)
    duration /= alphabet.sample_rate
    word_chars = sum(c not in CHIRP_CHARS for c in text)
    return {"duration_s": duration, "info_bps": word_chars * math.log2(alphabet.size) / duration}


# -- receiver ------------------------------------------------------------------

def _band_power(x: np.ndarray, sr: int, lo: float, hi: float) -> tuple[float, float]:
    """Power and centroid of ``x`` restricted to [lo, hi] Hz."""
    nfft = 1 << max(12, int(np.ceil(np.log2(max(x.size, 1)))))
    spec = np.abs(np.fft.rfft(x, nfft)) ** 2
    freqs = np.fft.rfftfreq(nfft, 1 / sr)
    sel = (freqs >= lo) & (freqs <= hi)
    p = spec[sel]
    total = float(p.sum())
    centroid = float((freqs[sel] * p).sum() / total) if total > 0 else 0.0
    return total, centroid


def _centroid_track(x: np.ndarray, alphabet: R2d2Alphabet) -> np.ndarray:
    lo, hi = alphabet.regions()["chirp"]
    return np.array([_band_power(seg, alphabet.sample_rate, lo, hi)[1]
                     for seg in np.array_split(x, CHIRP_SEGMENTS)])


@lru_cache(maxsize=8)
def _chirp_templates(alphabet: R2d2Alphabet) -> np.ndarray:
    return np.stack([_centroid_track(symbol_waveform(c, alphabet).samples, alphabet) for c in CHIRP_CHARS])


def classify_window(x: np.ndarray, alphabet: R2d2Alphabet, floor: float) -> str | None:
    """Sound class of a look-ahead window, or None when it holds no class evidence."""
    sr = alphabet.sample_rate
    if float(np.mean(x * x)) <= floor:
        return None
    powers = {name: _band_power(x, sr, lo, hi)[0] for name, (lo, hi) in alphabet.regions().items()}
    total = sum(powers.values())
    cls = max(powers, key=powers.get)
    if total <= 0 or powers[cls] < 0.5 * total:
        return None
    if cls == "beep":
        e = goertzel_bank(x[None, :], alphabet.beep_freqs, sr)[0]
        if e.max() < BEEP_LINE_SHARE * e.sum():
            return None
    if cls == "chirp":
        lo, hi = alphabet.regions()["chirp"]
        half = x.size // 2
        c1 = _band_power(x[:half], sr, lo, hi)[1]
        c2 = _band_power(x[half:], sr, lo, hi)[1]
        if abs(c2 - c1) < MIN_CENTROID_SHIFT_HZ:
            return None
    return cls


def _decode_symbol(cls: str, x: np.ndarray, alphabet: R2d2Alphabet) -> str:
    sr = alphabet.sample_rate
    if cls == "beep":
        e = goertzel_bank(x[None, :], alphabet.beep_freqs, sr)[0]
        return LETTERS[int(np.argmax(e))]
    if cls == "grunt":
        e = goertzel_bank(x[None, :], alphabet.grunt_bank, sr)[0]
        e = e / max(e.max(), 1e-300)
        scores = []
        for combo in alphabet.grunt_combos:
            on = [e[i] for i in combo]
            off = [e[i] for i in range(len(e)) if i not in combo]
            scores.append(min(on) - max(off, default=0.0))
        return DIGITS[int(np.argmax(scores))]
    track = _centroid_track(x, alphabet)
    dist = np.square(_chirp_templates(alphabet) - track[None, :]).sum(axis=1)
    return CHIRP_CHARS[int(np.argmin(dist))]


def _activity(x: np.ndarray, sr: int) -> tuple[np.ndarray, int, float]:
    frame = max(1, num_samples(GATE_FRAME_S, sr))
    count = x.size // frame
    energy = np.square(x[: count * frame]).reshape(count, frame).mean(axis=1) if count else np.zeros(0)
    gate = SILENCE_GATE * float(energy.max(initial=0.0))
    return energy > gate, frame, gate


def r2d2_decode(buf: PcmBuffer, alphabet: R2d2Alphabet = DEFAULT_ALPHABET, trim_silence: bool = True) -> str:
    """Greedy left-to-right segmentation into beeps, grunts and chirps."""
    if buf.sample_rate != alphabet.sample_rate:
        alphabet = R2d2Alphabet(**{**alphabet.__dict__, "sample_rate": buf.sample_rate})
    sr = alphabet.sample_rate
    x = buf.samples
    active, frame, gate = _activity(x, sr)
    if not active.any():
        return ""
    pos = int(np.argmax(active)) * frame if trim_silence else 0
    end = (int(active.size - np.argmax(active[::-1])) * frame) if trim_silence else x.size
    look = num_samples(LOOKAHEAD_S, sr)
    durations = {
        "beep": num_samples(alphabet.beep_s, sr),
        "grunt": num_samples(alphabet.grunt_s, sr),
        "chirp": num_samples(alphabet.chirp_s, sr),
    }
    shortest = min(durations.values())
    out = []
    while end - pos >= shortest // 2:
        window = x[pos: pos + look]
        cls = classify_window(window, alphabet, gate / 4) if window.size == look else None
        if cls is None:
            raise DecodeError(f"no recognisable R2D2 symbol at sample {pos}")
        span = x[pos: pos + durations[cls]]
        out.append(_decode_symbol(cls, span, alphabet))
        pos += durations[cls]
    return "".join(out)
