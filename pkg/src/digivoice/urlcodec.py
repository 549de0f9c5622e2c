"""Poly-semantic URL codes.

Two layers ride in one sound.  The URL's scheme picks the frequency band
(mailto around 1 kHz, http around 2 kHz), so a listener that only measures
band energy learns the scheme.  Inside the band, the URL is source-coded with
a fixed-width dictionary code, framed, and sent with 8-tone B-ASK.

Code stream: 6-bit tokens.  0 escapes a 7-bit ASCII literal, 63 ends the
stream, 1..62 index the dictionary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .case1 import AskConfig, as_bits, bits_to_bytes, bytes_to_bits
from .dsp import DEFAULT_SAMPLE_RATE, PcmBuffer
from .errors import SyncError
from .link import AskLink

CODE_BITS = 6
LITERAL_BITS = 7
ESCAPE = 0
END = 63
MAX_ENTRIES = 62

BAND_TONES = 8
BAND_SPACING_HZ = 50.0
SYMBOL_S = 0.020
BAND_BASE_HZ = {"mailto": 1000.0, "http": 2000.0}
BAND_WIDTH_HZ = 400.0
# a band must carry this many times the power of an equally wide noise region
BAND_PRESENCE = 10.0

DEFAULT_ENTRIES = (
    "http://", "https://", "mailto:", "ftp://", "www.",
    ".com", ".org", ".net", ".edu", ".gov", ".mil", ".int",
    ".co.uk", ".uk", ".de", ".fr", ".jp", ".io",
    ".html", ".htm", ".php", ".asp", ".cgi", ".jpg", ".gif", ".pdf",
    "index", "home", "news", "mail", "search", "about", "contact",
    "~", "%20", "/", ".", "-", "_", "@", "?", "=", "&", "#", ":",
)


def _check_ascii(text: str) -> None:
    for i, ch in enumerate(text):
        if not 0x20 <= ord(ch) <= 0x7E:
            raise ValueError(f"character {ch!r} at position {i} is not printable ASCII")


class SchemeClass(enum.Enum):
    MAILTO = "mailto"
    HTTP = "http"
    OTHER = "other"


@dataclass(frozen=True)
class UrlDictionary:
    entries: tuple[str, ...] = DEFAULT_ENTRIES

    def __post_init__(self):
        entries = tuple(self.entries)
        if len(entries) > MAX_ENTRIES:
            raise ValueError(f"dictionary holds at most {MAX_ENTRIES} entries, got {len(entries)}")
        if any(not e for e in entries):
            raise ValueError("dictionary entries must be non-empty")
        if len(set(entries)) != len(entries):
            raise ValueError("dictionary entries must be unique")
        for e in entries:
            _check_ascii(e)
        object.__setattr__(self, "entries", entries)

    def code_of(self, entry: str) -> int:
        return self.entries.index(entry) + 1

    def tokenize(self, url: str) -> list[str]:
        """Greedy longest-match split; unmatched characters become single-char tokens."""
        by_len = sorted(self.entries, key=len, reverse=True)
        tokens, i = [], 0
        while i < len(url):
            hit = next((e for e in by_len if url.startswith(e, i)), None)
            tokens.append(hit if hit is not None else url[i])
            i += len(tokens[-1])
        return tokens

    @classmethod
    def load(cls, path: str | Path) -> "UrlDictionary":
        lines = Path(path).read_text(encoding="ascii").split("\n")
        return cls(tuple(line for line in lines if line != ""))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text("".join(e + "\n" for e in self.entries), encoding="ascii")


DEFAULT_DICTIONARY = UrlDictionary()


def classify_scheme(url: str) -> SchemeClass:
    lower = url.lower()
    if lower.startswith("http://"):
        return SchemeClass.HTTP
    if lower.startswith("mailto:"):
        return SchemeClass.MAILTO
    return SchemeClass.OTHER


def _bits(value: int, width: int) -> list[int]:
    return [(value >> s) & 1 for s in range(width - 1, -1, -1)]


def url_compress(url: str, dictionary: UrlDictionary = DEFAULT_DICTIONARY) -> np.ndarray:
    _check_ascii(url)
    entries = set(dictionary.entries)
    out: list[int] = []
    for tok in dictionary.tokenize(url):
        if tok in entries:
            out += _bits(dictionary.code_of(tok), CODE_BITS)
        else:
            out += _bits(ESCAPE, CODE_BITS) + _bits(ord(tok), LITERAL_BITS)
    out += _bits(END, CODE_BITS)
    return np.array(out, dtype=np.uint8)


def url_decompress(bits: Sequence[int], dictionary: UrlDictionary = DEFAULT_DICTIONARY) -> str:
    """Inverse of :func:`url_compress`; bits after the END code are ignored."""
    bits = as_bits(bits)
    pos, out = 0, []

    def take(width: int) -> int:
        nonlocal pos
        if pos + width > bits.size:
            raise ValueError(f"code stream truncated at bit {pos} before END")
        value = 0
        for b in bits[pos: pos + width]:
            value = (value << 1) | int(b)
        pos += width
        return value

    while True:
        code = take(CODE_BITS)
        if code == END:
            return "".join(out)
        if code == ESCAPE:
            ch = take(LITERAL_BITS)
            if not 0x20 <= ch <= 0x7E:
                raise ValueError(f"escaped literal {ch:#04x} is not printable ASCII")
            out.append(chr(ch))
        elif code <= len(dictionary.entries):
            out.append(dictionary.entries[code - 1])
        else:
            raise ValueError(f"code {code} at bit {pos - CODE_BITS} is not in the dictionary")


def url_to_bytes(url: str, dictionary: UrlDictionary = DEFAULT_DICTIONARY) -> bytes:
    bits = url_compress(url, dictionary)
    pad = (-bits.size) % 8
    return bits_to_bytes(np.concatenate([bits, np.zeros(pad, dtype=np.uint8)]))


def url_from_bytes(data: bytes, dictionary: UrlDictionary = DEFAULT_DICTIONARY) -> str:
    return url_decompress(bytes_to_bits(data), dictionary)


def band_config(scheme: SchemeClass, sample_rate: int = DEFAULT_SAMPLE_RATE) -> AskConfig:
    if scheme is SchemeClass.OTHER:
        raise ValueError("only mailto: and http:// URLs have a band")
    base = BAND_BASE_HZ[scheme.value]
    bank = tuple(base + BAND_SPACING_HZ * i for i in range(BAND_TONES))
    return AskConfig(bank, SYMBOL_S, sample_rate, f"url-{scheme.value}")


def band_edges(scheme: SchemeClass) -> tuple[float, float]:
    base = BAND_BASE_HZ[scheme.value]
    return base, base + BAND_WIDTH_HZ


def band_energy_fractions(buf: PcmBuffer) -> dict[SchemeClass, float]:
    """Share of the buffer's total energy inside each scheme band."""
    spec = np.abs(np.fft.rfft(buf.samples)) ** 2
    freqs = np.fft.rfftfreq(len(buf), 1 / buf.sample_rate)
    total = float(spec.sum())
    out = {}
    for scheme in (SchemeClass.MAILTO, SchemeClass.HTTP):
        lo, hi = band_edges(scheme)
        sel = (freqs >= lo) & (freqs <= hi)
        out[scheme] = float(spec[sel].sum()) / total if total > 0 else 0.0
    return out


def url_classify_audio(buf: PcmBuffer) -> SchemeClass:
    """Scheme from band energy alone; nothing is demodulated or deframed."""
    if len(buf) == 0:
        return SchemeClass.OTHER
    spec = np.abs(np.fft.rfft(buf.samples)) ** 2
    freqs = np.fft.rfftfreq(len(buf), 1 / buf.sample_rate)
    powers = {}
    for scheme in (SchemeClass.MAILTO, SchemeClass.HTTP):
        lo, hi = band_edges(scheme)
        powers[scheme] = float(spec[(freqs >= lo) & (freqs <= hi)].sum())
    best = max(powers, key=powers.get)
    audible = (freqs >= 300.0) & (freqs <= 8000.0)
    bins_per_band = int(((freqs >= 0) & (freqs <= BAND_WIDTH_HZ)).sum())
    noise = float(np.median(spec[audible])) * bins_per_band
    other = min(powers.values())
    if powers[best] <= 0 or powers[best] <= BAND_PRESENCE * max(noise, other):
        return SchemeClass.OTHER
    return best


def url_encode_audio(url: str, dictionary: UrlDictionary = DEFAULT_DICTIONARY,
                     sample_rate: int = DEFAULT_SAMPLE_RATE) -> PcmBuffer:
    scheme = classify_scheme(url)
    if scheme is SchemeClass.OTHER:
        raise ValueError(f"no band for URL scheme of {url!r}; only mailto: and http:// are sent")
    return AskLink(band_config(scheme, sample_rate)).transmit(url_to_bytes(url, dictionary), framed=True)


def url_decode_audio(buf: PcmBuffer, dictionary: UrlDictionary = DEFAULT_DICTIONARY) -> str:
    scheme = url_classify_audio(buf)
    if scheme is SchemeClass.OTHER:
        raise SyncError("neither URL band carries a signal")
    data = AskLink(band_config(scheme, buf.sample_rate)).receive(buf, framed=True)
    return url_from_bytes(data, dictionary)
