import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SR = 44100


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_payload(rng, max_len=24, min_len=0):
    return rng.integers(0, 256, int(rng.integers(min_len, max_len + 1)), dtype=np.uint8).tobytes()


def pad_silence(buf, rng, max_s=1.0):
    from digivoice.dsp import PcmBuffer

    lead = np.zeros(int(rng.integers(0, int(max_s * buf.sample_rate) + 1)))
    tail = np.zeros(int(rng.integers(0, int(max_s * buf.sample_rate) + 1)))
    return PcmBuffer(np.concatenate([lead, buf.samples, tail]), buf.sample_rate)


_WORDS = ("parc", "xerox", "lopes", "mail", "news", "index", "home", "voice", "sound", "a1", "b-2", "c_d")
_TLDS = (".com", ".org", ".net", ".edu", ".io", ".co.uk", ".de")
_CHARS = "abcdefghijklmnopqrstuvwxyz0123456789-_~"


def random_url(rng, scheme):
    """Small grammar over http and mailto URLs, mixing dictionary words and literals."""
    def word():
        if rng.random() < 0.5:
            return str(rng.choice(_WORDS))
        return "".join(rng.choice(list(_CHARS), int(rng.integers(1, 8))))

    host = ".".join(word() for _ in range(int(rng.integers(1, 3)))) + str(rng.choice(_TLDS))
    if scheme == "mailto":
        return f"mailto:{word()}@{host}"
    url = "http://" + ("www." if rng.random() < 0.5 else "") + host
    for _ in range(int(rng.integers(0, 3))):
        url += "/" + word()
    if rng.random() < 0.3:
        url += "?" + word() + "=" + word()
    return url


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
