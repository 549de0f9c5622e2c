"""Print nominal and measured data rates for every voice."""

from __future__ import annotations

import argparse

import numpy as np

from digivoice.case1 import PRESET_NAMES, data_rate, preset
from digivoice.metrics import phoneme_rate, throughput
from digivoice.r2d2 import r2d2_sentence_stats
from digivoice.voices import BYTE_VOICES, encode, link_for


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--payload-bytes", type=int, default=160)
    args = parser.parse_args()

    payload = np.random.default_rng(0).integers(0, 256, args.payload_bytes, dtype=np.uint8).tobytes()
    print(f"{'voice':10} {'nominal':>9} {'body':>9} {'with sync':>10}")
    for voice in BYTE_VOICES:
        link = link_for(voice)
        body_s = len(link.modulate(payload)) / link.sample_rate
        total_s = encode(voice, payload, framed=False).duration_s
        nominal = f"{data_rate(preset(voice)):g}" if voice in PRESET_NAMES else "-"
        bits = 8 * len(payload)
        print(f"{voice:10} {nominal:>9} {throughput(bits, body_s):9.1f} {throughput(bits, total_s):10.1f}")

    stats = r2d2_sentence_stats(" ".join(["abcde"] * 12) + ".")
    print(f"\nr2d2 12-word sentence: {stats['duration_s']:.2f} s, {stats['info_bps']:.1f} bps")
    print(f"phoneme model, 40 phonemes at 10/s: {phoneme_rate(40, 10):.1f} bps")


if __name__ == "__main__":
    main()
