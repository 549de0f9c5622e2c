"""BER versus SNR for several voices, optionally through a notched channel."""

from __future__ import annotations

import argparse
import sys

from digivoice.channel import ChannelSpec
from digivoice.metrics import parse_snr_range, rows_to_csv, sweep_ber
from digivoice.voices import BYTE_VOICES


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--voices", nargs="+", default=["fsk256", "ask128"], choices=BYTE_VOICES)
    parser.add_argument("--snr", default="-10:30:5")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--payload-bytes", type=int, default=32)
    parser.add_argument("--notch", type=float, action="append", default=[])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    base = ChannelSpec(notches=tuple(args.notch))
    for voice in args.voices:
        rows = sweep_ber(voice, parse_snr_range(args.snr), args.trials, args.payload_bytes, args.seed, base)
        sys.stdout.write(f"# {voice}\n" + rows_to_csv(rows))


if __name__ == "__main__":
    main()
