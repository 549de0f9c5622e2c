"""``dv``: encode, decode, simulate, sweep and describe digital voices over WAV files.

Exit codes: 0 success, 1 other errors, 2 sync failure, 3 CRC or frame failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import voices
from .channel import ChannelSpec, apply_channel, load_channel_spec
from .dsp import DEFAULT_SAMPLE_RATE
from .errors import DecodeError, FrameError, SyncError
from .metrics import parse_snr_range, rows_to_csv, sweep_ber
from .wavio import read_wav, write_wav

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SYNC = 2
EXIT_FRAME = 3


def _cmd_encode(args) -> int:
    if args.text is not None:
        payload: bytes | str = args.text
    else:
        payload = Path(args.infile).read_bytes()
        if args.voice in voices.TEXT_VOICES:
            payload = payload.decode("ascii").rstrip("\r\n")
    buf = voices.encode(args.voice, payload, framed=args.framed, sample_rate=args.sample_rate)
    write_wav(args.out, buf)
    print(f"{args.out}: {len(buf)} samples, {buf.duration_s:.3f} s", file=sys.stderr)
    return EXIT_OK


def _cmd_decode(args) -> int:
    buf = read_wav(args.infile)
    result = voices.decode(args.voice, buf, framed=args.framed)
    if isinstance(result, str):
        result = (result + "\n").encode("ascii")
    if args.out:
        Path(args.out).write_bytes(result)
    else:
        sys.stdout.buffer.write(result)
        sys.stdout.flush()
    return EXIT_OK


def _channel_from_args(args) -> ChannelSpec:
    overrides = dict(snr_db=args.snr, gain=args.gain, clip=args.clip, seed=args.seed)
    if args.notch:
        overrides["notches"] = tuple(args.notch)
    if args.channel:
        return load_channel_spec(args.channel, **overrides)
    return ChannelSpec(**{k: v for k, v in overrides.items() if v is not None})


def _cmd_simulate(args) -> int:
    spec = _channel_from_args(args)
    write_wav(args.out, apply_channel(spec, read_wav(args.infile)))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    rows = sweep_ber(args.voice, parse_snr_range(args.snr), args.trials, args.payload_bytes, args.seed)
    text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_info(args) -> int:
    print("\n".join(voices.describe(args.voice, args.sample_rate)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dv", description="Data over audible sound.")
    sub = parser.add_subparsers(dest="command", required=True)

    def voice_arg(p, choices=voices.VOICES):
        p.add_argument("--voice", required=True, choices=choices)

    p = sub.add_parser("encode", help="payload -> WAV")
    voice_arg(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="infile", help="payload file (raw bytes; ASCII text for r2d2/url)")
    src.add_argument("--text", help="payload given inline")
    p.add_argument("--out", required=True)
    p.add_argument("--framed", action="store_true")
    p.add_argument("--sample-rate", type=int, default=DEFAULT_SAMPLE_RATE)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="WAV -> payload on stdout")
    voice_arg(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="write the payload here instead of stdout")
    p.add_argument("--framed", action="store_true")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("simulate", help="pass a WAV through the simulated channel")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--snr", type=float)
    p.add_argument("--notch", type=float, action="append", help="notch centre in Hz (repeatable)")
    p.add_argument("--gain", type=float)
    p.add_argument("--clip", type=float)
    p.add_argument("--channel", help="key=value channel spec file; flags override it")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="BER versus SNR as CSV")
    voice_arg(p, voices.BYTE_VOICES)
    p.add_argument("--snr", required=True, help="LO:HI:STEP in dB, or a comma list")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--payload-bytes", type=int, default=32)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", help="output file (stdout if omitted)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("info", help="voice parameters and data rate")
    voice_arg(p)
    p.add_argument("--sample-rate", type=int, default=DEFAULT_SAMPLE_RATE)
    p.set_defaults(func=_cmd_info)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SyncError as exc:
        print(f"dv: sync failure: {exc}", file=sys.stderr)
        return EXIT_SYNC
    except FrameError as exc:
        print(f"dv: frame check failed: {exc}", file=sys.stderr)
        return EXIT_FRAME
    except (DecodeError, ValueError, OSError) as exc:
        print(f"dv: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
