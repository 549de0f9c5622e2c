"""Acoustic modems that carry data as audible "voices"."""

from .case1 import AskConfig, FskConfig, data_rate, preset
from .channel import ChannelSpec, apply_channel, awgn
from .dsp import PcmBuffer, WindowSpec, concat, dft_power_oracle, goertzel_power, mix, synth_tone
from .framing import Calibration, build_frame, detect_preamble, emit_preamble, parse_frame
from .voices import BYTE_VOICES, VOICES, decode, encode

__version__ = "0.1.0"
