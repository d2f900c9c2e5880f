"""Invertible complex-color spectrograms.

Encode audio into images where every pixel carries a full complex Fourier
coefficient (phase as hue, log-amplitude as saturation/brightness), decode
such images back to the exact waveform, warp displays onto a log-frequency
axis, and measure sub-bin frequency offsets from the phase-beat color cycles.
"""

from .audio import AudioBuffer, read_wav, write_wav
from .analysis import (BeatMeasurement, NoteResult, TuningReport,
                       estimate_offset, render_beat_schematic, tuning_report)
from .codec import (ColorImage, CspecFile, decode, decode_image, encode,
                    export_png, import_png, read_cspec, render_image,
                    write_cspec)
from .colormap import (Hsb, Rgb8, complex_to_hsb, complex_to_rgb, hsb_to_complex,
                       hsb_to_rgb, render_column, rgb_to_complex, rgb_to_hsb)
from .dsp import (ComplexSpectrogram, FrameSpec, forward_transform,
                  frame_signal, inverse_transform, project_frequency)
from .logwarp import LogAxisSpec, build_log_axis, locate_black_lines, warp_column
from .synth import chirp, chromatic_scale, fm_tone, synthesize, tone

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer", "BeatMeasurement", "ColorImage", "ComplexSpectrogram",
    "CspecFile", "FrameSpec", "Hsb", "LogAxisSpec", "NoteResult", "Rgb8",
    "TuningReport", "build_log_axis", "chirp", "chromatic_scale",
    "complex_to_hsb", "complex_to_rgb", "decode", "decode_image", "encode",
    "estimate_offset", "export_png", "fm_tone", "forward_transform",
    "frame_signal", "hsb_to_complex", "hsb_to_rgb", "import_png",
    "inverse_transform", "locate_black_lines", "project_frequency",
    "read_cspec", "read_wav", "render_beat_schematic", "render_column",
    "render_image", "rgb_to_complex", "rgb_to_hsb", "synthesize", "tone",
    "tuning_report", "warp_column", "write_cspec", "write_wav",
]
