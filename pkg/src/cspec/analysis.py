"""Phase-beat analysis: sub-bin frequency offsets, tuning reports, schematic.

A steady tone offset delta Hz from a coefficient center advances that
coefficient's phase by 2*pi*delta*hop/fs per slice, which the color map shows
as hue stripes cycling delta times per second: RGB order for sharp (delta > 0)
tones, RBG for flat. Summing the per-slice phase steps, each wrapped into
(-pi, pi], therefore measures the offset far below the bin spacing. The wrap
bounds the measurable offset to |delta| < fs / (2 * hop), about 10.77 Hz at
44.1 kHz with hop 2048.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .audio import AudioBuffer
from .codec import ColorImage
from .colormap import complex_to_rgb
from .dsp import ComplexSpectrogram, FrameSpec, project_frequency_many
from .notes import cents_between, frequency_to_note, note_to_frequency

MAGNITUDE_FLOOR = 1e-3
MIN_MEASURE_SECONDS = 0.25
CONSTANT_HUE_HZ = 0.05       # |offset| below this reads as a steady hue
IN_TUNE_CENTS = 2.0
DEFAULT_SCHEMATIC_SEED = 42


@dataclass(frozen=True)
class BeatMeasurement:
    bin: int
    offset_hz: float
    cycles_per_second: float
    direction: str  # "RGB" | "RBG" | "constant"


@dataclass(frozen=True)
class NoteResult:
    name: str
    target_hz: float
    measured_offset_hz: float
    cents: float
    verdict: str  # "sharp" | "flat" | "in-tune" | "unmeasurable"

    def to_text(self) -> str:
        return (f"note={self.name} target_hz={self.target_hz:.4f} "
                f"offset_hz={self.measured_offset_hz:+.4f} "
                f"cents={self.cents:+.2f} verdict={self.verdict}")


@dataclass
class TuningReport:
    a4: float
    notes: list = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"a4={self.a4:.4f}"]
        lines.extend(n.to_text() for n in self.notes)
        return "\n".join(lines)


def _wrap(x: np.ndarray) -> np.ndarray:
    """Wrap to (-pi, pi]."""
    w = np.mod(x, 2.0 * np.pi)
    return np.where(w > np.pi, w - 2.0 * np.pi, w)


def _phase_drift(values: np.ndarray, expected_step: float, dt: float) -> float:
    """Offset in Hz from the unwrapped phase drift of successive projections."""
    phases = np.angle(values)
    steps = _wrap(np.diff(phases) - expected_step)
    duration = (len(values) - 1) * dt
    return float(steps.sum() / (2.0 * np.pi * duration))


def estimate_offset(spectrogram: ComplexSpectrogram, bin_k: int) -> BeatMeasurement:
    """Measure how far the energy in bin_k sits from the bin's center frequency.

    Requires the bin magnitude to clear the 1e-3 noise floor in at least 90%
    of columns and at least 0.25 s of slices.
    """
    spec = spectrogram.frame_spec
    if not 0 <= bin_k < spectrogram.n_bins:
        raise ValueError(f"bin {bin_k} out of range")
    track = spectrogram.columns[:, bin_k]
    if len(track) < 2:
        raise ValueError("window too short")
    duration = (len(track) - 1) * spec.hop / spectrogram.sample_rate
    if duration < MIN_MEASURE_SECONDS:
        raise ValueError("window too short")
    if np.mean(np.abs(track) >= MAGNITUDE_FLOOR) < 0.9:
        raise ValueError("bin not excited")

    expected = 2.0 * np.pi * bin_k * spec.hop / spec.fft_size
    offset = _phase_drift(track, expected, spec.hop / spectrogram.sample_rate)
    if abs(offset) < CONSTANT_HUE_HZ:
        direction = "constant"
    elif offset > 0:
        direction = "RGB"
    else:
        direction = "RBG"
    return BeatMeasurement(bin=bin_k, offset_hz=offset,
                           cycles_per_second=abs(offset), direction=direction)


def _full_frames(samples: np.ndarray, spec: FrameSpec) -> np.ndarray:
    """Complete frames only (no zero padding), for clean phase tracking."""
    n, h = spec.fft_size, spec.hop
    count = (len(samples) - n) // h + 1 if len(samples) >= n else 0
    if count <= 0:
        return np.empty((0, n))
    return np.stack([samples[k * h : k * h + n] for k in range(count)])


def measure_note_offset(samples: np.ndarray, sample_rate: int, target_hz: float,
                        spec: "FrameSpec | None" = None) -> float:
    """Offset in Hz of the tone in `samples` from target_hz, via the
    phase-drift of single-frequency projections at the target."""
    spec = spec or FrameSpec()
    frames = _full_frames(samples, spec)
    if len(frames) < 2 or (len(frames) - 1) * spec.hop / sample_rate < MIN_MEASURE_SECONDS:
        raise ValueError("window too short")
    proj = project_frequency_many(frames, target_hz, sample_rate)
    if np.median(np.abs(proj)) < MAGNITUDE_FLOOR:
        raise ValueError("bin not excited")
    expected = 2.0 * np.pi * target_hz * spec.hop / sample_rate
    expected = math.remainder(expected, 2.0 * math.pi)
    return _phase_drift(proj, expected, spec.hop / sample_rate)


def _dominant_frequency(samples: np.ndarray, sample_rate: int) -> float:
    """Coarse spectral peak (parabolic refine) used to auto-name notes."""
    mags = np.abs(np.fft.rfft(samples))
    mags[0] = 0.0
    k = int(np.argmax(mags))
    if 1 <= k < len(mags) - 1 and mags[k] > 0:
        lo, mid, hi = mags[k - 1], mags[k], mags[k + 1]
        denom = lo - 2.0 * mid + hi
        if denom != 0:
            k += 0.5 * (lo - hi) / denom
    return k * sample_rate / len(samples)


def tuning_report(audio: AudioBuffer, standard_a4: float = 440.0,
                  note_list: "list[str] | None" = None,
                  segments: "int | None" = None,
                  onsets_seconds: "list[float] | None" = None,
                  frame_spec: "FrameSpec | None" = None,
                  in_tune_cents: float = IN_TUNE_CENTS) -> TuningReport:
    """Per-note tuning offsets for a recording of isolated notes.

    The recording is split into equal segments by default (one per note), or
    at the supplied onset times. Each segment is projected at its note's
    target frequency and the phase-drift law converts the projections into a
    signed offset and cents.
    """
    fs = audio.sample_rate
    spec = frame_spec or FrameSpec()
    if onsets_seconds:
        bounds = [0] + [round(t * fs) for t in onsets_seconds] + [len(audio)]
        bounds = sorted(set(b for b in bounds if 0 <= b <= len(audio)))
    else:
        count = len(note_list) if note_list else segments
        if not count or count < 1:
            raise ValueError("need a note list, segment count, or onset times")
        edges = np.linspace(0, len(audio), count + 1).round().astype(int)
        bounds = list(edges)
    if note_list is not None and len(note_list) != len(bounds) - 1:
        raise ValueError("note list length must match segment count")

    report = TuningReport(a4=standard_a4)
    for i in range(len(bounds) - 1):
        seg = audio.samples[bounds[i] : bounds[i + 1]]
        if note_list is not None:
            name = note_list[i]
            target = note_to_frequency(name, standard_a4)
        else:
            try:
                name, _ = frequency_to_note(_dominant_frequency(seg, fs), standard_a4)
                target = note_to_frequency(name, standard_a4)
            except ValueError:
                report.notes.append(NoteResult("-", 0.0, 0.0, 0.0, "unmeasurable"))
                continue
        try:
            offset = measure_note_offset(seg, fs, target, spec)
        except ValueError:
            report.notes.append(NoteResult(name, target, 0.0, 0.0, "unmeasurable"))
            continue
        cents = cents_between(target, target + offset)
        if abs(cents) <= in_tune_cents:
            verdict = "in-tune"
        elif cents > 0:
            verdict = "sharp"
        else:
            verdict = "flat"
        report.notes.append(NoteResult(name, target, offset, cents, verdict))
    return report


# ---------------------------------------------------------------------------
# Beat schematic
# ---------------------------------------------------------------------------

def render_beat_schematic(slices: int = 128, coeff_spans: int = 4,
                          lines_per_coeff: int = 25,
                          seed: int = DEFAULT_SCHEMATIC_SEED,
                          bin_spacing_hz: float = 44100 / 2048) -> ColorImage:
    """Composite beat schematic over a nominal one-second interval.

    The vertical axis spans `coeff_spans` center-to-center coefficient
    intervals of `lines_per_coeff` single-pixel lines each, every line
    carrying a random initial phase. The top 5/8 of the plot shows hue
    phase-beats against the nearest coefficient center; the bottom 3/8 shows
    the equivalent monochrome amplitude beats. A dashed line marks the
    central coefficient center, with solid boundary lines 1/8 of the image
    height above and below it.
    """
    height = coeff_spans * lines_per_coeff
    rng = np.random.default_rng(seed)
    phase0 = rng.uniform(0.0, 2.0 * np.pi, height)
    t = np.linspace(0.0, 1.0, slices)

    center_row = height // 2
    spans = (center_row - np.arange(height)) / lines_per_coeff
    delta_hz = (spans - np.round(spans)) * bin_spacing_hz

    color_rows = (5 * height) // 8
    pixels = np.zeros((height, slices, 3), dtype=np.uint8)

    phases = 2.0 * np.pi * delta_hz[:color_rows, None] * t[None, :] \
        + phase0[:color_rows, None]
    pixels[:color_rows] = complex_to_rgb(np.exp(1j * phases))

    beat = np.abs(np.cos(np.pi * delta_hz[color_rows:, None] * t[None, :]
                         + phase0[color_rows:, None]))
    pixels[color_rows:] = np.round(255.0 * beat)[..., None]

    dash = (np.arange(slices) // 8) % 2 == 0
    pixels[center_row, dash] = 0
    for boundary in (round(center_row - height / 8), round(center_row + height / 8)):
        pixels[boundary] = 0

    meta = {
        "container": "cspec-schematic",
        "seed": str(seed),
        "slices": str(slices),
        "coeff_spans": str(coeff_spans),
        "lines_per_coeff": str(lines_per_coeff),
        "bin_spacing_hz": repr(float(bin_spacing_hz)),
    }
    return ColorImage(pixels, meta)
