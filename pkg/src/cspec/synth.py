"""Deterministic test-signal synthesis: tones, FM tones, chirps, scales."""

import numpy as np

from .audio import AudioBuffer
from .notes import note_range

DEFAULT_SAMPLE_RATE = 44100


def _check(freq: float, sample_rate: int, duration: float) -> None:
    if duration <= 0:
        raise ValueError("duration must be positive")
    if not 0.0 < freq < sample_rate / 2.0:
        raise ValueError(f"frequency {freq} at or above Nyquist {sample_rate / 2}")


def tone(freq: float, duration: float, sample_rate: int = DEFAULT_SAMPLE_RATE,
         amplitude: float = 1.0, phase: float = 0.0) -> AudioBuffer:
    """Pure sine; with phase 0 the first sample is exactly 0."""
    _check(freq, sample_rate, duration)
    t = np.arange(round(duration * sample_rate)) / sample_rate
    return AudioBuffer(amplitude * np.sin(2.0 * np.pi * freq * t + phase), sample_rate)


def fm_tone(center: float, duration: float, rate: float = 1.0, depth: float = 0.10,
            sample_rate: int = DEFAULT_SAMPLE_RATE, amplitude: float = 1.0) -> AudioBuffer:
    """Frequency-modulated sine with instantaneous frequency
    center * (1 + depth * sin(2*pi*rate*t))."""
    _check(center * (1.0 + abs(depth)), sample_rate, duration)
    if rate <= 0:
        raise ValueError("modulation rate must be positive")
    t = np.arange(round(duration * sample_rate)) / sample_rate
    # integral of the instantaneous frequency
    phase = 2.0 * np.pi * center * t + (center * depth / rate) * (
        1.0 - np.cos(2.0 * np.pi * rate * t)
    )
    return AudioBuffer(amplitude * np.sin(phase), sample_rate)


def chirp(f_start: float, f_end: float, duration: float,
          sample_rate: int = DEFAULT_SAMPLE_RATE, amplitude: float = 1.0) -> AudioBuffer:
    """Linear chirp from f_start to f_end."""
    _check(f_start, sample_rate, duration)
    _check(f_end, sample_rate, duration)
    t = np.arange(round(duration * sample_rate)) / sample_rate
    phase = 2.0 * np.pi * (f_start * t + (f_end - f_start) * t * t / (2.0 * duration))
    return AudioBuffer(amplitude * np.sin(phase), sample_rate)


def chromatic_scale(start: str = "C3", count: int = 36, duration: float = 12.0,
                    sample_rate: int = DEFAULT_SAMPLE_RATE, amplitude: float = 1.0,
                    a4: float = 440.0,
                    detune_cents: "list[float] | None" = None) -> AudioBuffer:
    """Chromatic run of equal-duration note segments.

    detune_cents, when given, shifts each note off its equal-temperament
    target by the stated amount (one entry per note).
    """
    names = note_range(start, count, a4)
    if detune_cents is not None and len(detune_cents) != count:
        raise ValueError("detune_cents must have one entry per note")
    seg = round(duration * sample_rate / count)
    pieces = []
    for i, (_, freq) in enumerate(names):
        f = freq * 2.0 ** (detune_cents[i] / 1200.0) if detune_cents else freq
        _check(f, sample_rate, duration)
        t = np.arange(seg) / sample_rate
        pieces.append(amplitude * np.sin(2.0 * np.pi * f * t))
    return AudioBuffer(np.concatenate(pieces), sample_rate)


_KINDS = {
    "tone": tone,
    "fm_tone": fm_tone,
    "chirp": chirp,
    "chromatic_scale": chromatic_scale,
}


def synthesize(kind: str, **params) -> AudioBuffer:
    """Dispatch to one of tone / fm_tone / chirp / chromatic_scale."""
    if kind not in _KINDS:
        raise ValueError(f"unknown signal kind {kind!r}")
    return _KINDS[kind](**params)
