"""Equal-temperament note names, frequencies, and cent arithmetic."""

import math

NOTE_NAMES = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"]

_FLAT_TO_SHARP = {
    "Db": "C#", "Eb": "D#", "Gb": "F#", "Ab": "G#", "Bb": "A#",
    "Cb": "B", "Fb": "E",
}


def note_to_frequency(name: str, a4: float = 440.0) -> float:
    """Frequency in Hz of a note like ``"A4"`` or ``"C#3"`` (flats accepted)."""
    if len(name) < 2:
        raise ValueError(f"bad note name: {name!r}")
    pitch, octave_str = name[:-1], name[-1:]
    if name[-2] == "-":  # e.g. "C-1"
        pitch, octave_str = name[:-2], name[-2:]
    pitch = pitch[0].upper() + pitch[1:]
    pitch = _FLAT_TO_SHARP.get(pitch, pitch)
    if pitch not in NOTE_NAMES:
        raise ValueError(f"bad note name: {name!r}")
    octave = int(octave_str)
    semitones_from_a4 = (octave - 4) * 12 + NOTE_NAMES.index(pitch) - 9
    return a4 * 2.0 ** (semitones_from_a4 / 12.0)


def frequency_to_note(freq: float, a4: float = 440.0) -> tuple[str, float]:
    """Nearest note name and signed deviation in cents for a frequency."""
    if freq <= 0:
        raise ValueError("frequency must be positive")
    semitones = 12.0 * math.log2(freq / a4)
    nearest = round(semitones)
    cents = (semitones - nearest) * 100.0
    index = (9 + nearest) % 12
    octave = 4 + (9 + nearest) // 12
    return f"{NOTE_NAMES[index]}{octave}", cents


def cents_between(f_ref: float, f: float) -> float:
    """Signed interval from f_ref to f in cents (1200 per octave)."""
    if f_ref <= 0 or f <= 0:
        raise ValueError("frequencies must be positive")
    return 1200.0 * math.log2(f / f_ref)


def note_range(start: str, count: int, a4: float = 440.0) -> list[tuple[str, float]]:
    """Chromatic run of `count` notes upward from `start`, as (name, Hz) pairs."""
    if count < 1:
        raise ValueError("count must be >= 1")
    f0 = note_to_frequency(start, a4)
    out = []
    for i in range(count):
        f = f0 * 2.0 ** (i / 12.0)
        name, _ = frequency_to_note(f, a4)
        out.append((name, f))
    return out
