import pytest

from cspec.notes import (cents_between, frequency_to_note, note_range,
                         note_to_frequency)


def test_reference_frequencies():
    assert note_to_frequency("A4") == 440.0
    assert note_to_frequency("A5") == 880.0
    assert note_to_frequency("A3") == 220.0
    assert note_to_frequency("C4") == pytest.approx(261.6255653005986)
    assert note_to_frequency("A0") == pytest.approx(27.5)
    assert note_to_frequency("C8") == pytest.approx(4186.009044809578)


def test_flats_and_case():
    assert note_to_frequency("Bb3") == note_to_frequency("A#3")
    assert note_to_frequency("a4") == 440.0


def test_alternate_standard():
    assert note_to_frequency("A4", a4=442.0) == 442.0


def test_bad_names():
    for bad in ("H4", "A", "", "A#"):
        with pytest.raises(ValueError):
            note_to_frequency(bad)


def test_frequency_to_note_round_trip():
    for name in ("C2", "F#3", "A4", "D#6", "B7"):
        f = note_to_frequency(name)
        got, cents = frequency_to_note(f)
        assert got == name
        assert cents == pytest.approx(0.0, abs=1e-9)


def test_cents():
    assert cents_between(440.0, 880.0) == pytest.approx(1200.0)
    assert cents_between(440.0, 440.0 * 2 ** (5 / 1200)) == pytest.approx(5.0)
    assert cents_between(440.0, 439.0) < 0


def test_note_range_walks_semitones():
    names = [n for n, _ in note_range("G#3", 5)]
    assert names == ["G#3", "A3", "A#3", "B3", "C4"]
