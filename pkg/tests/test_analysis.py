import numpy as np
import pytest

from cspec.analysis import (estimate_offset, render_beat_schematic,
                            tuning_report)
from cspec.codec import encode
from cspec.colormap import rgb_to_hsv_arrays
from cspec.dsp import ComplexSpectrogram, FrameSpec
from cspec.notes import note_range
from cspec.synth import chromatic_scale, tone

FS = 44100
N = 2048
SPEC = FrameSpec(N)
SPACING = FS / N


def tone_spectrogram(freq, frames=22, phase=0.0):
    # whole-frame duration keeps the trailing slice un-padded
    return encode(tone(freq, frames * N / FS, phase=phase), SPEC)[0]


class TestEstimateOffset:
    def test_centered_tone_constant_hue(self):
        sg = tone_spectrogram(12 * SPACING)
        m = estimate_offset(sg, 12)
        assert abs(m.offset_hz) <= 0.05
        assert m.direction == "constant"
        assert m.cycles_per_second == abs(m.offset_hz)

    def test_two_hz_sharp_is_rgb(self):
        sg = tone_spectrogram(12 * SPACING + 2.0)
        m = estimate_offset(sg, 12)
        assert m.offset_hz == pytest.approx(2.0, abs=0.1)
        assert m.direction == "RGB"

    def test_three_point_five_flat_is_rbg(self):
        sg = tone_spectrogram(12 * SPACING - 3.5)
        m = estimate_offset(sg, 12)
        assert m.offset_hz == pytest.approx(-3.5, abs=0.1)
        assert m.direction == "RBG"

    def test_padded_one_second_example_within_tolerance(self):
        # the spec's 1 s example: 260.398 Hz = bin-12 center + 2 Hz
        sg = encode(tone(12 * SPACING + 2.0, 1.0), SPEC)[0]
        m = estimate_offset(sg, 12)
        assert m.offset_hz == pytest.approx(2.0, abs=0.1)

    def test_beat_law_50_random_offsets(self, rng):
        for _ in range(50):
            delta = float(rng.uniform(0.5, 9.0) * rng.choice([-1.0, 1.0]))
            k = int(rng.integers(8, 400))
            sg = tone_spectrogram(k * SPACING + delta,
                                  phase=float(rng.uniform(0, 2 * np.pi)))
            m = estimate_offset(sg, k)
            assert abs(m.offset_hz - delta) <= 0.1
            assert m.direction == ("RGB" if delta > 0 else "RBG")

    def test_period_inversely_proportional_to_offset(self):
        # doubling the offset halves the color-cycle period within 5%
        sg1 = tone_spectrogram(40 * SPACING + 2.0, frames=43)
        sg2 = tone_spectrogram(40 * SPACING + 4.0, frames=43)
        p1 = 1.0 / estimate_offset(sg1, 40).cycles_per_second
        p2 = 1.0 / estimate_offset(sg2, 40).cycles_per_second
        assert p1 / p2 == pytest.approx(2.0, rel=0.05)

    def test_phase_origin_invariance(self, rng):
        k, delta = 30, 4.2
        base = estimate_offset(tone_spectrogram(k * SPACING + delta), k)
        shifted = estimate_offset(
            tone_spectrogram(k * SPACING + delta, phase=1.2345), k)
        assert shifted.offset_hz == pytest.approx(base.offset_hz, abs=1e-3)
        assert shifted.direction == base.direction
        assert shifted.bin == base.bin

    def test_unexcited_bin_rejected(self):
        sg = tone_spectrogram(12 * SPACING)
        with pytest.raises(ValueError, match="bin not excited"):
            estimate_offset(sg, 500)

    def test_short_window_rejected(self):
        sg = tone_spectrogram(12 * SPACING, frames=3)
        with pytest.raises(ValueError, match="window too short"):
            estimate_offset(sg, 12)

    def test_works_with_sub_frame_hop(self):
        sg, _ = encode(tone(12 * SPACING + 2.0, 1.0), FrameSpec(N, N // 4))
        sg = ComplexSpectrogram(sg.columns[:80], FrameSpec(N, N // 4), FS)
        m = estimate_offset(sg, 12)
        assert m.offset_hz == pytest.approx(2.0, abs=0.1)


class TestTuningReport:
    def test_a4_in_tune(self):
        audio = tone(440.0, 1.0)
        report = tuning_report(audio, note_list=["A4"])
        (row,) = report.notes
        assert row.name == "A4"
        assert row.cents == pytest.approx(0.0, abs=0.5)
        assert row.verdict == "in-tune"

    def test_a4_five_cents_sharp(self):
        audio = tone(440.0 * 2 ** (5 / 1200), 1.0)  # 441.27 Hz
        report = tuning_report(audio, note_list=["A4"])
        (row,) = report.notes
        assert row.cents == pytest.approx(5.0, abs=1.0)
        assert row.verdict == "sharp"

    def test_chromatic_scale_random_detunes(self, rng):
        count = 36
        detunes = rng.uniform(-8.0, 8.0, count).round(2)
        audio = chromatic_scale("C3", count, duration=12.0,
                                detune_cents=list(detunes))
        names = [name for name, _ in note_range("C3", count)]
        report = tuning_report(audio, note_list=names)
        assert len(report.notes) == count
        for row, truth in zip(report.notes, detunes):
            assert row.cents == pytest.approx(truth, abs=1.0)
            assert (row.cents > 0) == (truth > 0) or abs(truth) < 0.5

    def test_auto_note_naming(self):
        audio = chromatic_scale("A4", 3, duration=3.0)
        report = tuning_report(audio, segments=3)
        assert [r.name for r in report.notes] == ["A4", "A#4", "B4"]

    def test_too_short_note_unmeasurable(self):
        audio = tone(440.0, 0.2)
        report = tuning_report(audio, note_list=["A4"])
        assert report.notes[0].verdict == "unmeasurable"

    def test_onset_segmentation(self):
        fs = FS
        a = np.concatenate([tone(440.0, 0.8).samples,
                            tone(523.2511306011972, 1.2).samples])
        from cspec.audio import AudioBuffer
        report = tuning_report(AudioBuffer(a, fs), note_list=["A4", "C5"],
                               onsets_seconds=[0.8])
        assert [r.verdict for r in report.notes] == ["in-tune", "in-tune"]

    def test_report_text_canonical(self):
        audio = tone(440.0, 1.0)
        text = tuning_report(audio, note_list=["A4"]).to_text()
        lines = text.splitlines()
        assert lines[0] == "a4=440.0000"
        assert lines[1].startswith("note=A4 target_hz=440.0000 offset_hz=")
        assert lines[1].endswith("verdict=in-tune")


class TestBeatSchematic:
    def test_dimensions_and_determinism(self):
        img = render_beat_schematic()
        assert (img.width, img.height) == (128, 100)
        again = render_beat_schematic()
        assert np.array_equal(img.pixels, again.pixels)
        different = render_beat_schematic(seed=7)
        assert not np.array_equal(img.pixels, different.pixels)

    def test_golden_fixture(self):
        from pathlib import Path
        fixtures = Path(__file__).parent / "fixtures"
        img = render_beat_schematic()
        assert img.pixels.tobytes() == (fixtures / "schematic_golden.bin").read_bytes()
        from cspec.codec import serialize_params
        assert serialize_params(img.metadata) == \
            (fixtures / "schematic_golden.meta").read_text()

    def test_center_line_constant_hue(self):
        img = render_beat_schematic()
        # row 25 is a coefficient center (not overwritten by any marker)
        h, s, v = rgb_to_hsv_arrays(img.pixels[25])
        assert np.all(v == 1.0)
        assert np.ptp(h) < 1e-3

    def test_cycle_count_matches_offset(self):
        img = render_beat_schematic()
        height, lines = 100, 25
        for row in (5, 14, 40, 57):
            spans = (height // 2 - row) / lines
            delta = abs((spans - round(spans)) * SPACING)
            h, _, _ = rgb_to_hsv_arrays(img.pixels[row])
            steps = np.diff(h)
            steps = np.where(steps > 0.5, steps - 1.0,
                             np.where(steps < -0.5, steps + 1.0, steps))
            cycles = abs(steps.sum())
            assert cycles == pytest.approx(delta, abs=0.5)

    def test_monochrome_region_is_gray(self):
        img = render_beat_schematic()
        mono = img.pixels[63:]  # below the 5/8 boundary
        assert np.all(mono[..., 0] == mono[..., 1])
        assert np.all(mono[..., 1] == mono[..., 2])

    def test_dashed_center_and_boundaries(self):
        img = render_beat_schematic()
        center = img.pixels[50]
        dash = (np.arange(128) // 8) % 2 == 0
        assert np.all(center[dash] == 0)
        assert not np.all(center[~dash] == 0)
        assert np.all(img.pixels[38] == 0)
        assert np.all(img.pixels[62] == 0)
