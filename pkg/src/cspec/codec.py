"""Encode audio to complex-color images and decode them back to audio.

Two carriers with different fidelity tiers:

* CSPEC, a little-endian binary container of float32 coefficient columns.
  This is the lossless path: decode(encode(x)) returns x to within 1e-6 of
  full scale, phases included.
* PNG, the human-facing view. 8-bit RGB cannot carry float coefficients, so
  decoding a linear-axis PNG is a lossy demonstration; log-warped PNGs are
  display-only and refuse to decode.

CSPEC layout (all little-endian):

    magic "CSPC" | version u16 | sample_rate u32 | fft_size u32 | hop u32
    | window u8 | original_length u64 | a_ref f32 | frame_count u32
    | payload: frame_count * (fft_size/2 + 1) coefficients as f32 (re, im)
      pairs, bins ascending within each frame, frames in time order
"""

import struct
from dataclasses import dataclass, field

import numpy as np

from .audio import AudioBuffer
from .colormap import complex_to_rgb, rgb_to_complex
from .dsp import (ComplexSpectrogram, FrameSpec, WINDOW_IDS, frame_signal,
                  forward_transform_many, inverse_transform, window_name)
from .logwarp import LogAxisSpec, warp_column
from .pngio import read_png, write_png

MAGIC = b"CSPC"
VERSION = 1
METADATA_KEY = "cspec:params"
_HEADER = struct.Struct("<4sHIIIBQfI")


@dataclass
class CspecFile:
    """In-memory form of the lossless CSPEC container."""

    sample_rate: int
    fft_size: int
    hop: int
    window_id: int
    original_length: int
    a_ref: float
    columns: np.ndarray  # (frame_count, fft_size//2 + 1) complex64
    version: int = VERSION

    def __post_init__(self):
        self.columns = np.asarray(self.columns, dtype=np.complex64)
        n_bins = self.fft_size // 2 + 1
        if self.columns.ndim != 2 or self.columns.shape[1] != n_bins:
            raise ValueError("malformed file")

    @property
    def frame_count(self) -> int:
        return self.columns.shape[0]

    @property
    def frame_spec(self) -> FrameSpec:
        return FrameSpec(self.fft_size, self.hop, window_name(self.window_id))


@dataclass
class ColorImage:
    """RGB raster plus the provenance metadata needed to interpret it."""

    pixels: np.ndarray  # (height, width, 3) uint8
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError("pixels must be (height, width, 3)")
        self.pixels = self.pixels.astype(np.uint8)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def unknown_provenance(self) -> bool:
        return not self.metadata


def serialize_params(params: dict) -> str:
    """Canonical key=value text: sorted keys, newline separated."""
    return "\n".join(f"{k}={params[k]}" for k in sorted(params))


def parse_params(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if line:
            key, _, value = line.partition("=")
            out[key] = value
    return out


# ---------------------------------------------------------------------------
# Encode / decode
# ---------------------------------------------------------------------------

def encode(audio: AudioBuffer, spec: FrameSpec,
           a_ref: float = 1.0) -> tuple[ComplexSpectrogram, CspecFile]:
    """Transform audio into coefficient columns and their lossless container."""
    frames = frame_signal(audio, spec)
    win = spec.window_values()
    if win is not None:
        frames = frames * win
    columns = forward_transform_many(frames, a_ref)
    spectrogram = ComplexSpectrogram(columns, spec, audio.sample_rate, a_ref)
    cfile = CspecFile(
        sample_rate=audio.sample_rate, fft_size=spec.fft_size, hop=spec.hop,
        window_id=WINDOW_IDS[spec.window], original_length=len(audio),
        a_ref=float(np.float32(a_ref)), columns=columns.astype(np.complex64),
    )
    return spectrogram, cfile


def decode(cfile: CspecFile) -> AudioBuffer:
    """Invert a CSPEC container back to the original waveform."""
    if cfile.hop != cfile.fft_size:
        raise ValueError("non-invertible framing")
    if window_name(cfile.window_id) != "rectangular":
        raise ValueError("non-invertible framing")
    n = cfile.fft_size
    out = np.empty(cfile.frame_count * n, dtype=np.float64)
    cols = cfile.columns.astype(np.complex128)
    for i in range(cfile.frame_count):
        out[i * n : (i + 1) * n] = inverse_transform(cols[i], cfile.a_ref)
    return AudioBuffer(out[: cfile.original_length], cfile.sample_rate)


# ---------------------------------------------------------------------------
# CSPEC serialization
# ---------------------------------------------------------------------------

def write_cspec(cfile: CspecFile, path) -> None:
    header = _HEADER.pack(MAGIC, cfile.version, cfile.sample_rate,
                          cfile.fft_size, cfile.hop, cfile.window_id,
                          cfile.original_length, cfile.a_ref,
                          cfile.frame_count)
    flat = np.empty(cfile.columns.size * 2, dtype="<f4")
    flat[0::2] = cfile.columns.real.ravel()
    flat[1::2] = cfile.columns.imag.ravel()
    with open(path, "wb") as f:
        f.write(header)
        f.write(flat.tobytes())


def read_cspec(path) -> CspecFile:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < _HEADER.size or data[:4] != MAGIC:
        raise ValueError("malformed file")
    (_, version, sample_rate, fft_size, hop, window_id,
     original_length, a_ref, frame_count) = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise ValueError(f"unsupported CSPEC version {version}")
    n_bins = fft_size // 2 + 1
    expected = frame_count * n_bins * 8
    payload = data[_HEADER.size:]
    if len(payload) != expected:
        raise ValueError("malformed file")
    flat = np.frombuffer(payload, dtype="<f4")
    columns = (flat[0::2] + 1j * flat[1::2]).astype(np.complex64)
    return CspecFile(sample_rate=sample_rate, fft_size=fft_size, hop=hop,
                     window_id=window_id, original_length=original_length,
                     a_ref=a_ref, columns=columns.reshape(frame_count, n_bins),
                     version=version)


# ---------------------------------------------------------------------------
# Images
# ---------------------------------------------------------------------------

def render_image(spectrogram: ComplexSpectrogram, original_length: int,
                 axis: "LogAxisSpec | None" = None,
                 mode: str = "rectangular") -> ColorImage:
    """Rasterize columns to RGB; linear axis by default, log when given.

    Row 0 of the pixel raster is the top of the image (highest frequency);
    time runs left to right.
    """
    spec = spectrogram.frame_spec
    meta = {
        "container": "cspec-image",
        "version": str(VERSION),
        "sample_rate": str(spectrogram.sample_rate),
        "fft_size": str(spec.fft_size),
        "hop": str(spec.hop),
        "window": spec.window,
        "a_ref": repr(float(spectrogram.a_ref)),
        "original_length": str(original_length),
        "frame_count": str(spectrogram.n_frames),
    }
    if axis is None:
        meta["axis"] = "linear"
        rgb = complex_to_rgb(spectrogram.columns)  # (frames, bins, 3)
    else:
        meta.update(axis="log", mode=mode, fmin=repr(axis.f_min),
                    fmax=repr(axis.f_max), rows=str(axis.rows))
        warped = warp_column(spectrogram.columns, axis, mode)
        rgb = complex_to_rgb(warped)  # (frames, rows, 3)
    # columns come low-frequency-first; flip so low frequencies sit at bottom
    pixels = rgb.transpose(1, 0, 2)[::-1]
    return ColorImage(pixels, meta)


def export_png(image: ColorImage, path) -> None:
    """Write the raster with its metadata under the "cspec:params" text key."""
    texts = {}
    if image.metadata:
        texts[METADATA_KEY] = serialize_params(image.metadata)
    write_png(path, image.pixels, texts)


def import_png(path) -> ColorImage:
    """Read a PNG; metadata is restored when the cspec:params chunk exists."""
    pixels, texts = read_png(path)
    meta = parse_params(texts[METADATA_KEY]) if METADATA_KEY in texts else {}
    return ColorImage(pixels, meta)


def decode_image(image: ColorImage) -> AudioBuffer:
    """Reconstruct audio from a quantized linear-axis image (lossy path)."""
    if image.unknown_provenance:
        raise ValueError("unknown provenance")
    meta = image.metadata
    if meta.get("axis") != "linear":
        raise ValueError("only linear-axis images can be decoded")
    spec = FrameSpec(int(meta["fft_size"]), int(meta["hop"]), meta["window"])
    if spec.hop != spec.fft_size or spec.window != "rectangular":
        raise ValueError("non-invertible framing")
    a_ref = float(meta["a_ref"])
    sample_rate = int(meta["sample_rate"])
    original_length = int(meta["original_length"])

    columns = rgb_to_complex(image.pixels[::-1].transpose(1, 0, 2))
    # quantization leaves stray imaginary dust on the DC/Nyquist hue
    columns[:, 0] = columns[:, 0].real
    columns[:, -1] = columns[:, -1].real
    n = spec.fft_size
    out = np.empty(columns.shape[0] * n, dtype=np.float64)
    for i in range(columns.shape[0]):
        out[i * n : (i + 1) * n] = inverse_transform(columns[i], a_ref)
    return AudioBuffer(out[:original_length], sample_rate)


def quantization_snr_estimate(image: ColorImage) -> float:
    """Estimated reconstruction SNR (dB) of the 8-bit image path.

    Models each pixel's quantization noise from the local color step size:
    one brightness/saturation LSB maps to an amplitude interval and one hue
    LSB to a phase interval; both contribute variance of (step^2)/12.
    """
    coeffs = rgb_to_complex(image.pixels[::-1].transpose(1, 0, 2))
    a = np.abs(coeffs)
    signal = float(np.sum(a * a))
    if signal == 0.0:
        return float("inf")
    step = 1.0 / 255.0
    # d(A)/d(brightness) = A / b^2 on the dim branch, A / ... symmetric above
    with np.errstate(divide="ignore", invalid="ignore"):
        b = np.where(a > 0, 1.0 / (1.0 - np.log(np.where(a > 0, a, 1.0))), 1.0)
        damp = np.where(a <= 1.0, a / (b * b),
                        a * (1.0 + np.log(np.where(a > 0, a, 1.0))) ** 2)
    amp_noise = (damp * step) ** 2 / 12.0
    hue_step = step / 6.0  # one RGB LSB moves hue by at most 1/(6*255)
    phase_noise = (a * 2.0 * np.pi * hue_step) ** 2 / 12.0
    noise = float(np.sum(np.where(a > 0, amp_noise + phase_noise, 0.0)))
    if noise == 0.0:
        return float("inf")
    return 10.0 * np.log10(signal / noise)
