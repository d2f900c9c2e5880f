"""Framing, scaled forward/inverse transforms, and single-frequency projection.

Scaling convention: coefficient k of a frame x of length N is

    X[k] = (2 / (N * a_ref)) * sum_n x[n] * exp(-2j*pi*k*n/N)      0 < k < N/2

with DC and Nyquist scaled by 1/(N * a_ref) instead. Under this convention a
full-scale sine centered on bin k has |X[k]| = 1, which is the breakpoint of
the color mapping.
"""

from dataclasses import dataclass

import numpy as np

from .audio import AudioBuffer

WINDOW_IDS = {"rectangular": 0, "hann": 1}
_ID_WINDOWS = {v: k for k, v in WINDOW_IDS.items()}


def window_name(window_id: int) -> str:
    if window_id not in _ID_WINDOWS:
        raise ValueError(f"unknown window id {window_id}")
    return _ID_WINDOWS[window_id]


@dataclass(frozen=True)
class FrameSpec:
    """Slicing parameters: FFT size, hop between slice starts, and window."""

    fft_size: int = 2048
    hop: int | None = None
    window: str = "rectangular"

    def __post_init__(self):
        n = self.fft_size
        if n < 32 or n & (n - 1):
            raise ValueError("fft_size must be a power of two >= 32")
        if self.hop is None:
            object.__setattr__(self, "hop", n)
        if not 1 <= self.hop <= n:
            raise ValueError("hop must satisfy 1 <= hop <= fft_size")
        if self.window not in WINDOW_IDS:
            raise ValueError(f"unknown window {self.window!r}")

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    def window_values(self) -> np.ndarray | None:
        """Window samples, or None for the rectangular (identity) window."""
        if self.window == "rectangular":
            return None
        n = self.fft_size
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)

    def bin_frequency(self, k, sample_rate: int):
        """Center frequency k * fs / N of coefficient k."""
        return np.asarray(k, dtype=np.float64) * sample_rate / self.fft_size

    def bin_spacing(self, sample_rate: int) -> float:
        return sample_rate / self.fft_size


@dataclass
class ComplexSpectrogram:
    """One complex coefficient column per time slice, plus framing metadata."""

    columns: np.ndarray  # shape (n_frames, fft_size//2 + 1), complex
    frame_spec: FrameSpec
    sample_rate: int
    a_ref: float = 1.0

    def __post_init__(self):
        self.columns = np.asarray(self.columns, dtype=np.complex128)
        if self.columns.ndim != 2 or self.columns.shape[1] != self.frame_spec.n_bins:
            raise ValueError(
                f"columns must have shape (n_frames, {self.frame_spec.n_bins})"
            )
        if self.a_ref <= 0:
            raise ValueError("a_ref must be positive")
        boundary = np.abs(self.columns[:, [0, -1]].imag)
        if boundary.size and boundary.max() > 1e-6:
            raise ValueError("DC and Nyquist coefficients must be real")

    @property
    def n_frames(self) -> int:
        return self.columns.shape[0]

    @property
    def n_bins(self) -> int:
        return self.columns.shape[1]

    def bin_frequency(self, k):
        return self.frame_spec.bin_frequency(k, self.sample_rate)


def frame_signal(audio: AudioBuffer, spec: FrameSpec) -> np.ndarray:
    """Slice audio into ceil(len/hop) frames of fft_size samples each.

    Frame k covers samples [k*hop, k*hop + fft_size); the final partial frame
    is zero-padded. Raises on empty input.
    """
    x = audio.samples
    if len(x) == 0:
        raise ValueError("empty input")
    n, h = spec.fft_size, spec.hop
    n_frames = -(-len(x) // h)  # ceil
    frames = np.zeros((n_frames, n), dtype=np.float64)
    for k in range(n_frames):
        chunk = x[k * h : k * h + n]
        frames[k, : len(chunk)] = chunk
    return frames


def forward_transform(frame: np.ndarray, a_ref: float = 1.0) -> np.ndarray:
    """Scaled one-sided DFT of a real frame; see module docstring."""
    x = np.asarray(frame, dtype=np.float64)
    if x.ndim != 1 or len(x) < 2 or len(x) % 2:
        raise ValueError(f"frame length must be even and >= 2, got {x.shape}")
    if a_ref <= 0:
        raise ValueError("a_ref must be positive")
    coeffs = np.fft.rfft(x)
    coeffs *= 2.0 / (len(x) * a_ref)
    coeffs[0] *= 0.5
    coeffs[-1] *= 0.5
    return coeffs


def forward_transform_many(frames: np.ndarray, a_ref: float = 1.0) -> np.ndarray:
    """forward_transform applied to each row of a (n_frames, N) matrix."""
    x = np.asarray(frames, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("frames must be a 2-D matrix")
    coeffs = np.fft.rfft(x, axis=1)
    coeffs *= 2.0 / (x.shape[1] * a_ref)
    coeffs[:, 0] *= 0.5
    coeffs[:, -1] *= 0.5
    return coeffs


def inverse_transform(coeffs: np.ndarray, a_ref: float = 1.0) -> np.ndarray:
    """Exact left-inverse of forward_transform (up to floating rounding).

    DC and Nyquist must be real to within 1e-6; anything larger raises
    "invalid hermitian boundary".
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1 or len(c) < 2:
        raise ValueError("coefficient vector must be 1-D with >= 2 bins")
    if a_ref <= 0:
        raise ValueError("a_ref must be positive")
    if abs(c[0].imag) > 1e-6 or abs(c[-1].imag) > 1e-6:
        raise ValueError("invalid hermitian boundary")
    n = 2 * (len(c) - 1)
    r = c * (n * a_ref / 2.0)
    r[0] = c[0].real * (n * a_ref)
    r[-1] = c[-1].real * (n * a_ref)
    return np.fft.irfft(r, n=n)


def project_frequency(frame: np.ndarray, freq: float, sample_rate: int,
                      a_ref: float = 1.0) -> complex:
    """Single-frequency DFT projection with the standard 2/(N*a_ref) scaling.

    Evaluates the same sum as forward_transform at an arbitrary frequency, so
    at a bin center k*fs/N (0 < k < N/2) it equals coefficient k exactly.
    """
    x = np.asarray(frame, dtype=np.float64)
    if not 0.0 < freq < sample_rate / 2.0:
        raise ValueError(f"frequency {freq} outside (0, {sample_rate / 2})")
    if a_ref <= 0:
        raise ValueError("a_ref must be positive")
    n = len(x)
    phase = -2j * np.pi * freq / sample_rate * np.arange(n)
    return complex(2.0 / (n * a_ref) * np.dot(x, np.exp(phase)))


def project_frequency_many(frames: np.ndarray, freq: float, sample_rate: int,
                           a_ref: float = 1.0) -> np.ndarray:
    """project_frequency applied to each row of a (n_frames, N) matrix."""
    x = np.asarray(frames, dtype=np.float64)
    if not 0.0 < freq < sample_rate / 2.0:
        raise ValueError(f"frequency {freq} outside (0, {sample_rate / 2})")
    n = x.shape[1]
    kernel = np.exp(-2j * np.pi * freq / sample_rate * np.arange(n))
    return x @ kernel * (2.0 / (n * a_ref))
