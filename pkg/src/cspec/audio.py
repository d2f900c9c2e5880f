"""Mono audio buffers and RIFF/WAVE file I/O.

Reads 16-bit integer and 32-bit float PCM (little-endian); writes 32-bit
float. Multichannel input is mixed down to mono with a warning.
"""

import struct
import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class AudioBuffer:
    samples: np.ndarray
    sample_rate: int
    # full-scale convention: amplitude 1.0 is the nominal maximum

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        self.sample_rate = int(self.sample_rate)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


_WAVE_PCM = 1
_WAVE_FLOAT = 3


def read_wav(path) -> AudioBuffer:
    """Read a RIFF/WAVE file (PCM16 or float32) into a mono AudioBuffer."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise ValueError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        body = data[pos + 8 : pos + 8 + size]
        if cid == b"fmt ":
            fmt = body
        elif cid == b"data":
            payload = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned
    if fmt is None or payload is None:
        raise ValueError(f"{path}: missing fmt or data chunk")
    if len(fmt) < 16:
        raise ValueError(f"{path}: short fmt chunk")

    tag, channels, rate, _, _, bits = struct.unpack_from("<HHIIHH", fmt, 0)
    if channels < 1:
        raise ValueError(f"{path}: bad channel count")
    if tag == _WAVE_PCM and bits == 16:
        raw = np.frombuffer(payload, dtype="<i2").astype(np.float64) / 32768.0
    elif tag == _WAVE_FLOAT and bits == 32:
        raw = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    else:
        raise ValueError(f"{path}: unsupported WAV format (tag={tag}, bits={bits})")

    if channels > 1:
        warnings.warn(f"{path}: mixing {channels} channels down to mono")
        usable = len(raw) - len(raw) % channels
        raw = raw[:usable].reshape(-1, channels).mean(axis=1)
    return AudioBuffer(raw, rate)


def write_wav(audio: AudioBuffer, path) -> None:
    """Write an AudioBuffer as a mono 32-bit float WAV file."""
    samples = audio.samples.astype("<f4")
    body = samples.tobytes()
    fmt = struct.pack("<HHIIHH", _WAVE_FLOAT, 1, audio.sample_rate,
                      audio.sample_rate * 4, 4, 32)
    fact = struct.pack("<I", len(samples))
    riff_size = 4 + (8 + len(fmt)) + (8 + len(fact)) + (8 + len(body))
    with open(path, "wb") as f:
        f.write(struct.pack("<4sI4s", b"RIFF", riff_size, b"WAVE"))
        f.write(struct.pack("<4sI", b"fmt ", len(fmt)) + fmt)
        f.write(struct.pack("<4sI", b"fact", len(fact)) + fact)
        f.write(struct.pack("<4sI", b"data", len(body)) + body)
