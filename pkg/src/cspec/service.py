"""Localhost streaming service and its wire protocol.

A client connects over TCP, sends one JSON handshake line terminated by \\n
(keys: fft_size, hop, axis, mode, fmin, fmax, rows, a_ref, sample_rate, a4,
tuner; all optional, server flags provide defaults), then streams raw PCM as
length-prefixed chunks:

    u32le byte_count | byte_count bytes of s16le mono PCM

A zero byte_count ends the session. The server answers with frames, each

    u32le length | type u8 | seq u32le | payload

where length counts everything after the length prefix. Frame types:

    1 column      payload = u16le row_count + row_count RGB8 triples,
                  bottom (lowest frequency) row first
    2 analysis    payload = UTF-8 key=value tuner line for the last second
    3 config-ack  payload = UTF-8 canonical key=value of accepted parameters
    4 error       payload = UTF-8 message; connection closes afterwards

One column is emitted per accumulated hop of samples; an analysis frame is
emitted after every full second of ingested PCM. seq increases by one with
every frame sent on a session. Offline equivalence: the column bytes equal
the bottom-to-top pixel columns of `cspec encode` for the same PCM and
parameters.
"""

import json
import socket
import struct
import threading
from dataclasses import dataclass, asdict

import numpy as np

from .analysis import IN_TUNE_CENTS, MAGNITUDE_FLOOR, _phase_drift
from .codec import serialize_params
from .colormap import complex_to_rgb
from .dsp import FrameSpec, forward_transform
from .logwarp import build_log_axis, warp_column
from .notes import cents_between, frequency_to_note, note_to_frequency

FRAME_COLUMN = 1
FRAME_ANALYSIS = 2
FRAME_CONFIG_ACK = 3
FRAME_ERROR = 4

_HEAD = struct.Struct("<BI")  # type, seq


@dataclass
class SessionConfig:
    sample_rate: int = 44100
    fft_size: int = 2048
    hop: int = 0            # 0 = same as fft_size
    axis: str = "linear"    # "linear" | "log"
    mode: str = "rectangular"
    fmin: float = 27.5
    fmax: float = 4186.0
    rows: int = 512
    a_ref: float = 1.0
    a4: float = 440.0
    tuner: str = "auto"     # "auto" or a note name

    def normalized(self) -> "SessionConfig":
        cfg = SessionConfig(**asdict(self))
        if cfg.hop == 0:
            cfg.hop = cfg.fft_size
        FrameSpec(cfg.fft_size, cfg.hop)  # validates size/hop
        if cfg.axis not in ("linear", "log"):
            raise ValueError(f"unknown axis {cfg.axis!r}")
        if cfg.mode not in ("rectangular", "polar"):
            raise ValueError(f"unknown mode {cfg.mode!r}")
        if cfg.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if cfg.tuner != "auto":
            note_to_frequency(cfg.tuner, cfg.a4)  # rejects bad note names
        return cfg


def pack_frame(frame_type: int, seq: int, payload: bytes) -> bytes:
    body = _HEAD.pack(frame_type, seq) + payload
    return struct.pack("<I", len(body)) + body


def pack_column_payload(rgb_column: np.ndarray) -> bytes:
    col = np.ascontiguousarray(rgb_column, dtype=np.uint8)
    return struct.pack("<H", col.shape[0]) + col.tobytes()


def parse_column_payload(payload: bytes) -> np.ndarray:
    (rows,) = struct.unpack_from("<H", payload, 0)
    if len(payload) != 2 + rows * 3:
        raise ValueError("bad column payload length")
    return np.frombuffer(payload, dtype=np.uint8, offset=2).reshape(rows, 3)


class FrameReader:
    """Incremental decoder of the length-prefixed frame stream."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list:
        """Consume bytes; return complete (type, seq, payload) tuples."""
        self._buf.extend(data)
        frames = []
        while True:
            if len(self._buf) < 4:
                return frames
            (length,) = struct.unpack_from("<I", self._buf, 0)
            if len(self._buf) < 4 + length:
                return frames
            body = bytes(self._buf[4 : 4 + length])
            del self._buf[: 4 + length]
            ftype, seq = _HEAD.unpack_from(body, 0)
            frames.append((ftype, seq, body[_HEAD.size :]))


def _recv_exact(conn: socket.socket, count: int) -> "bytes | None":
    chunks = []
    remaining = count
    while remaining:
        block = conn.recv(remaining)
        if not block:
            return None
        chunks.append(block)
        remaining -= len(block)
    return b"".join(chunks)


def _read_handshake_line(conn: socket.socket, limit: int = 65536) -> bytes:
    line = bytearray()
    while len(line) < limit:
        byte = conn.recv(1)
        if not byte:
            break
        if byte == b"\n":
            return bytes(line)
        line.extend(byte)
    raise ValueError("handshake line missing newline")


def tuner_line(columns: np.ndarray, config: SessionConfig) -> str:
    """Canonical key=value tuner readout for a window of complex columns."""
    spec = FrameSpec(config.fft_size, config.hop)
    unmeasurable = ("note=- target_hz=0.0000 measured_hz=0.0000 "
                    "offset_hz=+0.0000 cents=+0.00 verdict=unmeasurable")
    if columns.shape[0] < 2:
        return unmeasurable
    mean_mag = np.abs(columns).mean(axis=0)
    mean_mag[0] = mean_mag[-1] = 0.0  # DC and Nyquist carry no pitch
    k = int(np.argmax(mean_mag))
    if mean_mag[k] < MAGNITUDE_FLOOR:
        return unmeasurable

    expected = 2.0 * np.pi * k * config.hop / config.fft_size
    offset = _phase_drift(columns[:, k], expected, config.hop / config.sample_rate)
    measured = k * config.sample_rate / config.fft_size + offset
    if measured <= 0:
        return unmeasurable
    if config.tuner != "auto":
        name = config.tuner
        target = note_to_frequency(name, config.a4)
    else:
        name, _ = frequency_to_note(measured, config.a4)
        target = note_to_frequency(name, config.a4)
    cents = cents_between(target, measured)
    if abs(cents) <= IN_TUNE_CENTS:
        verdict = "in-tune"
    elif cents > 0:
        verdict = "sharp"
    else:
        verdict = "flat"
    return (f"note={name} target_hz={target:.4f} measured_hz={measured:.4f} "
            f"offset_hz={measured - target:+.4f} cents={cents:+.2f} "
            f"verdict={verdict}")


class _Session:
    """Per-connection pipeline: PCM in, column/analysis frames out."""

    def __init__(self, conn: socket.socket, config: SessionConfig):
        self.conn = conn
        self.config = config
        self.seq = 0
        spec = FrameSpec(config.fft_size, config.hop)
        self.spec = spec
        self.axis = None
        if config.axis == "log":
            self.axis = build_log_axis(config.fmin, config.fmax, config.rows,
                                       spec, config.sample_rate)
        self.pending = np.empty(0, dtype=np.float64)
        self.ingested = 0
        self.next_analysis_at = config.sample_rate
        window = max(2, config.sample_rate // spec.hop + 1)
        self.recent: list = []
        self.recent_cap = window

    def send(self, frame_type: int, payload: bytes) -> None:
        self.conn.sendall(pack_frame(frame_type, self.seq, payload))
        self.seq += 1

    def ingest(self, pcm: bytes) -> None:
        samples = np.frombuffer(pcm, dtype="<i2").astype(np.float64) / 32768.0
        self.pending = np.concatenate([self.pending, samples])
        self.ingested += len(samples)
        n, h = self.spec.fft_size, self.spec.hop
        while len(self.pending) >= n:
            frame = self.pending[:n]
            coeffs = forward_transform(frame, self.config.a_ref)
            self.recent.append(coeffs)
            if len(self.recent) > self.recent_cap:
                self.recent.pop(0)
            column = coeffs if self.axis is None else warp_column(
                coeffs, self.axis, self.config.mode)
            self.send(FRAME_COLUMN, pack_column_payload(complex_to_rgb(column)))
            self.pending = self.pending[h:]
        while self.ingested >= self.next_analysis_at:
            self.emit_analysis()
            self.next_analysis_at += self.config.sample_rate

    def emit_analysis(self) -> None:
        columns = np.asarray(self.recent) if self.recent else np.empty(
            (0, self.spec.n_bins), dtype=np.complex128)
        self.send(FRAME_ANALYSIS, tuner_line(columns, self.config).encode())


class StreamServer:
    """One-session-per-connection TCP server driving the encode pipeline."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0,
                 defaults: "SessionConfig | None" = None):
        self.defaults = defaults or SessionConfig()
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(8)
        self.host, self.port = self._sock.getsockname()[:2]
        self._stop = threading.Event()
        self._thread: "threading.Thread | None" = None

    def serve_forever(self) -> None:
        self._sock.settimeout(0.25)
        while not self._stop.is_set():
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            threading.Thread(target=self._handle, args=(conn,), daemon=True).start()
        self._sock.close()

    def start(self) -> None:
        """Run the accept loop on a background thread (for tests/embedding)."""
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)

    def _handle(self, conn: socket.socket) -> None:
        with conn:
            try:
                line = _read_handshake_line(conn)
                request = json.loads(line.decode("utf-8")) if line.strip() else {}
                if not isinstance(request, dict):
                    raise ValueError("handshake must be a JSON object")
                merged = asdict(self.defaults)
                unknown = set(request) - set(merged)
                if unknown:
                    raise ValueError(f"unknown handshake keys: {sorted(unknown)}")
                merged.update(request)
                config = SessionConfig(**merged).normalized()
                session = _Session(conn, config)  # may reject axis parameters
            except (TypeError, ValueError, json.JSONDecodeError) as exc:
                conn.sendall(pack_frame(FRAME_ERROR, 0, str(exc).encode()))
                return
            ack = serialize_params({k: str(v) for k, v in asdict(config).items()})
            try:
                session.send(FRAME_CONFIG_ACK, ack.encode())
                while True:
                    head = _recv_exact(conn, 4)
                    if head is None:
                        break
                    (count,) = struct.unpack("<I", head)
                    if count == 0:
                        break
                    if count % 2:
                        session.send(FRAME_ERROR, b"odd PCM chunk length")
                        break
                    pcm = _recv_exact(conn, count)
                    if pcm is None:
                        break
                    session.ingest(pcm)
            except (ConnectionError, BrokenPipeError, OSError):
                pass
            except Exception as exc:  # report, never hang the client
                try:
                    session.send(FRAME_ERROR, str(exc).encode())
                except OSError:
                    pass
