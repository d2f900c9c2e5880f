"""Minimal dependency-free PNG writer/reader for 8-bit RGB with tEXt chunks.

Writing always emits filter type 0 and a fixed zlib level so identical pixels
and metadata produce byte-identical files. Reading accepts any of the five
standard filter types but only 8-bit RGB, non-interlaced images.
"""

import struct
import zlib

import numpy as np

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6


def _chunk(tag: bytes, body: bytes) -> bytes:
    return (struct.pack(">I", len(body)) + tag + body
            + struct.pack(">I", zlib.crc32(tag + body) & 0xFFFFFFFF))


def write_png(path, pixels: np.ndarray, texts: "dict[str, str] | None" = None) -> None:
    """Write (height, width, 3) uint8 pixels, with optional tEXt entries."""
    px = np.asarray(pixels)
    if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
        raise ValueError("pixels must be (height, width, 3) uint8")
    h, w, _ = px.shape
    raw = b"".join(b"\x00" + px[y].tobytes() for y in range(h))
    out = [_SIGNATURE,
           _chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0))]
    for key in sorted(texts or {}):
        kb = key.encode("latin-1")
        if not 1 <= len(kb) <= 79:
            raise ValueError(f"bad tEXt keyword {key!r}")
        out.append(_chunk(b"tEXt", kb + b"\x00" + texts[key].encode("latin-1")))
    out.append(_chunk(b"IDAT", zlib.compress(raw, _ZLIB_LEVEL)))
    out.append(_chunk(b"IEND", b""))
    with open(path, "wb") as f:
        f.write(b"".join(out))


def read_png(path):
    """Read an 8-bit RGB PNG; returns (pixels, texts) with texts a dict."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < len(_SIGNATURE) or data[: len(_SIGNATURE)] != _SIGNATURE:
        raise ValueError(f"{path}: not a PNG file")

    pos = len(_SIGNATURE)
    header = None
    idat = []
    texts: dict[str, str] = {}
    while pos + 8 <= len(data):
        length, tag = struct.unpack_from(">I4s", data, pos)
        if pos + 12 + length > len(data):
            raise ValueError(f"{path}: truncated chunk")
        body = data[pos + 8 : pos + 8 + length]
        crc = struct.unpack_from(">I", data, pos + 8 + length)[0]
        if crc != zlib.crc32(tag + body) & 0xFFFFFFFF:
            raise ValueError(f"{path}: chunk CRC mismatch")
        if tag == b"IHDR":
            header = struct.unpack(">IIBBBBB", body)
        elif tag == b"IDAT":
            idat.append(body)
        elif tag == b"tEXt":
            key, _, text = body.partition(b"\x00")
            texts[key.decode("latin-1")] = text.decode("latin-1")
        elif tag == b"IEND":
            break
        pos += 12 + length
    if header is None or not idat:
        raise ValueError(f"{path}: missing IHDR or IDAT")

    w, h, depth, color, _, _, interlace = header
    if depth != 8 or color != 2 or interlace != 0:
        raise ValueError(f"{path}: only 8-bit RGB non-interlaced supported")
    try:
        raw = zlib.decompress(b"".join(idat))
    except zlib.error as exc:
        raise ValueError(f"{path}: corrupt IDAT stream: {exc}") from exc
    stride = w * 3
    if len(raw) != h * (stride + 1):
        raise ValueError(f"{path}: bad IDAT payload size")

    px = np.zeros((h, stride), dtype=np.uint8)
    prior = np.zeros(stride, dtype=np.int64)
    for y in range(h):
        ftype = raw[y * (stride + 1)]
        line = np.frombuffer(raw, dtype=np.uint8,
                             count=stride, offset=y * (stride + 1) + 1).astype(np.int64)
        px[y] = _unfilter(ftype, line, prior)
        prior = px[y].astype(np.int64)
    return px.reshape(h, w, 3), texts


def _unfilter(ftype: int, line: np.ndarray, prior: np.ndarray) -> np.ndarray:
    bpp = 3
    if ftype == 0:
        return (line % 256).astype(np.uint8)
    if ftype == 2:  # Up
        return ((line + prior) % 256).astype(np.uint8)
    out = np.zeros(len(line), dtype=np.int64)
    for i in range(len(line)):
        left = out[i - bpp] if i >= bpp else 0
        up = prior[i]
        ul = prior[i - bpp] if i >= bpp else 0
        if ftype == 1:  # Sub
            out[i] = (line[i] + left) % 256
        elif ftype == 3:  # Average
            out[i] = (line[i] + (left + up) // 2) % 256
        elif ftype == 4:  # Paeth
            p = left + up - ul
            pa, pb, pc = abs(p - left), abs(p - up), abs(p - ul)
            if pa <= pb and pa <= pc:
                pred = left
            elif pb <= pc:
                pred = up
            else:
                pred = ul
            out[i] = (line[i] + pred) % 256
        else:
            raise ValueError(f"unknown PNG filter type {ftype}")
    return (out % 256).astype(np.uint8)
