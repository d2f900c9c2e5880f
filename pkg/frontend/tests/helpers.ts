/** Test-only helpers: WAV writing and PNG reading for loopback fixtures. */

import { inflateSync } from "node:zlib";

/** Minimal mono PCM16 WAV container around raw s16le bytes. */
export function wavFromPcm16(pcm: Uint8Array, sampleRate: number): Uint8Array {
  const header = new ArrayBuffer(44);
  const v = new DataView(header);
  const ascii = (off: number, s: string) => {
    for (let i = 0; i < s.length; i++) v.setUint8(off + i, s.charCodeAt(i));
  };
  ascii(0, "RIFF");
  v.setUint32(4, 36 + pcm.byteLength, true);
  ascii(8, "WAVE");
  ascii(12, "fmt ");
  v.setUint32(16, 16, true);
  v.setUint16(20, 1, true);      // PCM
  v.setUint16(22, 1, true);      // mono
  v.setUint32(24, sampleRate, true);
  v.setUint32(28, sampleRate * 2, true);
  v.setUint16(32, 2, true);
  v.setUint16(34, 16, true);
  ascii(36, "data");
  v.setUint32(40, pcm.byteLength, true);
  const out = new Uint8Array(44 + pcm.byteLength);
  out.set(new Uint8Array(header), 0);
  out.set(pcm, 44);
  return out;
}

/**
 * Read an 8-bit RGB PNG produced by the cspec exporter (filter type 0 on
 * every row, one IDAT, non-interlaced). Returns pixels top row first.
 */
export function readCspecPng(data: Uint8Array): {
  width: number; height: number; rgb: Uint8Array; texts: Map<string, string>;
} {
  const sig = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];
  sig.forEach((b, i) => {
    if (data[i] !== b) throw new Error("not a PNG");
  });
  const view = new DataView(data.buffer, data.byteOffset);
  let pos = 8;
  let width = 0;
  let height = 0;
  const idat: Uint8Array[] = [];
  const texts = new Map<string, string>();
  while (pos + 8 <= data.byteLength) {
    const lengthBe = view.getUint32(pos); // chunk lengths are big-endian
    const tag = new TextDecoder("latin1").decode(data.subarray(pos + 4, pos + 8));
    const body = data.subarray(pos + 8, pos + 8 + lengthBe);
    if (tag === "IHDR") {
      width = view.getUint32(pos + 8);
      height = view.getUint32(pos + 12);
      const depth = data[pos + 16];
      const color = data[pos + 17];
      if (depth !== 8 || color !== 2) throw new Error("unsupported PNG flavor");
    } else if (tag === "IDAT") {
      idat.push(body);
    } else if (tag === "tEXt") {
      const zero = body.indexOf(0);
      texts.set(
        new TextDecoder("latin1").decode(body.subarray(0, zero)),
        new TextDecoder("latin1").decode(body.subarray(zero + 1)));
    } else if (tag === "IEND") {
      break;
    }
    pos += 12 + lengthBe;
  }
  const total = idat.reduce((n, c) => n + c.byteLength, 0);
  const joined = new Uint8Array(total);
  let off = 0;
  for (const c of idat) {
    joined.set(c, off);
    off += c.byteLength;
  }
  const raw = inflateSync(joined);
  const stride = width * 3;
  if (raw.byteLength !== height * (stride + 1)) throw new Error("bad IDAT size");
  const rgb = new Uint8Array(width * height * 3);
  for (let y = 0; y < height; y++) {
    if (raw[y * (stride + 1)] !== 0) throw new Error("unexpected PNG row filter");
    rgb.set(raw.subarray(y * (stride + 1) + 1, (y + 1) * (stride + 1)), y * stride);
  }
  return { width, height, rgb, texts };
}
