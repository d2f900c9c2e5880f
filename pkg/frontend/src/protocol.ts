/**
 * Wire protocol for the cspec streaming service.
 *
 * Handshake: one JSON line (terminated by \n). The server then accepts
 * length-prefixed PCM chunks (u32le byte count + s16le mono samples; zero
 * count ends the session) and replies with frames:
 *
 *     u32le length | u8 type | u32le seq | payload
 *
 * type 1 column     u16le rowCount + rowCount RGB triples, bottom row first
 * type 2 analysis   UTF-8 key=value tuner line
 * type 3 config-ack UTF-8 key=value accepted configuration
 * type 4 error      UTF-8 message, connection closes afterwards
 */

export const FRAME_COLUMN = 1;
export const FRAME_ANALYSIS = 2;
export const FRAME_CONFIG_ACK = 3;
export const FRAME_ERROR = 4;

export interface SessionConfig {
  sample_rate?: number;
  fft_size?: number;
  hop?: number;
  axis?: "linear" | "log";
  mode?: "rectangular" | "polar";
  fmin?: number;
  fmax?: number;
  rows?: number;
  a_ref?: number;
  a4?: number;
  tuner?: string; // "auto" or a note name
}

export interface StreamFrame {
  type: number;
  seq: number;
  payload: Uint8Array;
}

export function encodeHandshake(config: SessionConfig): Uint8Array {
  return new TextEncoder().encode(JSON.stringify(config) + "\n");
}

/** Length-prefix a chunk of s16le PCM bytes for transmission. */
export function encodePcmChunk(pcm: Uint8Array): Uint8Array {
  if (pcm.byteLength % 2 !== 0) throw new Error("PCM chunk must be whole s16 samples");
  const out = new Uint8Array(4 + pcm.byteLength);
  new DataView(out.buffer).setUint32(0, pcm.byteLength, true);
  out.set(pcm, 4);
  return out;
}

/** The zero-length chunk that tells the server the stream is finished. */
export function encodeEndOfStream(): Uint8Array {
  return new Uint8Array([0, 0, 0, 0]);
}

/** Incremental decoder for the server's length-prefixed frame stream. */
export class FrameParser {
  private buffer = new Uint8Array(0);

  feed(data: Uint8Array): StreamFrame[] {
    const joined = new Uint8Array(this.buffer.byteLength + data.byteLength);
    joined.set(this.buffer, 0);
    joined.set(data, this.buffer.byteLength);
    this.buffer = joined;

    const frames: StreamFrame[] = [];
    for (;;) {
      if (this.buffer.byteLength < 4) return frames;
      const view = new DataView(this.buffer.buffer, this.buffer.byteOffset);
      const length = view.getUint32(0, true);
      if (this.buffer.byteLength < 4 + length) return frames;
      const body = this.buffer.subarray(4, 4 + length);
      if (length < 5) throw new Error(`runt frame (length ${length})`);
      const bodyView = new DataView(body.buffer, body.byteOffset);
      frames.push({
        type: body[0],
        seq: bodyView.getUint32(1, true),
        payload: body.slice(5),
      });
      this.buffer = this.buffer.slice(4 + length);
    }
  }
}

/** Column payload -> RGB triples, bottom (lowest frequency) row first. */
export function parseColumn(payload: Uint8Array): { rows: number; rgb: Uint8Array } {
  if (payload.byteLength < 2) throw new Error("short column payload");
  const rows = new DataView(payload.buffer, payload.byteOffset).getUint16(0, true);
  if (payload.byteLength !== 2 + rows * 3) {
    throw new Error(`column payload length ${payload.byteLength} != 2 + ${rows}*3`);
  }
  return { rows, rgb: payload.slice(2) };
}

export interface AnalysisReadout {
  note: string;
  targetHz: number;
  measuredHz: number;
  offsetHz: number;
  cents: number;
  verdict: "in-tune" | "sharp" | "flat" | "unmeasurable";
}

/** Parse the canonical key=value analysis line. */
export function parseAnalysis(payload: Uint8Array | string): AnalysisReadout {
  const text = typeof payload === "string" ? payload : new TextDecoder().decode(payload);
  const fields = new Map<string, string>();
  for (const token of text.trim().split(/\s+/)) {
    const eq = token.indexOf("=");
    if (eq > 0) fields.set(token.slice(0, eq), token.slice(eq + 1));
  }
  const num = (key: string) => {
    const raw = fields.get(key);
    const value = raw === undefined ? NaN : Number(raw);
    if (Number.isNaN(value)) throw new Error(`analysis line missing ${key}: ${text}`);
    return value;
  };
  const verdict = fields.get("verdict");
  if (verdict !== "in-tune" && verdict !== "sharp" && verdict !== "flat"
      && verdict !== "unmeasurable") {
    throw new Error(`bad verdict in analysis line: ${text}`);
  }
  return {
    note: fields.get("note") ?? "-",
    targetHz: num("target_hz"),
    measuredHz: num("measured_hz"),
    offsetHz: num("offset_hz"),
    cents: num("cents"),
    verdict,
  };
}
