/**
 * Scrolling waterfall state: a ring buffer of received columns rendered into
 * an RGBA pixel buffer with the newest column at the right edge.
 *
 * Received RGB triples are copied into the buffer verbatim (no palette, no
 * gamma, no scaling), so the displayed bytes can be diffed directly against
 * the protocol bytes.
 */

import { parseColumn } from "./protocol.js";

export class Waterfall {
  readonly rows: number;
  readonly capacity: number;
  private columns: Uint8Array[] = [];
  private lastSeq: number | null = null;
  droppedFrames = 0;

  /**
   * @param rows      column height in pixels (from the session config)
   * @param capacity  columns retained; at 44.1 kHz / hop 2048 the stream
   *                  advances ~21.5 columns/s, so 256 covers well over 10 s
   */
  constructor(rows: number, capacity = 256) {
    if (rows < 1 || capacity < 1) throw new Error("rows and capacity must be positive");
    this.rows = rows;
    this.capacity = capacity;
  }

  /** Append a column frame; tracks sequence gaps as dropped frames. */
  push(seq: number, payload: Uint8Array): void {
    const { rows, rgb } = parseColumn(payload);
    if (rows !== this.rows) {
      throw new Error(`column has ${rows} rows, waterfall expects ${this.rows}`);
    }
    if (this.lastSeq !== null && seq > this.lastSeq + 1) {
      this.droppedFrames += seq - this.lastSeq - 1;
    }
    this.lastSeq = seq;
    this.columns.push(rgb);
    if (this.columns.length > this.capacity) this.columns.shift();
  }

  get columnCount(): number {
    return this.columns.length;
  }

  /** The most recent column's raw RGB bytes (bottom-to-top), if any. */
  newestColumn(): Uint8Array | null {
    return this.columns.length ? this.columns[this.columns.length - 1] : null;
  }

  /**
   * Render into an RGBA buffer of width*rows pixels (ImageData layout,
   * row 0 at the top). Newest column sits at x = width-1 and history runs
   * leftward; columns older than the window are not drawn.
   */
  render(width: number, out?: Uint8ClampedArray): Uint8ClampedArray {
    const buf = out ?? new Uint8ClampedArray(width * this.rows * 4);
    if (buf.length !== width * this.rows * 4) {
      throw new Error("output buffer has the wrong size");
    }
    const visible = Math.min(width, this.columns.length);
    for (let i = 0; i < visible; i++) {
      const x = width - 1 - i;
      const column = this.columns[this.columns.length - 1 - i];
      for (let r = 0; r < this.rows; r++) {
        const y = this.rows - 1 - r; // bottom-to-top payload, top-first buffer
        const src = r * 3;
        const dst = (y * width + x) * 4;
        buf[dst] = column[src];
        buf[dst + 1] = column[src + 1];
        buf[dst + 2] = column[src + 2];
        buf[dst + 3] = 255;
      }
    }
    return buf;
  }
}
