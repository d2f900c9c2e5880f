/**
 * Session orchestration: byte transport in, waterfall/tuner state out.
 *
 * The client is transport-agnostic; the browser entry point wires it to a
 * WebSocket (via the byte-for-byte ws<->tcp bridge) and the tests wire it to
 * a raw TCP socket. Either way the protocol bytes are identical.
 */

import {
  FRAME_ANALYSIS, FRAME_COLUMN, FRAME_CONFIG_ACK, FRAME_ERROR,
  FrameParser, SessionConfig, encodeHandshake, encodePcmChunk,
  encodeEndOfStream,
} from "./protocol.js";
import { Tuner, TunerView } from "./tuner.js";
import { Waterfall } from "./waterfall.js";

/** Minimal byte-stream transport the client drives. */
export interface Transport {
  send(data: Uint8Array): void;
  close(): void;
}

export type ConnectionStatus =
  | "connecting" | "ready" | "closed" | "error" | "retrying";

export interface SessionEvents {
  onStatus?(status: ConnectionStatus, detail?: string): void;
  onColumn?(seq: number): void;
  onAnalysis?(view: TunerView): void;
}

export class LiveSession {
  readonly config: SessionConfig;
  readonly waterfall: Waterfall;
  readonly tuner = new Tuner();
  status: ConnectionStatus = "connecting";
  ackText: string | null = null;
  errorText: string | null = null;

  private parser = new FrameParser();
  private transport: Transport | null = null;
  private events: SessionEvents;

  constructor(config: SessionConfig, events: SessionEvents = {}) {
    const rows = config.axis === "log"
      ? config.rows ?? 512
      : Math.floor((config.fft_size ?? 2048) / 2) + 1;
    this.config = config;
    this.waterfall = new Waterfall(rows);
    this.events = events;
  }

  /** Attach a fresh transport and send the handshake. */
  attach(transport: Transport): void {
    this.transport = transport;
    this.setStatus("connecting");
    transport.send(encodeHandshake(this.config));
  }

  sendPcm(pcm: Uint8Array): void {
    if (this.transport === null) throw new Error("no transport attached");
    this.transport.send(encodePcmChunk(pcm));
  }

  endStream(): void {
    this.transport?.send(encodeEndOfStream());
  }

  /** Feed received bytes; dispatches every complete frame. */
  receive(data: Uint8Array): void {
    for (const frame of this.parser.feed(data)) {
      switch (frame.type) {
        case FRAME_CONFIG_ACK:
          this.ackText = new TextDecoder().decode(frame.payload);
          this.setStatus("ready");
          break;
        case FRAME_COLUMN:
          this.waterfall.push(frame.seq, frame.payload);
          this.events.onColumn?.(frame.seq);
          break;
        case FRAME_ANALYSIS: {
          const view = this.tuner.update(frame.payload);
          this.events.onAnalysis?.(view);
          break;
        }
        case FRAME_ERROR:
          this.errorText = new TextDecoder().decode(frame.payload);
          this.setStatus("error", this.errorText);
          break;
        default:
          throw new Error(`unknown frame type ${frame.type}`);
      }
    }
  }

  /** Transport dropped; the UI surfaces the status and schedules a retry. */
  disconnected(retry?: () => void, delayMs = 1000,
               timer: (cb: () => void, ms: number) => void = setTimeout): void {
    if (this.status === "error" || this.status === "closed") return;
    this.setStatus("retrying");
    if (retry) timer(retry, delayMs);
  }

  close(): void {
    this.transport?.close();
    this.transport = null;
    this.setStatus("closed");
  }

  private setStatus(status: ConnectionStatus, detail?: string): void {
    this.status = status;
    this.events.onStatus?.(status, detail);
  }
}
