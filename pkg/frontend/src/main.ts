/**
 * Browser entry point: microphone -> WebSocket bridge -> cspec serve, with
 * the scrolling waterfall on a canvas, the tuner panel, and the imitation
 * overlay. Run `npm run bridge` alongside `cspec serve`; browsers cannot
 * open raw TCP sockets, so the bridge forwards the bytes untouched.
 */

import { LiveSession, Transport } from "./client.js";
import { ImitationOverlay } from "./overlay.js";
import { floatToS16le } from "./pcm.js";
import { SessionConfig } from "./protocol.js";
import { TunerView } from "./tuner.js";

const SAMPLE_RATE = 44100;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

class WebSocketTransport implements Transport {
  constructor(private ws: WebSocket) {}
  send(data: Uint8Array): void {
    this.ws.send(data);
  }
  close(): void {
    this.ws.close();
  }
}

class App {
  private session: LiveSession | null = null;
  private overlay = new ImitationOverlay();
  private audioContext: AudioContext | null = null;
  private frame: Uint8ClampedArray<ArrayBuffer> | null = null;

  private canvas = el<HTMLCanvasElement>("waterfall");
  private status = el<HTMLSpanElement>("status");
  private banner = el<HTMLDivElement>("banner");
  private tunerNote = el<HTMLSpanElement>("tuner-note");
  private tunerCents = el<HTMLSpanElement>("tuner-cents");
  private tunerArrow = el<HTMLSpanElement>("tuner-arrow");
  private tunerLegend = el<HTMLSpanElement>("tuner-legend");
  private dropped = el<HTMLSpanElement>("dropped");

  config(): SessionConfig {
    const axis = el<HTMLSelectElement>("axis").value === "log" ? "log" : "linear";
    const mode = el<HTMLSelectElement>("mode").value === "polar"
      ? "polar" : "rectangular";
    return {
      sample_rate: SAMPLE_RATE,
      fft_size: Number(el<HTMLInputElement>("fft-size").value) || 2048,
      axis,
      mode,
      fmin: Number(el<HTMLInputElement>("fmin").value) || 27.5,
      fmax: Number(el<HTMLInputElement>("fmax").value) || 4186,
      rows: Number(el<HTMLInputElement>("rows").value) || 512,
      tuner: el<HTMLInputElement>("tuner-target").value.trim() || "auto",
    };
  }

  async start(): Promise<void> {
    let stream: MediaStream;
    try {
      stream = await navigator.mediaDevices.getUserMedia({
        audio: { channelCount: 1, sampleRate: SAMPLE_RATE }, video: false,
      });
    } catch (err) {
      this.showBanner(
        "Microphone access denied. Allow the microphone in the browser " +
        "permission prompt (or site settings) and press Start again.");
      return;
    }

    const config = this.config();
    const session = new LiveSession(config, {
      onStatus: (s, detail) => {
        this.status.textContent = detail ? `${s}: ${detail}` : s;
      },
      onColumn: () => this.draw(),
      onAnalysis: (view) => this.updateTuner(view),
    });
    this.session = session;

    const url = el<HTMLInputElement>("server").value || "ws://127.0.0.1:9474";
    const ws = new WebSocket(url);
    ws.binaryType = "arraybuffer";
    ws.onopen = () => session.attach(new WebSocketTransport(ws));
    ws.onmessage = (ev) => session.receive(new Uint8Array(ev.data as ArrayBuffer));
    ws.onclose = () => session.disconnected(() => this.start());
    ws.onerror = () => this.showBanner(
      `Cannot reach ${url}. Start the bridge (npm run bridge) and the ` +
      "service (cspec serve), then retry.");

    this.startCapture(stream, session);
    this.canvas.height = session.waterfall.rows;
    this.canvas.width = Math.max(this.canvas.width, 512);
  }

  private startCapture(stream: MediaStream, session: LiveSession): void {
    const ctx = new AudioContext({ sampleRate: SAMPLE_RATE });
    this.audioContext = ctx;
    const source = ctx.createMediaStreamSource(stream);
    // ScriptProcessor is deprecated but universally available; 4096-sample
    // blocks keep chunk overhead negligible at 44.1 kHz
    const node = ctx.createScriptProcessor(4096, 1, 1);
    node.onaudioprocess = (ev) => {
      if (session.status === "ready" || session.status === "connecting") {
        session.sendPcm(floatToS16le(ev.inputBuffer.getChannelData(0)));
      }
    };
    source.connect(node);
    node.connect(ctx.destination);
  }

  private draw(): void {
    const session = this.session;
    if (!session) return;
    const width = this.canvas.width;
    const rows = session.waterfall.rows;
    if (!this.frame || this.frame.length !== width * rows * 4) {
      this.frame = new Uint8ClampedArray(new ArrayBuffer(width * rows * 4));
    }
    session.waterfall.render(width, this.frame);
    this.overlay.composite(this.frame, width, rows);
    const ctx2d = this.canvas.getContext("2d");
    if (ctx2d) {
      // putImageData writes the received RGB verbatim: no compositing, no
      // color management on the raw buffer
      ctx2d.putImageData(new ImageData(this.frame, width, rows), 0, 0);
    }
    this.dropped.textContent = String(session.waterfall.droppedFrames);
  }

  private updateTuner(view: TunerView): void {
    this.tunerNote.textContent = view.note;
    this.tunerCents.textContent = `${view.cents >= 0 ? "+" : ""}${view.cents.toFixed(1)}`;
    this.tunerArrow.textContent = view.arrow > 0 ? "▲" : view.arrow < 0 ? "▼" : "●";
    this.tunerLegend.textContent = view.beatLegend;
    el<HTMLDivElement>("tuner").classList.toggle("dimmed", view.dimmed);
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.style.display = "block";
  }

  wireControls(): void {
    el<HTMLButtonElement>("start").onclick = () => void this.start();
    el<HTMLButtonElement>("stop").onclick = () => {
      this.session?.endStream();
      this.session?.close();
      void this.audioContext?.close();
    };
    el<HTMLButtonElement>("overlay-toggle").onclick = () => {
      this.overlay.toggle();
      this.draw();
    };
    el<HTMLInputElement>("overlay-opacity").oninput = (ev) => {
      this.overlay.opacity = Number((ev.target as HTMLInputElement).value);
      this.draw();
    };
    el<HTMLInputElement>("overlay-file").onchange = async (ev) => {
      const file = (ev.target as HTMLInputElement).files?.[0];
      if (!file) return;
      const bitmap = await createImageBitmap(file);
      const scratch = document.createElement("canvas");
      scratch.width = bitmap.width;
      scratch.height = bitmap.height;
      const c = scratch.getContext("2d");
      if (!c) return;
      c.drawImage(bitmap, 0, 0);
      const data = c.getImageData(0, 0, bitmap.width, bitmap.height);
      this.overlay.setReference(data.data, bitmap.width, bitmap.height);
      this.draw();
    };
  }
}

const app = new App();
app.wireControls();
