/** PCM helpers: the service consumes s16le mono at the session sample rate. */

/** Convert Web-Audio float samples in [-1, 1] to s16le bytes. */
export function floatToS16le(samples: Float32Array | Float64Array): Uint8Array {
  const out = new Uint8Array(samples.length * 2);
  const view = new DataView(out.buffer);
  for (let i = 0; i < samples.length; i++) {
    let v = Math.round(samples[i] * 32768);
    if (v > 32767) v = 32767;
    else if (v < -32768) v = -32768;
    view.setInt16(i * 2, v, true);
  }
  return out;
}

/** Deterministic sine tone as s16le bytes (test fixtures, demos). */
export function toneS16le(freq: number, seconds: number, sampleRate = 44100,
                          amplitude = 1.0): Uint8Array {
  const n = Math.round(seconds * sampleRate);
  const samples = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    samples[i] = amplitude * Math.sin((2 * Math.PI * freq * i) / sampleRate);
  }
  return floatToS16le(samples);
}
