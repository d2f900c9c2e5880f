/**
 * Imitation overlay: a reference image blended at reduced opacity behind the
 * live waterfall so a performer can match a known sound picture. The
 * reference is anchored to "now": its rightmost column aligns with the
 * newest live column and both scroll together.
 *
 * With the overlay off (or opacity 0) the composited output is byte-equal to
 * the plain waterfall render, preserving the pixel-fidelity guarantee.
 */

export class ImitationOverlay {
  enabled = false;
  private opacityValue = 0.35;
  /** RGBA reference, top row first (same layout as the waterfall render). */
  private reference: { pixels: Uint8ClampedArray; width: number; height: number } | null = null;

  setReference(pixels: Uint8ClampedArray, width: number, height: number): void {
    if (pixels.length !== width * height * 4) throw new Error("bad reference size");
    this.reference = { pixels, width, height };
  }

  clearReference(): void {
    this.reference = null;
  }

  get opacity(): number {
    return this.opacityValue;
  }

  set opacity(value: number) {
    if (!(value >= 0 && value <= 1)) throw new Error("opacity must be in [0, 1]");
    this.opacityValue = value;
  }

  /** Toggling twice restores the previous state. */
  toggle(): boolean {
    this.enabled = !this.enabled;
    return this.enabled;
  }

  /**
   * Blend the reference into a rendered waterfall buffer (in place) and
   * return it. `live` is width*height RGBA with the newest column at
   * x = width-1; the reference's right edge anchors there too.
   */
  composite(live: Uint8ClampedArray, width: number, height: number): Uint8ClampedArray {
    if (live.length !== width * height * 4) throw new Error("bad buffer size");
    if (!this.enabled || this.reference === null || this.opacityValue === 0) {
      return live;
    }
    const ref = this.reference;
    const a = this.opacityValue;
    const span = Math.min(width, ref.width);
    const rows = Math.min(height, ref.height);
    for (let y = 0; y < rows; y++) {
      for (let i = 0; i < span; i++) {
        // right-edge alignment on both images
        const lx = width - 1 - i;
        const rx = ref.width - 1 - i;
        const dst = (y * width + lx) * 4;
        const src = (y * ref.width + rx) * 4;
        live[dst] = (1 - a) * live[dst] + a * ref.pixels[src];
        live[dst + 1] = (1 - a) * live[dst + 1] + a * ref.pixels[src + 1];
        live[dst + 2] = (1 - a) * live[dst + 2] + a * ref.pixels[src + 2];
      }
    }
    return live;
  }
}
