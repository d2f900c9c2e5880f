/**
 * Tuner readout model: folds analysis frames into what the panel shows:
 * note name, signed cents, sharp/flat arrow, and the hue-beat legend
 * (RGB cycling means the tone sits above center, RBG below).
 */

import { AnalysisReadout, parseAnalysis } from "./protocol.js";

export interface TunerView {
  note: string;
  cents: number;
  /** -1 flat arrow, 0 centered, +1 sharp arrow */
  arrow: -1 | 0 | 1;
  /** which hue-beat rotation the player should expect to see */
  beatLegend: "RGB (sharp side)" | "RBG (flat side)" | "steady hue";
  /** panel dims when the last reading was unmeasurable */
  dimmed: boolean;
}

export class Tuner {
  private last: AnalysisReadout | null = null;

  update(payload: Uint8Array | string): TunerView {
    this.last = parseAnalysis(payload);
    return this.view();
  }

  view(): TunerView {
    const r = this.last;
    if (r === null || r.verdict === "unmeasurable") {
      return { note: r?.note ?? "-", cents: 0, arrow: 0,
               beatLegend: "steady hue", dimmed: true };
    }
    const arrow = r.verdict === "sharp" ? 1 : r.verdict === "flat" ? -1 : 0;
    const beatLegend = arrow > 0 ? "RGB (sharp side)"
      : arrow < 0 ? "RBG (flat side)" : "steady hue";
    return { note: r.note, cents: r.cents, arrow, beatLegend, dimmed: false };
  }
}
