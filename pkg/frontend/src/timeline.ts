/** Timeline scrubber over the service's per-minute position samples.
 * Pure lookup: the animation never recomputes routes client-side. */

import type { TimelineDoc } from "./types.js";

export class TimelineScrubber {
  private t = 0;

  constructor(readonly doc: TimelineDoc) {}

  get horizon(): number {
    return this.doc.horizon_min;
  }

  get time(): number {
    return this.t;
  }

  scrubTo(t: number): void {
    this.t = Math.max(0, Math.min(Math.round(t), this.horizon));
  }

  step(minutes = 1): void {
    this.scrubTo(this.t + minutes);
  }

  /** Fractional (row, col) of one unit at the current time. */
  positionOf(unitId: string): [number, number] {
    const samples = this.doc.units[unitId];
    if (!samples || samples.length === 0) {
      throw new Error(`no timeline samples for unit '${unitId}'`);
    }
    const idx = Math.min(this.t, samples.length - 1);
    const sample = samples[idx]!;
    return [sample[1], sample[2]];
  }

  positions(): Record<string, [number, number]> {
    const out: Record<string, [number, number]> = {};
    for (const unitId of Object.keys(this.doc.units)) {
      out[unitId] = this.positionOf(unitId);
    }
    return out;
  }
}
