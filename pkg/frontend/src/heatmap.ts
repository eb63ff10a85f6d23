/**
 * Heatmap view-model: turns a server grid into drawable colored cells.
 * Pure functions, no DOM.
 */

import type { HeatmapResult } from "./types.js";

export interface HeatmapCell {
  x: number; // world coordinates of the cell center, meters
  y: number;
  value: number; // bits/s/Hz
  color: string;
}

/** Blue -> yellow ramp; t in [0, 1]. */
export function rampColor(t: number): string {
  const clamped = Math.min(Math.max(t, 0), 1);
  const r = Math.round(40 + 215 * clamped);
  const g = Math.round(50 + 180 * clamped);
  const b = Math.round(140 - 110 * clamped);
  return `rgb(${r},${g},${b})`;
}

export function heatmapCells(result: HeatmapResult): HeatmapCell[] {
  const values = result.mean_rate_bps_hz.flat();
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  const cells: HeatmapCell[] = [];
  for (let iy = 0; iy < result.y.length; iy++) {
    for (let ix = 0; ix < result.x.length; ix++) {
      const value = result.mean_rate_bps_hz[iy][ix];
      cells.push({
        x: result.x[ix],
        y: result.y[iy],
        value,
        color: rampColor((value - lo) / span),
      });
    }
  }
  return cells;
}

/** Cell edge lengths implied by the grid spacing (single cells get 4 m). */
export function cellSize(result: HeatmapResult): { width: number; height: number } {
  const width = result.x.length > 1 ? result.x[1] - result.x[0] : 4;
  const height = result.y.length > 1 ? result.y[1] - result.y[0] : 4;
  return { width, height };
}
