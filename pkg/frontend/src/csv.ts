/** CSV export of the currently displayed results. */

import type { HeatmapResult } from "./types.js";
import type { RateCurve } from "./store.js";

export function rateCurvesToCsv(curves: RateCurve[]): string {
  if (curves.length === 0) return "";
  const header = ["pt_dbw", ...curves.map((c) => `${c.rule}_mean_rate`), ...curves.map((c) => `${c.rule}_stderr`)];
  const lines = [header.join(",")];
  curves[0].pt_dbw.forEach((pt, i) => {
    const row = [
      String(pt),
      ...curves.map((c) => String(c.mean_rate[i])),
      ...curves.map((c) => String(c.stderr[i])),
    ];
    lines.push(row.join(","));
  });
  return lines.join("\n") + "\n";
}

export function heatmapToCsv(result: HeatmapResult): string {
  const lines = ["x,y,mean_rate_bps_hz,rate_stderr,mean_snr_db"];
  for (let iy = 0; iy < result.y.length; iy++) {
    for (let ix = 0; ix < result.x.length; ix++) {
      lines.push(
        [
          result.x[ix],
          result.y[iy],
          result.mean_rate_bps_hz[iy][ix],
          result.rate_stderr[iy][ix],
          result.mean_snr_db[iy][ix],
        ].join(","),
      );
    }
  }
  return lines.join("\n") + "\n";
}
