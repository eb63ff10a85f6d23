/**
 * Top-down floor-plan geometry: world <-> screen transforms and marker
 * hit-testing. Heights are edited numerically; the plan view is 2D.
 */

import type { EntityId, Scenario } from "./types.js";

export interface ViewBox {
  worldWidth: number; // meters covered horizontally
  worldHeight: number;
  pixelWidth: number;
  pixelHeight: number;
}

export function viewBoxFor(scenario: Scenario, pixelWidth: number, pixelHeight: number): ViewBox {
  const extent = scenario.environment === "inh" ? 80 : 105;
  return {
    worldWidth: extent,
    worldHeight: extent,
    pixelWidth,
    pixelHeight,
  };
}

export function toScreen(view: ViewBox, x: number, y: number): [number, number] {
  return [
    (x / view.worldWidth) * view.pixelWidth,
    view.pixelHeight - (y / view.worldHeight) * view.pixelHeight,
  ];
}

export function toWorld(view: ViewBox, px: number, py: number): [number, number] {
  return [
    (px / view.pixelWidth) * view.worldWidth,
    ((view.pixelHeight - py) / view.pixelHeight) * view.worldHeight,
  ];
}

const HIT_RADIUS_PX = 12;

/** Which marker a pointer press at (px, py) grabs, if any. */
export function hitTest(
  scenario: Scenario,
  view: ViewBox,
  px: number,
  py: number,
): EntityId | null {
  const entities: EntityId[] = ["rx", "tx", "ris"];
  let best: EntityId | null = null;
  let bestDistance = HIT_RADIUS_PX;
  for (const entity of entities) {
    const [x, y] = scenario[entity];
    const [sx, sy] = toScreen(view, x, y);
    const d = Math.hypot(sx - px, sy - py);
    if (d <= bestDistance) {
      best = entity;
      bestDistance = d;
    }
  }
  return best;
}

/** Snap a dragged world position to a 0.5 m grid and keep it in view. */
export function snapPosition(view: ViewBox, x: number, y: number): [number, number] {
  const snap = (v: number, limit: number) =>
    Math.min(Math.max(Math.round(v * 2) / 2, 0), limit);
  return [snap(x, view.worldWidth), snap(y, view.worldHeight)];
}
