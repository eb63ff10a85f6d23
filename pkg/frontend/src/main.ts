/**
 * DOM wiring: binds the scenario store to the controls, the floor-plan
 * canvas, the violations panel, the rate table, and the heatmap overlay.
 */

import { ApiClient } from "./api.js";
import { cellSize, heatmapCells } from "./heatmap.js";
import { heatmapToCsv, rateCurvesToCsv } from "./csv.js";
import { hitTest, snapPosition, toScreen, toWorld, viewBoxFor } from "./floorplan.js";
import { ScenarioStore, type UiScenarioState } from "./store.js";
import type { EntityId, Scenario } from "./types.js";

const serviceUrl =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8000";
const store = new ScenarioStore(new ApiClient(serviceUrl));

const canvas = document.getElementById("floorplan") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

const MARKER_COLORS: Record<EntityId, string> = {
  tx: "#c0392b",
  rx: "#27ae60",
  ris: "#2e4ea1",
};

function input(id: string): HTMLInputElement {
  return document.getElementById(id) as HTMLInputElement;
}

function select(id: string): HTMLSelectElement {
  return document.getElementById(id) as HTMLSelectElement;
}

function readVec(prefix: string): [number, number, number] {
  return [
    Number(input(`${prefix}-x`).value),
    Number(input(`${prefix}-y`).value),
    Number(input(`${prefix}-z`).value),
  ];
}

function writeVec(prefix: string, value: readonly number[]): void {
  input(`${prefix}-x`).value = String(value[0]);
  input(`${prefix}-y`).value = String(value[1]);
  input(`${prefix}-z`).value = String(value[2]);
}

function syncControls(state: UiScenarioState): void {
  select("environment").value = state.scenario.environment;
  select("wall").value = state.scenario.wall;
  select("frequency").value = String(state.scenario.frequency_ghz);
  input("elements").value = String(state.scenario.n_elements);
  input("direct-link").checked = state.scenario.direct_link;
  input("seed").value = String(state.seed);
  input("realizations").value = String(state.realizations);
  for (const entity of ["tx", "rx", "ris"] as const) {
    writeVec(entity, state.scenario[entity]);
  }
}

function renderViolations(state: UiScenarioState): void {
  const panel = document.getElementById("violations")!;
  panel.innerHTML = "";
  if (state.validationPending) {
    panel.textContent = "checking...";
    return;
  }
  if (state.violations.length === 0) {
    panel.innerHTML = '<div class="ok">placement ok</div>';
    return;
  }
  for (const violation of state.violations) {
    const row = document.createElement("div");
    row.className = "violation";
    row.textContent = `${violation.code}: ${violation.message}`;
    panel.appendChild(row);
  }
}

function renderRates(state: UiScenarioState): void {
  const table = document.getElementById("rates")!;
  table.innerHTML = "";
  if (state.rateCurves.length === 0) return;
  const header = document.createElement("tr");
  header.innerHTML =
    "<th>Pt (dBW)</th>" +
    state.rateCurves.map((c) => `<th>${c.rule}</th>`).join("");
  table.appendChild(header);
  const points = state.rateCurves[0].pt_dbw;
  points.forEach((pt, i) => {
    const row = document.createElement("tr");
    row.innerHTML =
      `<td>${pt}</td>` +
      state.rateCurves
        .map((c) => `<td>${c.mean_rate[i].toFixed(2)} ± ${c.stderr[i].toFixed(2)}</td>`)
        .join("");
    table.appendChild(row);
  });
}

function drawScene(state: UiScenarioState): void {
  const view = viewBoxFor(state.scenario, canvas.width, canvas.height);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#f4f1e8";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const heatmap = state.heatmap.result;
  if (heatmap) {
    const { width, height } = cellSize(heatmap);
    for (const cell of heatmapCells(heatmap)) {
      const [sx, sy] = toScreen(view, cell.x - width / 2, cell.y + height / 2);
      ctx.fillStyle = cell.color;
      ctx.globalAlpha = 0.75;
      ctx.fillRect(
        sx,
        sy,
        (width / view.worldWidth) * view.pixelWidth,
        (height / view.worldHeight) * view.pixelHeight,
      );
      ctx.globalAlpha = 1;
    }
  }

  // wall hosting the surface
  const scenario = state.scenario;
  ctx.strokeStyle = "#2e4ea1";
  ctx.lineWidth = 4;
  ctx.beginPath();
  if (scenario.wall === "side") {
    const [x0, y0] = toScreen(view, 0, scenario.ris[1]);
    const [x1, y1] = toScreen(view, view.worldWidth, scenario.ris[1]);
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
  } else {
    const [x0, y0] = toScreen(view, scenario.ris[0], 0);
    const [x1, y1] = toScreen(view, scenario.ris[0], view.worldHeight);
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
  }
  ctx.stroke();

  for (const entity of ["tx", "rx", "ris"] as const) {
    const [x, y] = scenario[entity];
    const [sx, sy] = toScreen(view, x, y);
    ctx.fillStyle = MARKER_COLORS[entity];
    ctx.beginPath();
    ctx.arc(sx, sy, entity === state.selected ? 10 : 7, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#222";
    ctx.font = "12px sans-serif";
    ctx.fillText(entity.toUpperCase(), sx + 10, sy - 8);
  }

  const progress = document.getElementById("heatmap-progress")!;
  if (state.heatmap.jobId && !state.heatmap.result && !state.heatmap.error) {
    progress.textContent = `heatmap: ${(state.heatmap.progress * 100).toFixed(0)}%`;
  } else if (state.heatmap.error) {
    progress.textContent = `heatmap failed: ${state.heatmap.error}`;
  } else {
    progress.textContent = "";
  }

  const errorBox = document.getElementById("last-error")!;
  errorBox.textContent = state.lastError ?? "";
}

store.subscribe((state) => {
  syncControls(state);
  renderViolations(state);
  renderRates(state);
  drawScene(state);
});

// ---- control events -------------------------------------------------------

select("environment").addEventListener("change", () => {
  void store.setEnvironment(select("environment").value as Scenario["environment"]);
});
select("wall").addEventListener("change", () => {
  void store.setWall(select("wall").value as Scenario["wall"]);
});
select("frequency").addEventListener("change", () => {
  void store.setScenarioField("frequency_ghz", Number(select("frequency").value));
});
input("elements").addEventListener("change", () => {
  void store.setScenarioField("n_elements", Number(input("elements").value));
});
input("direct-link").addEventListener("change", () => {
  void store.setScenarioField("direct_link", input("direct-link").checked);
});
input("seed").addEventListener("change", () => {
  store.setSeed(Number(input("seed").value));
});
input("realizations").addEventListener("change", () => {
  store.setRealizations(Number(input("realizations").value));
});
for (const entity of ["tx", "rx", "ris"] as const) {
  for (const axis of ["x", "y", "z"]) {
    input(`${entity}-${axis}`).addEventListener("change", () => {
      void store.placeEntity(entity, readVec(entity));
    });
  }
}

document.getElementById("recommend")!.addEventListener("click", () => {
  void store.loadRecommendation();
});
document.getElementById("download")!.addEventListener("click", () => {
  const state = store.getState();
  const csv = state.heatmap.result
    ? heatmapToCsv(state.heatmap.result)
    : rateCurvesToCsv(state.rateCurves);
  if (!csv) return;
  const blob = new Blob([csv], { type: "text/csv" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "simris-result.csv";
  link.click();
  URL.revokeObjectURL(link.href);
});
document.getElementById("simulate")!.addEventListener("click", () => {
  void store.runSimulation();
});
document.getElementById("heatmap")!.addEventListener("click", () => {
  const scenario = store.getState().scenario;
  const span = scenario.environment === "inh" ? 70 : 90;
  void store.runHeatmap({
    x_min: 5,
    x_max: span,
    nx: 12,
    y_min: 5,
    y_max: Math.min(span, scenario.wall === "side" ? scenario.ris[1] - 5 : span),
    ny: 12,
    rx_height: scenario.rx[2],
  });
});

// ---- dragging -------------------------------------------------------------

let dragging: EntityId | null = null;

canvas.addEventListener("pointerdown", (event) => {
  const rect = canvas.getBoundingClientRect();
  const view = viewBoxFor(store.getState().scenario, canvas.width, canvas.height);
  dragging = hitTest(
    store.getState().scenario,
    view,
    event.clientX - rect.left,
    event.clientY - rect.top,
  );
});

canvas.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  const rect = canvas.getBoundingClientRect();
  const view = viewBoxFor(store.getState().scenario, canvas.width, canvas.height);
  const [wx, wy] = toWorld(view, event.clientX - rect.left, event.clientY - rect.top);
  const [x, y] = snapPosition(view, wx, wy);
  const z = store.getState().scenario[dragging][2];
  void store.placeEntity(dragging, [x, y, z]);
});

canvas.addEventListener("pointerup", () => {
  dragging = null;
});

void store.revalidate();
