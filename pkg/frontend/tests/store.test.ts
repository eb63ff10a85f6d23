import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ScenarioStore } from "../src/store.js";
import { FakeService } from "./fake_service.js";

function makeStore(service = new FakeService()) {
  const api = new ApiClient("http://fake", service.fetch);
  // zero poll delay keeps the heatmap loop synchronous-fast in tests
  const store = new ScenarioStore(api, 0, () => Promise.resolve());
  return { store, api, service };
}

describe("recommendation", () => {
  it("populates the server's reference coordinates", async () => {
    const { store } = makeStore();
    await store.loadRecommendation();
    const scenario = store.getState().scenario;
    expect(scenario.tx).toEqual([0, 25, 2]);
    expect(scenario.rx).toEqual([38, 48, 1]);
    expect(scenario.ris).toEqual([40, 50, 2]);
    expect(store.getState().violations).toEqual([]);
  });

  it("respects the selected environment and wall", async () => {
    const { store } = makeStore();
    await store.setEnvironment("umi");
    await store.setWall("side");
    await store.loadRecommendation();
    const scenario = store.getState().scenario;
    expect(scenario.tx).toEqual([0, 25, 20]);
    expect(scenario.ris).toEqual([70, 85, 10]);
  });
});

describe("placement validation", () => {
  it("surfaces the server violation for an Rx above 2 m", async () => {
    const { store } = makeStore();
    await store.placeEntity("rx", [38, 48, 2.5]);
    const codes = store.getState().violations.map((v) => v.code);
    expect(codes).toContain("RX_TOO_HIGH");
  });

  it("clears violations when the placement is fixed", async () => {
    const { store } = makeStore();
    await store.placeEntity("rx", [38, 48, 2.5]);
    await store.placeEntity("rx", [38, 48, 1.0]);
    expect(store.getState().violations).toEqual([]);
  });
});

describe("rate simulation", () => {
  it("collects one curve per control rule over the sweep", async () => {
    const { store } = makeStore();
    await store.runSimulation([-10, 0]);
    const curves = store.getState().rateCurves;
    expect(curves.map((c) => c.rule)).toEqual(["off", "random", "optimal"]);
    for (const curve of curves) {
      expect(curve.pt_dbw).toEqual([-10, 0]);
      expect(curve.mean_rate).toHaveLength(2);
    }
    // the server's optimal rule dominates in this stub, as in reality
    expect(curves[2].mean_rate[0]).toBeGreaterThan(curves[0].mean_rate[0]);
  });

  it("refuses to run while the scenario is invalid", async () => {
    const { store } = makeStore();
    await store.placeEntity("rx", [38, 48, 2.5]);
    await store.runSimulation([0]);
    expect(store.getState().rateCurves).toEqual([]);
    expect(store.getState().lastError).toMatch(/invalid/);
  });
});

describe("heatmap", () => {
  it("polls the job to completion and stores the grid", async () => {
    const { store, service } = makeStore();
    service.runningPolls = 3;
    await store.runHeatmap({
      x_min: 30, x_max: 50, nx: 2, y_min: 30, y_max: 45, ny: 2, rx_height: 1,
    });
    const view = store.getState().heatmap;
    expect(view.error).toBeNull();
    expect(view.result?.x).toEqual([30, 50]);
    expect(view.result?.mean_rate_bps_hz).toHaveLength(2);
    expect(view.progress).toBe(1);
  });

  it("renders values equal to four direct simulate calls", async () => {
    const { store, api } = makeStore();
    const grid = {
      x_min: 30, x_max: 50, nx: 2, y_min: 30, y_max: 45, ny: 2, rx_height: 1,
    };
    await store.runHeatmap(grid);
    const result = store.getState().heatmap.result!;
    const state = store.getState();
    for (let iy = 0; iy < result.y.length; iy++) {
      for (let ix = 0; ix < result.x.length; ix++) {
        const direct = await api.simulate({
          scenario: {
            ...state.scenario,
            rx: [result.x[ix], result.y[iy], grid.rx_height],
          },
          realizations: state.realizations,
          seed: state.seed,
          profile_rule: "optimal",
          pt_dbw: 0,
          noise_dbm: state.noiseDbm,
        });
        expect(result.mean_rate_bps_hz[iy][ix]).toBeCloseTo(
          direct.report.mean_rate_bps_hz,
          12,
        );
      }
    }
  });

  it("discards polls of a superseded job", async () => {
    const { store, service } = makeStore();
    service.runningPolls = 2;
    const grid = {
      x_min: 30, x_max: 50, nx: 2, y_min: 30, y_max: 45, ny: 2, rx_height: 1,
    };
    const first = store.runHeatmap(grid);
    const second = store.runHeatmap({ ...grid, x_min: 10, x_max: 20 });
    await Promise.all([first, second]);
    const view = store.getState().heatmap;
    expect(view.result?.x).toEqual([10, 20]);
  });
});

describe("seed control", () => {
  it("is visible, editable, and echoed by results", async () => {
    const { store } = makeStore();
    store.setSeed(77);
    await store.runHeatmap({
      x_min: 30, x_max: 50, nx: 1, y_min: 30, y_max: 45, ny: 1, rx_height: 1,
    });
    expect(store.getState().heatmap.result?.seed).toBe(77);
  });
});
