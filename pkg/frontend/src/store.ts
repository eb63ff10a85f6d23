/**
 * UI state container. All numbers shown in the UI come from the server;
 * this module only moves them around. Every scenario edit triggers a
 * server-side validation so the error panel always reflects the latest
 * placement, and stale heatmap polls are discarded by job id.
 */

import { ApiClient } from "./api.js";
import type {
  EntityId,
  EnvironmentId,
  GridSpec,
  HeatmapResult,
  ProfileRule,
  RateReport,
  Scenario,
  Vec3,
  Violation,
  WallId,
} from "./types.js";

export interface RateCurve {
  rule: ProfileRule;
  pt_dbw: number[];
  mean_rate: number[];
  stderr: number[];
}

export interface HeatmapView {
  jobId: string | null;
  progress: number;
  result: HeatmapResult | null;
  error: string | null;
}

export interface UiScenarioState {
  scenario: Scenario;
  seed: number;
  realizations: number;
  noiseDbm: number;
  selected: EntityId | null;
  violations: Violation[];
  validationPending: boolean;
  rateCurves: RateCurve[];
  heatmap: HeatmapView;
  lastError: string | null;
}

export const DEFAULT_SCENARIO: Scenario = {
  environment: "inh",
  frequency_ghz: 28,
  wall: "side",
  tx: [0, 25, 2],
  rx: [38, 48, 1],
  ris: [40, 50, 2],
  n_elements: 256,
  element_spacing: null,
  direct_link: true,
};

export const DEFAULT_PT_SWEEP_DBW = [-20, -15, -10, -5, 0, 5, 10];

type Listener = (state: UiScenarioState) => void;

export class ScenarioStore {
  private state: UiScenarioState = {
    scenario: { ...DEFAULT_SCENARIO },
    seed: 1,
    realizations: 200,
    noiseDbm: -100,
    selected: null,
    violations: [],
    validationPending: false,
    rateCurves: [],
    heatmap: { jobId: null, progress: 0, result: null, error: null },
    lastError: null,
  };
  private listeners: Listener[] = [];
  private validationEpoch = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly pollDelayMs = 250,
    private readonly sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ) {}

  getState(): UiScenarioState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private commit(patch: Partial<UiScenarioState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Move one terminal and revalidate against the server. */
  async placeEntity(entity: EntityId, position: Vec3): Promise<void> {
    const scenario = { ...this.state.scenario, [entity]: position };
    this.commit({ scenario, selected: entity });
    await this.revalidate();
  }

  async setEnvironment(environment: EnvironmentId): Promise<void> {
    this.commit({ scenario: { ...this.state.scenario, environment } });
    await this.revalidate();
  }

  async setWall(wall: WallId): Promise<void> {
    this.commit({ scenario: { ...this.state.scenario, wall } });
    await this.revalidate();
  }

  async setScenarioField<K extends keyof Scenario>(
    field: K,
    value: Scenario[K],
  ): Promise<void> {
    this.commit({ scenario: { ...this.state.scenario, [field]: value } });
    await this.revalidate();
  }

  setSeed(seed: number): void {
    this.commit({ seed });
  }

  setRealizations(realizations: number): void {
    this.commit({ realizations });
  }

  /** Ask the server for a known-good placement and adopt it. */
  async loadRecommendation(): Promise<void> {
    const { environment, wall } = this.state.scenario;
    try {
      const response = await this.api.recommend(environment, wall);
      this.commit({
        scenario: {
          ...response.scenario,
          n_elements: this.state.scenario.n_elements,
        },
        lastError: null,
      });
    } catch (error) {
      this.commit({ lastError: describe(error) });
      return;
    }
    await this.revalidate();
  }

  async revalidate(): Promise<void> {
    const epoch = ++this.validationEpoch;
    this.commit({ validationPending: true });
    try {
      const response = await this.api.validate(this.state.scenario);
      if (epoch !== this.validationEpoch) return; // superseded by a newer edit
      this.commit({ violations: response.violations, validationPending: false });
    } catch (error) {
      if (epoch !== this.validationEpoch) return;
      this.commit({ validationPending: false, lastError: describe(error) });
    }
  }

  /**
   * Rate vs transmit power for the off/random/optimal rules. Refuses to
   * run while the scenario has unresolved violations.
   */
  async runSimulation(ptSweepDbw: number[] = DEFAULT_PT_SWEEP_DBW): Promise<void> {
    await this.revalidate();
    if (this.state.violations.length > 0) {
      this.commit({ lastError: "scenario is invalid; fix the violations first" });
      return;
    }
    const rules: ProfileRule[] = ["off", "random", "optimal"];
    const curves: RateCurve[] = [];
    try {
      for (const rule of rules) {
        const curve: RateCurve = { rule, pt_dbw: [], mean_rate: [], stderr: [] };
        for (const pt of ptSweepDbw) {
          const report = await this.simulateOnce(rule, pt);
          curve.pt_dbw.push(pt);
          curve.mean_rate.push(report.mean_rate_bps_hz);
          curve.stderr.push(report.rate_stderr);
        }
        curves.push(curve);
      }
    } catch (error) {
      this.commit({ lastError: describe(error) });
      return;
    }
    this.commit({ rateCurves: curves, lastError: null });
  }

  private async simulateOnce(rule: ProfileRule, ptDbw: number): Promise<RateReport> {
    const response = await this.api.simulate({
      scenario: this.state.scenario,
      realizations: this.state.realizations,
      seed: this.state.seed,
      profile_rule: rule,
      pt_dbw: ptDbw,
      noise_dbm: this.state.noiseDbm,
    });
    return response.report;
  }

  /**
   * Submit a heatmap job and poll it to completion. Like runSimulation,
   * a scenario with known violations is never submitted silently.
   */
  async runHeatmap(grid: GridSpec, rule: ProfileRule = "optimal", ptDbw = 0): Promise<void> {
    await this.revalidate();
    if (this.state.violations.length > 0) {
      this.commit({ lastError: "scenario is invalid; fix the violations first" });
      return;
    }
    let jobId: string;
    try {
      const submitted = await this.api.submitHeatmap({
        scenario: this.state.scenario,
        grid,
        realizations: this.state.realizations,
        seed: this.state.seed,
        profile_rule: rule,
        pt_dbw: ptDbw,
        noise_dbm: this.state.noiseDbm,
      });
      jobId = submitted.job_id;
    } catch (error) {
      this.commit({
        heatmap: { jobId: null, progress: 0, result: null, error: describe(error) },
      });
      return;
    }
    this.commit({ heatmap: { jobId, progress: 0, result: null, error: null } });

    for (;;) {
      const poll = await this.api.pollHeatmap(jobId);
      if (this.state.heatmap.jobId !== jobId) return; // a newer job took over
      if (poll.status === "done" && poll.result) {
        this.commit({
          heatmap: { jobId, progress: 1, result: poll.result, error: null },
        });
        return;
      }
      if (poll.status === "error") {
        this.commit({
          heatmap: {
            jobId,
            progress: poll.progress,
            result: null,
            error: poll.error?.message ?? "job failed",
          },
        });
        return;
      }
      this.commit({
        heatmap: { jobId, progress: poll.progress, result: null, error: null },
      });
      await this.sleep(this.pollDelayMs);
    }
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
