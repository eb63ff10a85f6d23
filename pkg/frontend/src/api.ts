/**
 * Typed client for the simulation service. The fetch implementation is
 * injectable so tests can run against a stub.
 */

import type {
  EnvironmentId,
  HeatmapPollResponse,
  HeatmapRequest,
  HeatmapSubmitResponse,
  RecommendResponse,
  ServiceError,
  SimulateRequest,
  SimulateResponse,
  ValidateResponse,
  Scenario,
  WallId,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ServiceError | null,
  ) {
    super(body ? `service error: ${body.error.code}` : `HTTP ${status}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let body: ServiceError | null = null;
      try {
        body = (await response.json()) as ServiceError;
      } catch {
        body = null;
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  validate(scenario: Scenario): Promise<ValidateResponse> {
    return this.post("/validate", { scenario });
  }

  simulate(request: SimulateRequest): Promise<SimulateResponse> {
    return this.post("/simulate", request);
  }

  submitHeatmap(request: HeatmapRequest): Promise<HeatmapSubmitResponse> {
    return this.post("/heatmap", request);
  }

  pollHeatmap(jobId: string): Promise<HeatmapPollResponse> {
    return this.request(`/heatmap/${jobId}`);
  }

  recommend(environment: EnvironmentId, wall: WallId): Promise<RecommendResponse> {
    return this.request(
      `/recommend?environment=${encodeURIComponent(environment)}&wall=${encodeURIComponent(wall)}`,
    );
  }
}
