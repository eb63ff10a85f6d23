/**
 * JSON schema of the simulation service (schema_version 1).
 * These types mirror the server payloads exactly; the UI performs no
 * channel math of its own.
 */

export type EnvironmentId = "inh" | "umi";
export type WallId = "side" | "opposite";
export type ProfileRule = "optimal" | "random" | "off";

export type Vec3 = [number, number, number];

export interface Scenario {
  environment: EnvironmentId;
  frequency_ghz: number;
  wall: WallId;
  tx: Vec3;
  rx: Vec3;
  ris: Vec3;
  n_elements: number;
  element_spacing?: number | null;
  direct_link: boolean;
}

export interface Violation {
  code: string;
  message: string;
}

export interface ValidateResponse {
  schema_version: string;
  violations: Violation[];
}

export interface RateReport {
  mean_rate_bps_hz: number;
  rate_std: number;
  rate_stderr: number;
  mean_snr_db: number;
  realizations: number;
  pt_dbm: number;
  noise_dbm: number;
}

export interface SimulateRequest {
  scenario: Scenario;
  realizations: number;
  seed: number;
  profile_rule: ProfileRule;
  pt_dbw: number;
  noise_dbm: number;
}

export interface SimulateResponse {
  schema_version: string;
  seed: number;
  report: RateReport;
  violations: Violation[];
}

export interface GridSpec {
  x_min: number;
  x_max: number;
  nx: number;
  y_min: number;
  y_max: number;
  ny: number;
  rx_height: number;
}

export interface HeatmapRequest {
  scenario: Scenario;
  grid: GridSpec;
  realizations: number;
  seed: number;
  profile_rule: ProfileRule;
  pt_dbw: number;
  noise_dbm: number;
}

export interface HeatmapResult {
  x: number[];
  y: number[];
  mean_rate_bps_hz: number[][];
  rate_stderr: number[][];
  mean_snr_db: number[][];
  seed: number;
}

export interface HeatmapSubmitResponse {
  schema_version: string;
  job_id: string;
}

export type JobStatus = "running" | "done" | "error";

export interface HeatmapPollResponse {
  schema_version: string;
  job_id: string;
  status: JobStatus;
  progress: number;
  result?: HeatmapResult;
  error?: { code: string; message: string };
}

export interface RecommendResponse {
  schema_version: string;
  scenario: Scenario;
}

export interface ServiceError {
  schema_version: string;
  error: { code: string; violations: Violation[] };
}

export type EntityId = "tx" | "rx" | "ris";
