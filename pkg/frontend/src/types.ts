/** Wire types mirrored from the screening service API. */

export type SessionState =
  | "MONITORING"
  | "ALERT"
  | "TIER2_PENDING"
  | "TIER3_PENDING"
  | "DIAGNOSED";

export type CaptureModality = "voice" | "face" | "retina";

export type EventKind =
  | "vitals"
  | "alert"
  | "capture"
  | "confidence"
  | "diagnosis"
  | "clear";

export interface VitalsPayload {
  timestamp_ms: number;
  systolic: number;
  diastolic: number;
  heart_rate: number;
  spo2: number;
}

export interface ServerEvent {
  sequence: number;
  timestamp_ms: number;
  kind: EventKind;
  payload: Record<string, unknown>;
}

export interface Diagnosis {
  at_risk: boolean;
  risk_percent: number;
  contributions: number[];
  model_version: string;
  imputed: string[];
}

export interface SessionSummary {
  session_id: string;
  state: SessionState;
  tier: number;
  last_seq: number;
  confidences: Record<string, number>;
  alert: Record<string, unknown> | null;
  diagnosis: Diagnosis | null;
}

export interface EventsResponse {
  events: ServerEvent[];
  last_seq: number;
}

/** Threshold lines drawn on the vitals chart. */
export const THRESHOLDS = {
  systolic: 180,
  heart_rate: 100,
  spo2: 92,
} as const;
