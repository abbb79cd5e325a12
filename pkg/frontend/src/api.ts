/** Thin typed client over the screening service HTTP API. */

import type {
  CaptureModality,
  Diagnosis,
  EventsResponse,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }

  /** 409s are tier-order guidance to show the operator verbatim. */
  get isTierOrder(): boolean {
    return this.status === 409;
  }
}

async function request<T>(
  method: string,
  url: string,
  body?: BodyInit,
  contentType?: string,
): Promise<T> {
  const headers: Record<string, string> = {};
  if (contentType) headers["Content-Type"] = contentType;
  const resp = await fetch(url, { method, body, headers });
  const payload = (await resp.json()) as T & { error?: string };
  if (!resp.ok) {
    throw new ApiError(resp.status, payload.error ?? `HTTP ${resp.status}`);
  }
  return payload;
}

export class ScreeningApi {
  constructor(readonly base: string) {}

  createSession(): Promise<SessionSummary> {
    return request("POST", `${this.base}/v1/sessions`);
  }

  getSession(id: string): Promise<SessionSummary> {
    return request("GET", `${this.base}/v1/sessions/${id}`);
  }

  getEvents(id: string, since: number, waitSeconds = 0): Promise<EventsResponse> {
    const wait = waitSeconds > 0 ? `&wait=${waitSeconds}` : "";
    return request("GET", `${this.base}/v1/sessions/${id}/events?since=${since}${wait}`);
  }

  capture(
    id: string,
    modality: CaptureModality,
    blob: ArrayBuffer | Uint8Array | Blob,
  ): Promise<SessionSummary & { confidence: number }> {
    return request(
      "POST",
      `${this.base}/v1/sessions/${id}/capture/${modality}`,
      blob as BodyInit,
      "application/octet-stream",
    );
  }

  getDiagnosis(id: string): Promise<Diagnosis> {
    return request("GET", `${this.base}/v1/sessions/${id}/diagnosis`);
  }

  clearAlert(id: string): Promise<SessionSummary> {
    return request("POST", `${this.base}/v1/sessions/${id}/clear`);
  }
}
