/**
 * Typed fetch client for the annotation service.
 *
 * Non-2xx responses raise ApiError with the HTTP status and the
 * service's detail message; network failures raise OfflineError so the
 * UI can distinguish "the server said no" from "there is no server".
 */

import type {
  CreateSessionBody,
  CreateSessionResult,
  DecisionBody,
  DecisionResult,
  ExportPayload,
  MetricsPayload,
  NextPayload,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class OfflineError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
  }
}

export type NextResult =
  | { status: "target"; payload: NextPayload }
  | { status: "exhausted" };

/** What the controller needs from the service (fakeable in tests). */
export interface AnnotationApi {
  next(sessionId: string): Promise<NextResult>;
  decide(sessionId: string, body: DecisionBody): Promise<DecisionResult>;
}

export class ApiClient implements AnnotationApi {
  private readonly base: string;

  constructor(
    baseUrl: string,
    private readonly fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {
    this.base = baseUrl.replace(/\/+$/, "");
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.base}${path}`, init);
    } catch (cause) {
      throw new OfflineError(cause);
    }
    if (!response.ok && response.status !== 204) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") {
          detail = body.detail;
        } else if (body) {
          detail = JSON.stringify(body.detail ?? body);
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  private post(path: string, body: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async listSessions(): Promise<SessionSummary[]> {
    return (await this.request("/sessions")).json();
  }

  async createSession(body: CreateSessionBody): Promise<CreateSessionResult> {
    return (await this.post("/sessions", body)).json();
  }

  async next(sessionId: string): Promise<NextResult> {
    const response = await this.request(`/sessions/${sessionId}/next`);
    if (response.status === 204) {
      return { status: "exhausted" };
    }
    return { status: "target", payload: await response.json() };
  }

  async decide(sessionId: string, body: DecisionBody): Promise<DecisionResult> {
    return (await this.post(`/sessions/${sessionId}/decision`, body)).json();
  }

  async metrics(sessionId: string): Promise<MetricsPayload> {
    return (await this.request(`/sessions/${sessionId}/metrics`)).json();
  }

  async exportClusters(sessionId: string): Promise<ExportPayload> {
    return (await this.request(`/sessions/${sessionId}/export`)).json();
  }
}
