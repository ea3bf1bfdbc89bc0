/** HTTP client for the session API.
 *
 * Network failures retry with exponential backoff. Answers are guarded by
 * an idempotency key: after a failed POST whose outcome is unknown, the
 * client first re-reads the session; if the phase has already moved past
 * the question, the answer was delivered and is not sent again.
 */

import type { AnswerBody, ApiErrorDoc, CreateSessionBody, SessionDoc, TraceLineDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    public detail: string,
  ) {
    super(`${kind}: ${detail}`);
  }
}

export interface ApiOptions {
  baseUrl: string;
  fetchImpl?: typeof fetch;
  maxRetries?: number;
  backoffMs?: number;
  sleeper?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class SessionApi {
  private fetchImpl: typeof fetch;
  private maxRetries: number;
  private backoffMs: number;
  private sleep: (ms: number) => Promise<void>;
  readonly baseUrl: string;

  constructor(opts: ApiOptions) {
    this.baseUrl = opts.baseUrl.replace(/\/$/, "");
    this.fetchImpl = opts.fetchImpl ?? fetch;
    this.maxRetries = opts.maxRetries ?? 3;
    this.backoffMs = opts.backoffMs ?? 200;
    this.sleep = opts.sleeper ?? defaultSleep;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let lastError: unknown;
    for (let attempt = 0; attempt <= this.maxRetries; attempt++) {
      if (attempt > 0) {
        await this.sleep(this.backoffMs * 2 ** (attempt - 1));
      }
      let response: Response;
      try {
        response = await this.fetchImpl(`${this.baseUrl}${path}`, {
          method,
          headers: body === undefined ? {} : { "content-type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (err) {
        lastError = err; // network failure: retry with backoff
        continue;
      }
      if (!response.ok) {
        const doc = (await response.json().catch(() => null)) as ApiErrorDoc | null;
        throw new ApiError(
          response.status,
          doc?.kind ?? "http",
          doc?.detail ?? response.statusText,
        );
      }
      return (await response.json()) as T;
    }
    throw new ApiError(0, "network", `request failed after retries: ${String(lastError)}`);
  }

  private async requestText(path: string): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, { method: "GET" });
    if (!response.ok) {
      const doc = (await response.json().catch(() => null)) as ApiErrorDoc | null;
      throw new ApiError(response.status, doc?.kind ?? "http", doc?.detail ?? response.statusText);
    }
    return await response.text();
  }

  healthz(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  createSession(body: CreateSessionBody): Promise<SessionDoc> {
    return this.request("POST", "/sessions", body);
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request("GET", `/sessions/${id}`);
  }

  /** Submit an answer exactly once per question.
   *
   * On an ambiguous network failure the session is re-read: a phase other
   * than awaiting_answer means the previous POST landed, so the current
   * state is returned instead of re-posting.
   */
  async answer(id: string, body: AnswerBody, questionKey: string): Promise<SessionDoc> {
    const payload = { ...body, idempotency_key: questionKey };
    let lastError: unknown;
    for (let attempt = 0; attempt <= this.maxRetries; attempt++) {
      if (attempt > 0) {
        await this.sleep(this.backoffMs * 2 ** (attempt - 1));
        const current = await this.getSession(id);
        if (current.phase !== "awaiting_answer") {
          return current; // delivered on an earlier attempt
        }
      }
      let response: Response;
      try {
        response = await this.fetchImpl(`${this.baseUrl}/sessions/${id}/answer`, {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify(payload),
        });
      } catch (err) {
        lastError = err;
        continue;
      }
      if (!response.ok) {
        const doc = (await response.json().catch(() => null)) as ApiErrorDoc | null;
        throw new ApiError(
          response.status,
          doc?.kind ?? "http",
          doc?.detail ?? response.statusText,
        );
      }
      return (await response.json()) as SessionDoc;
    }
    throw new ApiError(0, "network", `answer failed after retries: ${String(lastError)}`);
  }

  step(id: string): Promise<SessionDoc> {
    return this.request("POST", `/sessions/${id}/step`);
  }

  fork(id: string, iteration: number): Promise<SessionDoc> {
    return this.request("POST", "/sessions", { fork: { session_id: id, iteration } });
  }

  report(id: string): Promise<unknown> {
    return this.request("GET", `/sessions/${id}/report`);
  }

  async trace(id: string): Promise<TraceLineDoc[]> {
    const text = await this.requestText(`/sessions/${id}/trace`);
    return text
      .split("\n")
      .filter((line) => line.trim().length > 0)
      .map((line) => JSON.parse(line) as TraceLineDoc);
  }
}
