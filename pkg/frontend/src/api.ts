import type { CandidateSet, ErrorBody, Scene, SelectionRequest, Session, SessionEvent } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly round?: number,
  ) {
    super(message);
  }
}

async function errorFrom(res: Response): Promise<ApiError> {
  let body: ErrorBody;
  try {
    body = await res.json();
  } catch {
    return new ApiError(res.status, "bad_response", `HTTP ${res.status}`);
  }
  return new ApiError(res.status, body.code, body.message, body.round);
}

const GET_RETRIES = 2;

export class ApiClient {
  constructor(
    private readonly base = "",
    private readonly fetchImpl: typeof fetch = (...args) => globalThis.fetch(...args),
  ) {}

  // GETs are idempotent: transient network failures retry transparently.
  private async get(path: string): Promise<Response> {
    for (let attempt = 0; ; attempt++) {
      try {
        return await this.fetchImpl(this.base + path);
      } catch (err) {
        if (attempt >= GET_RETRIES) throw err;
      }
    }
  }

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.get(path);
    if (!res.ok) throw await errorFrom(res);
    return res.json();
  }

  // POSTs are never auto-retried; the caller resubmits only after the
  // conflict or staleness is resolved.
  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw await errorFrom(res);
    return res.json();
  }

  createSession(prompt: string, n: number): Promise<Session> {
    return this.postJson("/v1/sessions", { prompt, n });
  }

  getSession(id: string): Promise<Session> {
    return this.getJson(`/v1/sessions/${id}`);
  }

  getCandidates(id: string): Promise<CandidateSet> {
    return this.getJson(`/v1/sessions/${id}/candidates`);
  }

  async getThumbnail(id: string, candidateId: string): Promise<string> {
    const res = await this.get(`/v1/sessions/${id}/candidates/${candidateId}/thumbnail`);
    if (!res.ok) throw await errorFrom(res);
    return res.text();
  }

  postSelection(id: string, payload: SelectionRequest): Promise<Session> {
    return this.postJson(`/v1/sessions/${id}/selection`, payload);
  }

  getScene(id: string, candidateId: string): Promise<Scene> {
    return this.getJson(`/v1/sessions/${id}/scene/${candidateId}`);
  }

  async getEvents(id: string): Promise<SessionEvent[]> {
    const res = await this.get(`/v1/sessions/${id}/events`);
    if (!res.ok) throw await errorFrom(res);
    const text = await res.text();
    return text
      .split("\n")
      .filter((line) => line.trim() !== "")
      .map((line) => JSON.parse(line) as SessionEvent);
  }
}
