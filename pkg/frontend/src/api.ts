import type { SessionRecord, UtteranceResponse } from "./types.js";

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface SessionApi {
  createSession(): Promise<string>;
  getSession(id: string): Promise<SessionRecord>;
  sendUtterance(id: string, text: string): Promise<UtteranceResponse>;
  deleteSession(id: string): Promise<void>;
}

async function errorDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { error?: unknown };
    if (typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body, fall through
  }
  return `request failed with status ${res.status}`;
}

export class Api implements SessionApi {
  private readonly baseUrl: string;

  constructor(
    baseUrl: string,
    private readonly fetchFn: FetchFn = (input, init) => fetch(input, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) throw new ApiError(res.status, await errorDetail(res));
    return res;
  }

  async createSession(): Promise<string> {
    const res = await this.request("/sessions", { method: "POST" });
    const body = (await res.json()) as { id: string };
    return body.id;
  }

  async getSession(id: string): Promise<SessionRecord> {
    const res = await this.request(`/sessions/${id}`);
    return (await res.json()) as SessionRecord;
  }

  async sendUtterance(id: string, text: string): Promise<UtteranceResponse> {
    const res = await this.request(`/sessions/${id}/utterances`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return (await res.json()) as UtteranceResponse;
  }

  async deleteSession(id: string): Promise<void> {
    await this.request(`/sessions/${id}`, { method: "DELETE" });
  }
}
