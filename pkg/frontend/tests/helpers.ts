import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { SessionApi } from "../src/api.js";
import type { SessionRecord, UtteranceResponse } from "../src/types.js";

// Tests run with the package directory as cwd (vitest roots itself at the
// config file).
function fixture<T>(name: string): T {
  const path = join(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf8")) as T;
}

export const created = fixture<{ id: string }>("created.json");
export const initial = fixture<SessionRecord>("initial.json");
export const afterSuppose = fixture<UtteranceResponse>("after_suppose.json");
export const afterMakeItSo = fixture<UtteranceResponse>("after_make_it_so.json");
export const error400 = fixture<{ status: number; body: { error: string } }>(
  "error_400.json",
);

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** SessionApi stub that replays recorded payloads and logs calls. */
export class RecordedApi implements SessionApi {
  calls: string[] = [];
  utterances: Array<{ id: string; text: string }> = [];
  /** Queue of responses for sendUtterance, consumed front to back. */
  replies: Array<UtteranceResponse | Error> = [];
  failConnect: Error | null = null;
  nextId = initial.id;

  async createSession(): Promise<string> {
    this.calls.push("create");
    if (this.failConnect) throw this.failConnect;
    return this.nextId;
  }

  async getSession(id: string): Promise<SessionRecord> {
    this.calls.push(`get ${id}`);
    if (this.failConnect) throw this.failConnect;
    return { ...initial, id };
  }

  async sendUtterance(id: string, text: string): Promise<UtteranceResponse> {
    this.calls.push(`send ${text}`);
    this.utterances.push({ id, text });
    const next = this.replies.shift();
    if (next === undefined) throw new Error("no scripted reply left");
    if (next instanceof Error) throw next;
    return next;
  }

  async deleteSession(id: string): Promise<void> {
    this.calls.push(`delete ${id}`);
  }
}

export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}
