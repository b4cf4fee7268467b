import { ApiError } from "./api.js";
import type { SessionApi } from "./api.js";
import type { SessionState } from "./types.js";

export interface ChatLine {
  kind: "human" | "agent" | "error";
  text: string;
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

/**
 * Client-side mirror of one service session.
 *
 * Holds the transcript, the last state payload, and the request flags the
 * view needs. The state is stored exactly as the service sent it; nothing
 * in here recomputes norms, traces, or violations.
 */
export class UiSession {
  id: string | null = null;
  lines: ChatLine[] = [];
  state: SessionState | null = null;
  pending = false;
  connectionError: string | null = null;

  private listeners: Array<() => void> = [];

  constructor(private readonly api: SessionApi) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Creates a fresh session and loads its initial state. */
  async connect(): Promise<boolean> {
    this.pending = true;
    this.connectionError = null;
    this.notify();
    try {
      const id = await this.api.createSession();
      const record = await this.api.getSession(id);
      this.id = record.id;
      this.lines = record.transcript.map((entry) => ({
        kind: entry.speaker,
        text: entry.text,
      }));
      this.state = record.state;
      return true;
    } catch (err) {
      this.connectionError = describe(err);
      return false;
    } finally {
      this.pending = false;
      this.notify();
    }
  }

  /**
   * Posts one utterance and swaps in the returned state.
   *
   * Returns false when the call is ignored (blank text, no session, or a
   * request already in flight; one request at a time per session) or when
   * the service rejected it. Rejections are appended as error lines so
   * they show up inline in the chat.
   */
  async send(text: string): Promise<boolean> {
    const trimmed = text.trim();
    if (this.pending || this.id === null || trimmed === "") return false;
    this.pending = true;
    this.notify();
    try {
      const response = await this.api.sendUtterance(this.id, trimmed);
      this.lines.push({ kind: "human", text: trimmed });
      this.lines.push({ kind: "agent", text: response.reply });
      this.state = response.state;
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.lines.push({ kind: "human", text: trimmed });
        this.lines.push({ kind: "error", text: describe(err) });
      } else {
        this.connectionError = describe(err);
      }
      return false;
    } finally {
      this.pending = false;
      this.notify();
    }
  }

  dismissError(): void {
    this.connectionError = null;
    this.notify();
  }
}
