// Shapes of the session service's JSON payloads. The client renders these
// verbatim and never derives any of the facts itself.

export interface ViolationView {
  norm: string;
  binding: Record<string, string>;
  witness: number | null;
}

export interface SessionState {
  norms: string[];
  norms_text: string[];
  trace: string[];
  trace_text: string;
  violations: ViolationView[];
  violations_text: string;
  alt_active: boolean;
}

export interface TranscriptEntry {
  speaker: "human" | "agent";
  text: string;
  timestamp?: string;
}

export interface SessionRecord {
  id: string;
  transcript: TranscriptEntry[];
  state: SessionState;
}

export interface UtteranceResponse {
  reply: string;
  state: SessionState;
}
