"""JSON-over-HTTP session service.

POST /sessions                      -> 201 {"id": ...}
POST /sessions/{id}/utterances      -> 200 {"reply": ..., "state": {...}}
GET  /sessions/{id}                 -> 200 full session record
DELETE /sessions/{id}               -> 204

Utterances against one session are processed one at a time in arrival
order; unknown sessions give 404, malformed bodies 400.
"""
from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .dialogue import DialogueState, new_session, respond
from .nlg import Mood, realize_norm, realize_trace, realize_violations
from .vel import print_vel
from .world import DomainSpec

HUMAN = "human"
AGENT = "agent"


@dataclass
class TranscriptEntry:
    speaker: str
    text: str
    timestamp: str

    def payload(self) -> dict:
        return {"speaker": self.speaker, "text": self.text, "timestamp": self.timestamp}


@dataclass
class SessionRecord:
    id: str
    state: DialogueState
    transcript: list[TranscriptEntry] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def state_payload(st: DialogueState) -> dict:
    """Machine-readable session state: formulas and actions in their
    canonical text form, plus the realized English alongside."""
    lexicon = st.domain.lexicon
    violations = []
    for entry in st.actual.report.entries:
        for violation in entry.violations:
            violations.append(
                {
                    "norm": print_vel(entry.norm.formula),
                    "binding": violation.binding_map(),
                    "witness": violation.verdict.witness,
                }
            )
    return {
        "norms": [print_vel(norm.formula) for norm in st.norms.norms],
        "norms_text": [
            realize_norm(norm, Mood.NORM_PRESENT, lexicon) for norm in st.norms.norms
        ],
        "trace": st.actual.trace.action_strings(),
        "trace_text": realize_trace(st.actual.trace, Mood.PAST_FACTUAL, lexicon),
        "violations": violations,
        "violations_text": realize_violations(st.actual.report, Mood.PAST_FACTUAL, lexicon),
        "alt_active": st.alt is not None,
    }


class SessionStore:
    def __init__(self, domain: DomainSpec, log_path: str | Path | None = None):
        self._domain = domain
        self._sessions: dict[str, SessionRecord] = {}
        self._registry_lock = threading.Lock()
        self._log_path = Path(log_path) if log_path else None
        self._log_lock = threading.Lock()

    def create(self) -> SessionRecord:
        record = SessionRecord(id=uuid.uuid4().hex, state=new_session(self._domain))
        with self._registry_lock:
            self._sessions[record.id] = record
        return record

    def get(self, session_id: str) -> SessionRecord | None:
        with self._registry_lock:
            return self._sessions.get(session_id)

    def delete(self, session_id: str) -> bool:
        with self._registry_lock:
            return self._sessions.pop(session_id, None) is not None

    def _log(self, session_id: str, entry: TranscriptEntry) -> None:
        if self._log_path is None:
            return
        line = json.dumps({"session": session_id} | entry.payload())
        with self._log_lock:
            with self._log_path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")

    def utter(self, record: SessionRecord, text: str) -> str:
        """Process one utterance under the session lock."""
        with record.lock:
            state, reply = respond(record.state, text)
            record.state = state
            for entry in (
                TranscriptEntry(HUMAN, text, _now()),
                TranscriptEntry(AGENT, reply, _now()),
            ):
                record.transcript.append(entry)
                self._log(record.id, entry)
            return reply


def create_app(domain: DomainSpec, log_path: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="norm-agent")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(domain, log_path)
    app.state.store = store

    @app.post("/sessions")
    def create_session() -> JSONResponse:
        record = store.create()
        return JSONResponse({"id": record.id}, status_code=201)

    @app.post("/sessions/{session_id}/utterances")
    async def post_utterance(session_id: str, request: Request) -> JSONResponse:
        record = store.get(session_id)
        if record is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            return JSONResponse({"error": "body must have a string 'text'"}, status_code=400)
        reply = store.utter(record, body["text"])
        return JSONResponse({"reply": reply, "state": state_payload(record.state)})

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> JSONResponse:
        record = store.get(session_id)
        if record is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        with record.lock:
            return JSONResponse(
                {
                    "id": record.id,
                    "transcript": [entry.payload() for entry in record.transcript],
                    "state": state_payload(record.state),
                }
            )

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str) -> Response:
        if not store.delete(session_id):
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return Response(status_code=204)

    return app
