"""Command line interface: interactive REPL, HTTP server, and script runner."""
from __future__ import annotations

import dataclasses
import difflib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, TextIO

import click

from .dialogue import DialogueState, new_session, respond
from .nlg import Mood, realize_norm
from .vel import print_vel
from .world import DomainError, DomainSpec, load_domain_file


def _load(domain_path: str, horizon: int | None) -> DomainSpec:
    try:
        domain = load_domain_file(domain_path)
    except (OSError, DomainError) as err:
        click.echo(f"error: cannot load domain {domain_path!r}: {err}", err=True)
        sys.exit(1)
    if horizon is not None:
        domain = dataclasses.replace(domain, horizon=horizon)
    return domain


class _TranscriptLog:
    """JSON-lines transcript log, one entry per turn."""

    def __init__(self, path: str | None):
        self._handle: TextIO | None = None
        if path:
            self._handle = Path(path).open("a", encoding="utf-8")

    def write(self, speaker: str, text: str) -> None:
        if self._handle is None:
            return
        entry = {
            "speaker": speaker,
            "text": text,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        self._handle.write(json.dumps(entry) + "\n")
        self._handle.flush()


def format_state(st: DialogueState) -> str:
    """Human-readable dump of norms, trace, and violations."""
    lines = ["norms:"]
    for norm in st.norms.norms:
        lines.append(f"  [{norm.rank}] {print_vel(norm.formula)}")
        lines.append(f"      {realize_norm(norm, Mood.NORM_PRESENT, st.domain.lexicon)}")
    lines.append("trace: " + (", ".join(st.actual.trace.action_strings()) or "(empty)"))
    lines.append("violations:")
    any_violation = False
    for entry in st.actual.report.entries:
        for violation in entry.violations:
            any_violation = True
            binding = ", ".join(f"{k}={v}" for k, v in violation.binding)
            suffix = f" [{binding}]" if binding else ""
            lines.append(f"  {print_vel(entry.norm.formula)}{suffix}")
    if not any_violation:
        lines.append("  (none)")
    if st.alt is not None:
        lines.append(f"alternative: {st.alt.kind}")
    return "\n".join(lines)


def run_script(
    domain: DomainSpec, lines: Iterable[str]
) -> tuple[list[tuple[str, str]], str | None]:
    """Play a script through a fresh session.

    Lines starting with '=' are expected replies for the previous utterance;
    blank lines and '#' comments are skipped.  Returns the transcript and an
    error message for the first mismatch, if any.
    """
    state = new_session(domain)
    transcript: list[tuple[str, str]] = []
    last_reply: str | None = None
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("="):
            expected = line[1:]
            if last_reply is None:
                return transcript, f"line {number}: expectation before any utterance"
            if last_reply != expected:
                diff = "\n".join(
                    difflib.unified_diff(
                        [expected], [last_reply], "expected", "actual", lineterm=""
                    )
                )
                return transcript, f"line {number}: reply mismatch\n{diff}"
            continue
        state, last_reply = respond(state, line)
        transcript.append((line, last_reply))
    return transcript, None


@click.group()
def main() -> None:
    """Norm-aware planning agent."""


@main.command()
@click.option("--domain", "domain_path", required=True, help="Path to a domain file.")
@click.option("--horizon", type=int, default=None, help="Override the domain horizon.")
@click.option("--log", "log_path", default=None, help="Append a JSON-lines transcript here.")
def repl(domain_path: str, horizon: int | None, log_path: str | None) -> None:
    """Chat with the agent on stdin/stdout."""
    domain = _load(domain_path, horizon)
    log = _TranscriptLog(log_path)
    state = new_session(domain)
    click.echo("Session started. /state, /transcript, /quit.")
    transcript: list[tuple[str, str]] = []
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line == "/quit":
            break
        if line == "/state":
            click.echo(format_state(state))
            continue
        if line == "/transcript":
            for human, agent in transcript:
                click.echo(f"Human: {human}")
                click.echo(f"Agent: {agent}")
            continue
        state, reply = respond(state, line)
        transcript.append((line, reply))
        log.write("human", line)
        log.write("agent", reply)
        click.echo(reply)


@main.command()
@click.option("--domain", "domain_path", required=True, help="Path to a domain file.")
@click.option("--horizon", type=int, default=None, help="Override the domain horizon.")
@click.option("--bind", default="127.0.0.1:8000", help="ADDR:PORT to listen on.")
@click.option("--log", "log_path", default=None, help="Append a JSON-lines transcript here.")
def serve(domain_path: str, horizon: int | None, bind: str, log_path: str | None) -> None:
    """Run the JSON-over-HTTP session service."""
    import uvicorn

    from .service import create_app

    domain = _load(domain_path, horizon)
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        click.echo(f"error: --bind must be ADDR:PORT, got {bind!r}", err=True)
        sys.exit(1)
    app = create_app(domain, log_path)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")


@main.command()
@click.option("--domain", "domain_path", required=True, help="Path to a domain file.")
@click.option("--horizon", type=int, default=None, help="Override the domain horizon.")
@click.argument("script_file")
def script(domain_path: str, horizon: int | None, script_file: str) -> None:
    """Play a script file; '=' lines assert the previous reply."""
    domain = _load(domain_path, horizon)
    try:
        lines = Path(script_file).read_text(encoding="utf-8").splitlines()
    except OSError as err:
        click.echo(f"error: cannot read script {script_file!r}: {err}", err=True)
        sys.exit(1)
    transcript, failure = run_script(domain, lines)
    for human, agent in transcript:
        click.echo(f"Human: {human}")
        click.echo(f"Agent: {agent}")
    if failure is not None:
        click.echo(failure, err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
