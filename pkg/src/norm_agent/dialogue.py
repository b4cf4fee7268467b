"""Dialogue management: one session's norms, behavior, and alternative context.

The actual trace is planned once at session start and never changes; real
norm edits re-evaluate it.  At most one alternative is considered at a time,
either a counterfactual (from a why-question) or a hypothetical (from a
supposition); any real norm change discards it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from . import nlg
from .nlg import Mood, realize_comparison, realize_norm_list, realize_trace, realize_violations, realize_vp, realize_why_answer
from .nlu import ACTUAL, ALTERNATIVE, Intent, IntentKind, parse_utterance
from .planning import (
    ORIGIN_USER,
    Norm,
    NormSystem,
    PlanResult,
    compare,
    evaluate_norms,
    plan,
    plan_constrained,
    worst_regression,
)
from .vel import Formula, VerdictStatus, evaluate, ground
from .world import DomainSpec

COUNTERFACTUAL = "counterfactual"
HYPOTHETICAL = "hypothetical"

REPLY_OKAY = "Okay."
REPLY_NO_SUCH_RULE = "I do not have that rule."
REPLY_NOTHING_TO_MAKE_SO = "There is nothing to make so."
REPLY_NO_ALTERNATIVE = "I am not considering any alternative."
REPLY_NOT_UNDERSTOOD = "Sorry, I don't understand."
REPLY_SHOULD_HAVE = "I should have. That would have broken fewer rules."
REPLY_NOT_WORSE = "That would not have been worse."


@dataclass(frozen=True)
class AlternativeContext:
    """The single alternative under discussion; latest one wins."""

    kind: str
    norms: NormSystem
    result: PlanResult
    premise: Formula | None = None


@dataclass(frozen=True)
class DialogueState:
    domain: DomainSpec
    norms: NormSystem
    actual: PlanResult
    alt: AlternativeContext | None = None
    next_rank: int = 1
    next_index: int = 0


def new_session(domain: DomainSpec) -> DialogueState:
    """Plan the actual episode under the domain's initial norms."""
    norms = NormSystem(
        tuple(
            Norm(formula, rank, origin="initial", index=i)
            for i, (formula, rank) in enumerate(domain.norms)
        )
    )
    actual = plan(domain, norms)
    return DialogueState(
        domain=domain,
        norms=norms,
        actual=actual,
        alt=None,
        next_rank=norms.max_rank + 1,
        next_index=norms.max_index + 1,
    )


def _reevaluated(st: DialogueState, norms: NormSystem) -> PlanResult:
    vector, report = evaluate_norms(norms, st.actual.trace, st.domain)
    return PlanResult(st.actual.trace, vector, report)


def _commit(st: DialogueState, norms: NormSystem) -> DialogueState:
    """Apply a real norm change: keep the trace, re-evaluate, drop the alt."""
    return replace(
        st,
        norms=norms,
        actual=_reevaluated(st, norms),
        alt=None,
        next_rank=max(st.next_rank, norms.max_rank + 1),
        next_index=max(st.next_index, norms.max_index + 1),
    )


def _user_norm(st: DialogueState, formula: Formula) -> Norm:
    return Norm(formula, rank=st.next_rank, origin=ORIGIN_USER, index=st.next_index)


def _alt_norms(st: DialogueState) -> NormSystem:
    assert st.alt is not None
    return st.alt.norms if st.alt.kind == HYPOTHETICAL else st.norms


def respond(st: DialogueState, utterance: str) -> tuple[DialogueState, str]:
    """Advance the session by one human utterance; returns the agent reply."""
    intent = parse_utterance(utterance, st.domain.lexicon)
    kind = intent.kind
    lexicon = st.domain.lexicon

    if kind is IntentKind.UNKNOWN:
        return st, REPLY_NOT_UNDERSTOOD

    if kind is IntentKind.ADD_NORM:
        assert intent.payload is not None
        return _commit(st, st.norms.add(_user_norm(st, intent.payload))), REPLY_OKAY

    if kind is IntentKind.REMOVE_NORM:
        assert intent.payload is not None
        remaining, removed = st.norms.remove_alpha(intent.payload)
        if removed is None:
            return st, REPLY_NO_SUCH_RULE
        return _commit(st, remaining), REPLY_OKAY

    if kind is IntentKind.SUPPOSE_ADD:
        assert intent.payload is not None
        hypothetical = st.norms.add(_user_norm(st, intent.payload))
        result = plan(st.domain, hypothetical)
        alt = AlternativeContext(HYPOTHETICAL, hypothetical, result)
        return replace(st, alt=alt), REPLY_OKAY

    if kind is IntentKind.SUPPOSE_REMOVE:
        assert intent.payload is not None
        remaining, removed = st.norms.remove_alpha(intent.payload)
        if removed is None:
            return st, REPLY_NO_SUCH_RULE
        result = plan(st.domain, remaining)
        alt = AlternativeContext(HYPOTHETICAL, remaining, result)
        return replace(st, alt=alt), REPLY_OKAY

    if kind is IntentKind.MAKE_IT_SO:
        if st.alt is None or st.alt.kind != HYPOTHETICAL:
            return st, REPLY_NOTHING_TO_MAKE_SO
        return _commit(st, st.alt.norms), REPLY_OKAY

    if kind is IntentKind.WHY_NOT:
        assert intent.payload is not None
        premise = intent.payload
        instances = ground(premise, st.domain.objects)
        verdicts = [evaluate(inst, st.actual.trace) for inst in instances]
        if all(v.status is VerdictStatus.SATISFIED for v in verdicts):
            vp = realize_vp(premise, "base", lexicon)
            return st, f"But I did {vp}."
        result = plan_constrained(st.domain, st.norms, premise)
        if result is None:
            return st, realize_why_answer(premise, nlg.WHY_IMPOSSIBLE, lexicon)
        alt = AlternativeContext(COUNTERFACTUAL, st.norms, result, premise)
        st = replace(st, alt=alt)
        if compare(st.actual.vector, result.vector) == -1:
            return st, realize_why_answer(premise, nlg.WHY_WORSE, lexicon)
        return st, REPLY_SHOULD_HAVE

    if kind is IntentKind.QUERY_NORMS:
        if intent.mood == ACTUAL:
            return st, realize_norm_list(st.norms, Mood.NORM_PRESENT, lexicon)
        if st.alt is None:
            return st, REPLY_NO_ALTERNATIVE
        return st, realize_norm_list(_alt_norms(st), Mood.NORM_HYPOTHETICAL, lexicon)

    if kind is IntentKind.QUERY_BEHAVIOR:
        if intent.mood == ACTUAL:
            return st, realize_trace(st.actual.trace, Mood.PAST_FACTUAL, lexicon)
        if st.alt is None:
            return st, REPLY_NO_ALTERNATIVE
        return st, realize_trace(st.alt.result.trace, Mood.PAST_COUNTERFACTUAL, lexicon)

    if kind is IntentKind.QUERY_VIOLATIONS:
        if intent.mood == ACTUAL:
            return st, realize_violations(st.actual.report, Mood.PAST_FACTUAL, lexicon)
        if st.alt is None:
            return st, REPLY_NO_ALTERNATIVE
        return st, realize_violations(
            st.alt.result.report, Mood.PAST_COUNTERFACTUAL, lexicon
        )

    if kind is IntentKind.HOW_DONE:
        if st.alt is None:
            return st, REPLY_NO_ALTERNATIVE
        return st, realize_trace(st.alt.result.trace, Mood.PAST_COUNTERFACTUAL, lexicon)

    if kind is IntentKind.HOW_WORSE:
        if st.alt is None:
            return st, REPLY_NO_ALTERNATIVE
        if st.alt.kind != COUNTERFACTUAL:
            return st, REPLY_NOT_WORSE
        if compare(st.actual.vector, st.alt.result.vector) != -1:
            return st, REPLY_NOT_WORSE
        worse, better = worst_regression(st.actual, st.alt.result, st.norms)
        return st, realize_comparison(worse, better, lexicon)

    return st, REPLY_NOT_UNDERSTOOD
