"""Surface realization of norms, traces, violations, and comparisons.

Realization is template-based and deterministic.  A conjunction renders as a
main verb phrase, "while" gerund phrases for further conjuncts, and relative
clauses ("which I have not bought") for literals that share their argument
with an earlier conjunct.  Actual-mood relative clauses use the present
perfect, counterfactual ones the past perfect.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .nlu import OBJ_SLOT, QUANT_VAR, Lexicon
from .planning import Norm, NormSystem, ViolationReport
from .vel import (
    ALWAYS,
    EVENTUALLY,
    EXISTS,
    FORALL,
    Conjunction,
    Formula,
    Literal,
    Obj,
    Term,
    Var,
)
from .world import Trace


class Mood(Enum):
    NORM_PRESENT = "norm-present"
    NORM_HYPOTHETICAL = "norm-hypothetical"
    PAST_FACTUAL = "past-factual"
    PAST_COUNTERFACTUAL = "past-counterfactual"
    GERUND = "gerund"


class RealizationError(Exception):
    pass


def _quant_word(quantifier: str, positive: bool) -> str:
    if quantifier == EXISTS:
        return "something"
    return "everything" if positive else "anything"


def _surface_map(
    formula: Formula, binding: Mapping[str, str] | None, positive: bool, lexicon: Lexicon
) -> dict[str, str]:
    """Surface text per variable: bound variables name their object, the
    rest render as quantifier words."""
    binding = binding or {}
    quantifiers = {var: quant for quant, var in formula.prefix}
    surfaces: dict[str, str] = {}
    for _, var in formula.prefix:
        if var in binding:
            surfaces[var] = lexicon.noun_phrase(binding[var])
        else:
            surfaces[var] = _quant_word(quantifiers[var], positive)
    return surfaces


def _term_surface(term: Term, surfaces: Mapping[str, str], lexicon: Lexicon) -> str:
    if isinstance(term, Var):
        try:
            return surfaces[term.name]
        except KeyError:
            raise RealizationError(f"no surface for variable {term.name!r}") from None
    return lexicon.noun_phrase(term.name)


@dataclass
class _Phrase:
    text: str
    term: Term | None


def _realize_literals(
    literals: Sequence[Literal],
    form: str,
    rel_tense: str,
    surfaces: Mapping[str, str],
    lexicon: Lexicon,
) -> str:
    """Render literals in order; a literal repeating an earlier argument
    becomes a relative clause on that argument's phrase."""
    phrases: list[_Phrase] = []
    for literal in literals:
        try:
            forms = lexicon.fluents[literal.atom.predicate]
        except KeyError:
            raise RealizationError(
                f"fluent {literal.atom.predicate!r} is not in the lexicon"
            ) from None
        term = literal.atom.argument
        host = None
        if term is not None:
            for candidate in reversed(phrases):
                if candidate.term == term:
                    host = candidate
                    break
        if host is not None:
            participle = forms.participle.replace(OBJ_SLOT, "").strip()
            negation = "not " if literal.negated else ""
            host.text += f" which I {rel_tense} {negation}{participle}"
            continue
        verb_form = form if not phrases else "gerund"
        text = forms.form(verb_form)
        if term is not None:
            text = text.replace(OBJ_SLOT, _term_surface(term, surfaces, lexicon))
        if literal.negated:
            text = "not " + text
        phrases.append(_Phrase(text, term))
    return " while ".join(phrase.text for phrase in phrases)


def _shape(formula: Formula) -> str:
    """Norm shape: prohibitions are G over a negated body, achievements F
    over a positive one.  The other two shapes get explicit adverbs."""
    if formula.operator == ALWAYS:
        return "prohibition" if formula.body.negated else "maintenance"
    return "avoidance" if formula.body.negated else "achievement"


def realize_vp(
    formula: Formula,
    form: str,
    lexicon: Lexicon,
    binding: Mapping[str, str] | None = None,
    rel_tense: str = "have",
) -> str:
    """The bare verb phrase of a formula body, without outer polarity."""
    positive = not formula.body.negated
    surfaces = _surface_map(formula, binding, positive, lexicon)
    return _realize_literals(formula.body.literals, form, rel_tense, surfaces, lexicon)


def realize_norm(norm: Norm, mood: Mood, lexicon: Lexicon) -> str:
    """One norm as an unpunctuated clause, e.g. "I must not leave the store"."""
    shape = _shape(norm.formula)
    vp = realize_vp(norm.formula, "base", lexicon)
    if mood is Mood.NORM_PRESENT:
        prefixes = {
            "achievement": "I must ",
            "prohibition": "I must not ",
            "maintenance": "I must always ",
            "avoidance": "I must at some point not ",
        }
    elif mood is Mood.NORM_HYPOTHETICAL:
        prefixes = {
            "achievement": "I would have to ",
            "prohibition": "I would have to not ",
            "maintenance": "I would have to always ",
            "avoidance": "I would have to at some point not ",
        }
    else:
        raise RealizationError(f"norms cannot be realized in mood {mood.value}")
    return prefixes[shape] + vp


def _oxford_join(items: Sequence[str]) -> str:
    """Join with a comma before the final "and", as norm and violation lists
    are phrased."""
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + ", and " + items[-1]


def _plain_join(items: Sequence[str]) -> str:
    """Join with a bare "and" before the last item, as action lists are
    phrased."""
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


def realize_norm_list(ns: NormSystem, mood: Mood, lexicon: Lexicon) -> str:
    """All norms in insertion order as one sentence."""
    if not ns.norms:
        return "I do not have any rules."
    items = [realize_norm(norm, mood, lexicon) for norm in ns.norms]
    return _oxford_join(items) + "."


def realize_trace(trace: Trace, mood: Mood, lexicon: Lexicon) -> str:
    """The episode's actions as one sentence in the requested mood."""
    if mood is Mood.PAST_FACTUAL:
        lead, form = "I ", "past"
        empty = "I did nothing."
    elif mood is Mood.PAST_COUNTERFACTUAL:
        lead, form = "I would have ", "participle"
        empty = "I would have done nothing."
    else:
        raise RealizationError(f"traces cannot be realized in mood {mood.value}")
    if not trace.actions:
        return empty
    items = []
    for action in trace.actions:
        try:
            forms = lexicon.actions[action.name]
        except KeyError:
            raise RealizationError(f"action {action.name!r} is not in the lexicon") from None
        text = forms.form(form)
        if action.argument is not None:
            text = text.replace(OBJ_SLOT, lexicon.noun_phrase(action.argument))
        items.append(text)
    return lead + _plain_join(items) + "."


def _violation_clause(
    norm: Norm, binding: Mapping[str, str], mood: Mood, lexicon: Lexicon
) -> str:
    shape = _shape(norm.formula)
    rel_tense = "have" if mood is Mood.PAST_FACTUAL else "had"
    if mood is Mood.PAST_FACTUAL:
        vp_form = {"prohibition": "past", "avoidance": "past"}.get(shape, "base")
        leads = {
            "prohibition": "I ",
            "achievement": "I did not ",
            "maintenance": "I did not always ",
            "avoidance": "I always ",
        }
    else:
        vp_form = "participle"
        leads = {
            "prohibition": "I would have ",
            "achievement": "I would not have ",
            "maintenance": "I would not always have ",
            "avoidance": "I would always have ",
        }
    vp = realize_vp(norm.formula, vp_form, lexicon, binding, rel_tense)
    return leads[shape] + vp


def realize_violations(report: ViolationReport, mood: Mood, lexicon: Lexicon) -> str:
    """Every violated instance, norms in insertion order, as one sentence."""
    if mood not in (Mood.PAST_FACTUAL, Mood.PAST_COUNTERFACTUAL):
        raise RealizationError(f"violations cannot be realized in mood {mood.value}")
    items = []
    for entry in report.entries:
        for violation in entry.violations:
            items.append(
                _violation_clause(entry.norm, violation.binding_map(), mood, lexicon)
            )
    if not items:
        if mood is Mood.PAST_FACTUAL:
            return "I did not break any rules."
        return "I would not have broken any rules."
    return _oxford_join(items) + "."


def _gerund_clause(norm: Norm, binding: Mapping[str, str], lexicon: Lexicon) -> str:
    shape = _shape(norm.formula)
    vp = realize_vp(norm.formula, "gerund", lexicon, binding, "have")
    leads = {
        "prohibition": "",
        "achievement": "not ",
        "maintenance": "not always ",
        "avoidance": "always ",
    }
    return leads[shape] + vp


def realize_comparison(
    worse: tuple[Norm, Mapping[str, str]],
    better: tuple[Norm, Mapping[str, str]] | None,
    lexicon: Lexicon,
) -> str:
    """Why the alternative loses: gerund clauses joined by "is worse than"."""
    worse_clause = _gerund_clause(worse[0], worse[1], lexicon)
    sentence = worse_clause[0].upper() + worse_clause[1:]
    if better is None:
        return sentence + " is worse."
    return sentence + " is worse than " + _gerund_clause(better[0], better[1], lexicon) + "."


WHY_WORSE = "worse"
WHY_IMPOSSIBLE = "impossible"


def _premise_participle(premise: Formula, lexicon: Lexicon) -> str:
    vp = realize_vp(premise, "participle", lexicon)
    shape = _shape(premise)
    leads = {
        "achievement": "",
        "prohibition": "not ",
        "maintenance": "always ",
        "avoidance": "at some point not ",
    }
    return leads[shape] + vp


def realize_why_answer(premise: Formula, outcome: str, lexicon: Lexicon) -> str:
    """Answer to "why did you not ..." when the premise was not acted on."""
    vp = _premise_participle(premise, lexicon)
    if outcome == WHY_IMPOSSIBLE:
        return f"I could not have {vp}."
    if outcome == WHY_WORSE:
        return f"I could have {vp} but that would have broken more important rules."
    raise RealizationError(f"unknown why-answer outcome {outcome!r}")
