"""Utterance understanding: frame matching and verb-phrase parsing.

A small closed set of sentence frames picks the intent; the remainder of the
sentence is parsed compositionally against the domain lexicon into a formula.
Positive frames yield eventually-formulas, negative frames yield
always-not-formulas.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .vel import (
    ALWAYS,
    EVENTUALLY,
    EXISTS,
    FORALL,
    Atom,
    Conjunction,
    Formula,
    Literal,
    Obj,
    Term,
    Var,
)

OBJ_SLOT = "{obj}"

# The quantified variable introduced by a quantifier word.
QUANT_VAR = "x"


class LexiconError(Exception):
    pass


class VPParseError(Exception):
    """The frame was recognized but the verb phrase was not."""


@dataclass(frozen=True)
class VerbForms:
    """Verb phrase patterns; an optional single {obj} slot marks the object."""

    base: str
    past: str
    participle: str
    gerund: str

    def __post_init__(self) -> None:
        slots = {form.count(OBJ_SLOT) for form in self.all_forms()}
        if slots - {0, 1} or len(slots) != 1:
            raise LexiconError(f"inconsistent object slots in {self!r}")

    def all_forms(self) -> tuple[str, str, str, str]:
        return (self.base, self.past, self.participle, self.gerund)

    @property
    def has_slot(self) -> bool:
        return OBJ_SLOT in self.base

    def form(self, name: str) -> str:
        return getattr(self, name)


@dataclass(frozen=True)
class Lexicon:
    """Verb forms per fluent and per action, noun phrases per object."""

    fluents: Mapping[str, VerbForms]
    actions: Mapping[str, VerbForms]
    objects: Mapping[str, str]

    def __post_init__(self) -> None:
        phrases = list(self.objects.values())
        if len(set(phrases)) != len(phrases):
            raise LexiconError("object noun phrases must be unique")

    def noun_phrase(self, obj: str) -> str:
        try:
            return self.objects[obj]
        except KeyError:
            raise LexiconError(f"no noun phrase for object {obj!r}") from None


class IntentKind(Enum):
    ADD_NORM = "AddNorm"
    REMOVE_NORM = "RemoveNorm"
    SUPPOSE_ADD = "SupposeAdd"
    SUPPOSE_REMOVE = "SupposeRemove"
    MAKE_IT_SO = "MakeItSo"
    QUERY_NORMS = "QueryNorms"
    QUERY_BEHAVIOR = "QueryBehavior"
    QUERY_VIOLATIONS = "QueryViolations"
    WHY_NOT = "WhyNot"
    HOW_DONE = "HowDone"
    HOW_WORSE = "HowWorse"
    UNKNOWN = "Unknown"

ACTUAL = "actual"
ALTERNATIVE = "alternative"

_PAYLOAD_KINDS = {
    IntentKind.ADD_NORM,
    IntentKind.REMOVE_NORM,
    IntentKind.SUPPOSE_ADD,
    IntentKind.SUPPOSE_REMOVE,
    IntentKind.WHY_NOT,
}


@dataclass(frozen=True)
class Intent:
    kind: IntentKind
    payload: Formula | None = None
    mood: str = ACTUAL
    diagnostic: str | None = None

    def __post_init__(self) -> None:
        if (self.payload is not None) != (self.kind in _PAYLOAD_KINDS):
            raise ValueError(f"intent {self.kind} payload mismatch")


_FIXED_FRAMES: dict[str, tuple[IntentKind, str]] = {
    "make it so": (IntentKind.MAKE_IT_SO, ACTUAL),
    "what rules do you follow": (IntentKind.QUERY_NORMS, ACTUAL),
    "what rules would you follow": (IntentKind.QUERY_NORMS, ALTERNATIVE),
    "what rules did you break": (IntentKind.QUERY_VIOLATIONS, ACTUAL),
    "what rules would you have broken": (IntentKind.QUERY_VIOLATIONS, ALTERNATIVE),
    "what did you do": (IntentKind.QUERY_BEHAVIOR, ACTUAL),
    "what would you have done": (IntentKind.QUERY_BEHAVIOR, ALTERNATIVE),
    "how would you have done that": (IntentKind.HOW_DONE, ACTUAL),
    "how would that have been worse": (IntentKind.HOW_WORSE, ACTUAL),
}

# Prefix frames, most specific first.  "can not" (two words) revokes a
# positive norm while "cannot"/"can't" adds a negative one.
_VP_FRAMES: list[tuple[str, IntentKind, bool]] = [
    ("why did you not ", IntentKind.WHY_NOT, True),
    ("why didn't you ", IntentKind.WHY_NOT, True),
    ("you must not ", IntentKind.ADD_NORM, False),
    ("you mustn't ", IntentKind.ADD_NORM, False),
    ("you should not ", IntentKind.ADD_NORM, False),
    ("you shouldn't ", IntentKind.ADD_NORM, False),
    ("you can't ", IntentKind.ADD_NORM, False),
    ("you cannot ", IntentKind.ADD_NORM, False),
    ("you can not ", IntentKind.REMOVE_NORM, True),
    ("you don't have to ", IntentKind.REMOVE_NORM, True),
    ("you do not have to ", IntentKind.REMOVE_NORM, True),
    ("you have to not ", IntentKind.ADD_NORM, False),
    ("you must ", IntentKind.ADD_NORM, True),
    ("you should ", IntentKind.ADD_NORM, True),
    ("you have to ", IntentKind.ADD_NORM, True),
    ("you may ", IntentKind.REMOVE_NORM, False),
    ("you can ", IntentKind.REMOVE_NORM, False),
]

_SUPPOSE_MARKERS = ("suppose ", "let's say ", "lets say ")

_SUPPOSE_FRAMES: list[tuple[str, IntentKind, bool]] = [
    ("you didn't have to ", IntentKind.SUPPOSE_REMOVE, True),
    ("you did not have to ", IntentKind.SUPPOSE_REMOVE, True),
    ("you had to ", IntentKind.SUPPOSE_ADD, True),
    ("you couldn't ", IntentKind.SUPPOSE_ADD, False),
    ("you could not ", IntentKind.SUPPOSE_ADD, False),
    ("you could ", IntentKind.SUPPOSE_REMOVE, False),
]


def _normalize(text: str) -> str:
    text = text.replace("’", "'").lower()
    text = re.sub(r"\s+", " ", text).strip()
    return text.rstrip(".?! ").strip()


def parse_utterance(text: str, lexicon: Lexicon) -> Intent:
    """Map one utterance to an Intent; anything unrecognized is Unknown."""
    normalized = _normalize(text)
    if normalized in _FIXED_FRAMES:
        kind, mood = _FIXED_FRAMES[normalized]
        return Intent(kind, mood=mood)
    for marker in _SUPPOSE_MARKERS:
        if normalized.startswith(marker):
            rest = normalized[len(marker):]
            for prefix, kind, positive in _SUPPOSE_FRAMES:
                if rest.startswith(prefix):
                    return _vp_intent(kind, rest[len(prefix):], positive, lexicon)
            return Intent(IntentKind.UNKNOWN, diagnostic=f"unrecognized supposition: {rest!r}")
    for prefix, kind, positive in _VP_FRAMES:
        if normalized.startswith(prefix):
            return _vp_intent(kind, normalized[len(prefix):], positive, lexicon)
    return Intent(IntentKind.UNKNOWN)


def _vp_intent(kind: IntentKind, vp_text: str, positive: bool, lexicon: Lexicon) -> Intent:
    try:
        formula = parse_vp(vp_text, lexicon, positive)
    except VPParseError as err:
        return Intent(IntentKind.UNKNOWN, diagnostic=str(err))
    return Intent(kind, payload=formula)


# ---------------------------------------------------------------------------
# Verb phrase parsing

def _quantifier_for(word: str, positive: bool) -> str:
    # "something" under a prohibition reads as "anything": never-exists is
    # expressed as a universal over the negated body.
    if word == "something" and positive:
        return EXISTS
    return FORALL

_QUANT_WORDS = ("everything", "anything", "something")


class _ClauseParser:
    """Parses one clause: a verb phrase plus trailing relative clauses."""

    def __init__(self, lexicon: Lexicon, positive: bool):
        self.lexicon = lexicon
        self.positive = positive
        self.quant: str | None = None

    def parse(self, words: list[str], form: str) -> list[Literal]:
        for predicate, forms in self.lexicon.fluents.items():
            saved_quant = self.quant
            literals = self._try_entry(predicate, forms, words, form)
            if literals is not None:
                return literals
            self.quant = saved_quant
        raise VPParseError(f"unknown verb phrase: {' '.join(words)!r}")

    def _try_entry(
        self, predicate: str, forms: VerbForms, words: list[str], form: str
    ) -> list[Literal] | None:
        pattern = forms.form(form).split()
        if not forms.has_slot:
            if words[: len(pattern)] != pattern:
                return None
            rest = words[len(pattern):]
            if rest:
                return None
            return [Literal(Atom(predicate))]
        slot = pattern.index(OBJ_SLOT)
        before, after = pattern[:slot], pattern[slot + 1:]
        if words[: len(before)] != before:
            return None
        term, rest = self._match_noun_phrase(words[len(before):])
        if term is None:
            return None
        if rest[: len(after)] != after:
            return None
        rest = rest[len(after):]
        literals = [Literal(Atom(predicate, term))]
        while rest:
            relative, rest = self._match_relative(rest, term)
            if relative is None:
                return None
            literals.append(relative)
        return literals

    def _match_noun_phrase(self, words: list[str]) -> tuple[Term | None, list[str]]:
        if words and words[0] in _QUANT_WORDS:
            kind = _quantifier_for(words[0], self.positive)
            if self.quant is not None:
                raise VPParseError("multiple quantifier words are not supported")
            self.quant = kind
            return Var(QUANT_VAR), words[1:]
        candidates = sorted(
            self.lexicon.objects.items(), key=lambda item: -len(item[1].split())
        )
        for obj, phrase in candidates:
            phrase_words = phrase.split()
            if words[: len(phrase_words)] == phrase_words:
                return Obj(obj), words[len(phrase_words):]
        return None, words

    def _match_relative(
        self, words: list[str], host: Term
    ) -> tuple[Literal | None, list[str]]:
        # which I have [not] bought / which I had [not] bought
        if len(words) < 4 or words[0] != "which" or words[1] != "i":
            return None, words
        if words[2] not in ("have", "had"):
            return None, words
        rest = words[3:]
        negated = False
        if rest and rest[0] == "not":
            negated = True
            rest = rest[1:]
        for predicate, forms in self.lexicon.fluents.items():
            if not forms.has_slot:
                continue
            part = forms.participle.replace(OBJ_SLOT, "").split()
            if rest[: len(part)] == part:
                return Literal(Atom(predicate, host), negated), rest[len(part):]
        return None, words


def parse_vp(text: str, lexicon: Lexicon, positive: bool) -> Formula:
    """Parse a verb phrase into a formula.

    The main clause is in base form, each "while" clause in gerund form, and
    "which I have/had (not) ..." relative clauses attach to the nearest noun
    phrase.  Positive phrases become F-formulas, negative ones G-not-formulas.
    """
    words = _normalize(text).split()
    if not words:
        raise VPParseError("empty verb phrase")
    clauses: list[list[str]] = [[]]
    for word in words:
        if word == "while":
            clauses.append([])
        else:
            clauses[-1].append(word)
    if any(not clause for clause in clauses):
        raise VPParseError(f"dangling 'while' in {text!r}")
    parser = _ClauseParser(lexicon, positive)
    literals: list[Literal] = []
    for index, clause in enumerate(clauses):
        literals.extend(parser.parse(clause, "base" if index == 0 else "gerund"))
    prefix: tuple[tuple[str, str], ...] = ()
    if parser.quant is not None:
        prefix = ((parser.quant, QUANT_VAR),)
    if positive:
        return Formula(prefix, EVENTUALLY, Conjunction(tuple(literals), False))
    return Formula(prefix, ALWAYS, Conjunction(tuple(literals), True))
