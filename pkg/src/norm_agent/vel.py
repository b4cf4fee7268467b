"""Quantified G/F temporal formulas over finite traces.

A formula is a quantifier prefix over a single "always" (G) or "eventually"
(F) operator applied to a possibly negated conjunction of possibly negated
atoms of arity 0 or 1.  Formulas are evaluated against finite traces of
ground-atom sets, either directly or incrementally through monitors whose
status can only move from pending to an absorbing satisfied/violated state.
"""
from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

FORALL = "forall"
EXISTS = "exists"
ALWAYS = "G"
EVENTUALLY = "F"

QUANTIFIERS = (FORALL, EXISTS)
OPERATORS = (ALWAYS, EVENTUALLY)

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class VelError(Exception):
    """Base error for formula construction, parsing, and evaluation."""


class VelSyntaxError(VelError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class VelBindingError(VelError):
    """Unbound, duplicate, or unused quantified variable."""


class GroundingError(VelError):
    """Raised when grounding a quantified formula over no objects."""


class UnboundObjectError(VelError):
    """An instance references an object outside its grounding universe."""


def _check_name(name: str, what: str) -> None:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise VelError(f"{what} must be a nonempty alphanumeric string, got {name!r}")


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name, "variable")


@dataclass(frozen=True)
class Obj:
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name, "object")


Term = Var | Obj


@dataclass(frozen=True)
class Atom:
    predicate: str
    argument: Term | None = None

    def __post_init__(self) -> None:
        _check_name(self.predicate, "predicate")
        if self.argument is not None and not isinstance(self.argument, (Var, Obj)):
            raise VelError(f"atom argument must be Var or Obj, got {self.argument!r}")


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False


@dataclass(frozen=True)
class Conjunction:
    """Ordered literals; order matters for surface realization, not semantics."""

    literals: tuple[Literal, ...]
    negated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "literals", tuple(self.literals))
        if not self.literals:
            raise VelError("conjunction must contain at least one literal")


@dataclass(frozen=True)
class Formula:
    prefix: tuple[tuple[str, str], ...]
    operator: str
    body: Conjunction

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(tuple(p) for p in self.prefix))
        if self.operator not in OPERATORS:
            raise VelError(f"operator must be G or F, got {self.operator!r}")
        seen: set[str] = set()
        for quant, var in self.prefix:
            if quant not in QUANTIFIERS:
                raise VelError(f"unknown quantifier {quant!r}")
            _check_name(var, "variable")
            if var in seen:
                raise VelBindingError(f"duplicate quantified variable {var!r}")
            seen.add(var)
        used = {t.name for t in self._terms() if isinstance(t, Var)}
        for name in sorted(used - seen):
            raise VelBindingError(f"unbound variable {name!r}")
        for quant, var in self.prefix:
            if var not in used:
                raise VelBindingError(f"quantified variable {var!r} does not occur in the body")

    def _terms(self) -> Iterable[Term]:
        for lit in self.body.literals:
            if lit.atom.argument is not None:
                yield lit.atom.argument

    @property
    def forall_vars(self) -> tuple[str, ...]:
        return tuple(v for q, v in self.prefix if q == FORALL)

    @property
    def exists_vars(self) -> tuple[str, ...]:
        return tuple(v for q, v in self.prefix if q == EXISTS)

    def constants(self) -> tuple[str, ...]:
        return tuple(t.name for t in self._terms() if isinstance(t, Obj))


# ---------------------------------------------------------------------------
# Concrete syntax

_TOKEN_RE = re.compile(
    r"(?P<name>[A-Za-z0-9_]+)|(?P<quoted>\"[A-Za-z0-9_]+\")|(?P<sym>[().&!])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise VelSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup or "sym"
        tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self._tokens = _tokenize(text)
        self._index = 0

    def peek(self, ahead: int = 0) -> tuple[str, str, int]:
        return self._tokens[min(self._index + ahead, len(self._tokens) - 1)]

    def advance(self) -> tuple[str, str, int]:
        token = self._tokens[self._index]
        if token[0] != "eof":
            self._index += 1
        return token

    def expect(self, kind: str, value: str | None = None) -> str:
        got_kind, got_value, pos = self.peek()
        if got_kind != kind or (value is not None and got_value != value):
            wanted = value if value is not None else kind
            shown = got_value if got_value else "end of input"
            raise VelSyntaxError(f"expected {wanted!r}, got {shown!r}", pos)
        self.advance()
        return got_value


def _parse_term(parser: _Parser) -> Term:
    kind, value, pos = parser.peek()
    if kind == "name":
        parser.advance()
        return Var(value)
    if kind == "quoted":
        parser.advance()
        return Obj(value[1:-1])
    raise VelSyntaxError(f"expected a term, got {value or 'end of input'!r}", pos)


def _parse_literal(parser: _Parser) -> Literal:
    negated = False
    if parser.peek()[1] == "!":
        parser.advance()
        negated = True
    kind, value, pos = parser.peek()
    if kind != "name":
        raise VelSyntaxError(f"expected a predicate, got {value or 'end of input'!r}", pos)
    parser.advance()
    argument: Term | None = None
    if parser.peek()[1] == "(":
        parser.advance()
        argument = _parse_term(parser)
        parser.expect("sym", ")")
    return Literal(Atom(value, argument), negated)


def _parse_body(parser: _Parser) -> Conjunction:
    kind, value, _ = parser.peek()
    negated = False
    if value == "!" and parser.peek(1)[1] == "(":
        parser.advance()
        negated = True
    if parser.peek()[1] == "(":
        parser.advance()
        literals = [_parse_literal(parser)]
        while parser.peek()[1] == "&":
            parser.advance()
            literals.append(_parse_literal(parser))
        parser.expect("sym", ")")
        return Conjunction(tuple(literals), negated)
    # Bare single literal, possibly negated at the literal level.
    return Conjunction((_parse_literal(parser),), False)


def parse_vel(text: str) -> Formula:
    """Parse concrete syntax like ``forall x. G !(leave & holding(x))``.

    Bare identifiers in argument position are variables and must be bound by
    the prefix; object constants are written double-quoted.
    """
    parser = _Parser(text)
    prefix: list[tuple[str, str]] = []
    while parser.peek()[0] == "name" and parser.peek()[1] in QUANTIFIERS:
        quant = parser.advance()[1]
        kind, var, pos = parser.peek()
        if kind != "name":
            raise VelSyntaxError("expected a variable after quantifier", pos)
        parser.advance()
        parser.expect("sym", ".")
        prefix.append((quant, var))
    kind, op, pos = parser.peek()
    if kind != "name" or op not in OPERATORS:
        raise VelSyntaxError(f"expected operator G or F, got {op or 'end of input'!r}", pos)
    parser.advance()
    body = _parse_body(parser)
    kind, value, pos = parser.peek()
    if kind != "eof":
        raise VelSyntaxError(f"unexpected trailing input {value!r}", pos)
    return Formula(tuple(prefix), op, body)


def _term_str(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    return f'"{term.name}"'


def _literal_str(lit: Literal) -> str:
    text = lit.atom.predicate
    if lit.atom.argument is not None:
        text += f"({_term_str(lit.atom.argument)})"
    return ("!" if lit.negated else "") + text


def print_vel(formula: Formula) -> str:
    """Canonical concrete syntax; ``parse_vel(print_vel(f))`` equals ``f``."""
    parts = [f"{quant} {var}. " for quant, var in formula.prefix]
    body = " & ".join(_literal_str(lit) for lit in formula.body.literals)
    neg = "!" if formula.body.negated else ""
    return "".join(parts) + f"{formula.operator} {neg}({body})"


def alpha_equal(a: Formula, b: Formula) -> bool:
    """Structural equality up to bound-variable renaming and literal order."""
    if a.operator != b.operator or len(a.prefix) != len(b.prefix):
        return False
    if any(qa != qb for (qa, _), (qb, _) in zip(a.prefix, b.prefix)):
        return False
    if a.body.negated != b.body.negated:
        return False
    if len(a.body.literals) != len(b.body.literals):
        return False
    rename_a = {var: f"_{i}" for i, (_, var) in enumerate(a.prefix)}
    rename_b = {var: f"_{i}" for i, (_, var) in enumerate(b.prefix)}

    def keyed(conj: Conjunction, renaming: dict[str, str]) -> Counter:
        keys: Counter = Counter()
        for lit in conj.literals:
            term = lit.atom.argument
            if isinstance(term, Var):
                key: tuple | None = ("var", renaming[term.name])
            elif isinstance(term, Obj):
                key = ("obj", term.name)
            else:
                key = None
            keys[(lit.atom.predicate, key, lit.negated)] += 1
        return keys

    return keyed(a.body, rename_a) == keyed(b.body, rename_b)


# ---------------------------------------------------------------------------
# Grounding and evaluation

@dataclass(frozen=True)
class GroundInstance:
    """One countable instance of a formula: a binding of its forall variables.

    ``universe`` is the object pool residual existential variables range over.
    """

    source: Formula
    binding: tuple[tuple[str, str], ...]
    residual: tuple[str, ...] = ()
    universe: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "binding", tuple(tuple(b) for b in self.binding))
        object.__setattr__(self, "residual", tuple(self.residual))
        object.__setattr__(self, "universe", tuple(self.universe))

    def binding_map(self) -> dict[str, str]:
        return dict(self.binding)


def ground(formula: Formula, objects: Sequence[str]) -> list[GroundInstance]:
    """One instance per assignment of forall variables to objects, in
    declaration order; existential variables stay residual."""
    objects = tuple(objects)
    if formula.prefix and not objects:
        raise GroundingError("cannot ground a quantified formula over an empty object list")
    foralls = formula.forall_vars
    residual = formula.exists_vars
    instances = []
    for combo in itertools.product(objects, repeat=len(foralls)):
        instances.append(GroundInstance(formula, tuple(zip(foralls, combo)), residual, objects))
    return instances


class VerdictStatus(Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    witness: int | None = None


def _state_atoms(state) -> frozenset:
    return state.atoms if hasattr(state, "atoms") else state


def _trace_states(trace) -> Sequence:
    return trace.states if hasattr(trace, "states") else trace


def _check_objects(inst: GroundInstance) -> None:
    known = set(inst.universe)
    for var, obj in inst.binding:
        if obj not in known:
            raise UnboundObjectError(f"binding {var}={obj} references an unknown object")
    for name in inst.source.constants():
        if name not in known:
            raise UnboundObjectError(f"atom references unknown object {name!r}")


def _literal_holds(lit: Literal, subst: dict[str, str], atoms) -> bool:
    term = lit.atom.argument
    if isinstance(term, Var):
        term = Obj(subst[term.name])
    present = Atom(lit.atom.predicate, term) in atoms
    return present != lit.negated


def instance_body_holds(inst: GroundInstance, atoms) -> bool:
    """Body truth at a single state.  Residual existentials are witnessed
    per state: the body holds if some object assignment makes it hold here."""
    body = inst.source.body
    base = inst.binding_map()
    pools = [inst.universe] * len(inst.residual)
    for combo in itertools.product(*pools):
        subst = dict(base)
        subst.update(zip(inst.residual, combo))
        value = all(_literal_holds(lit, subst, atoms) for lit in body.literals)
        if body.negated:
            value = not value
        if value:
            return True
    return False


def evaluate(inst: GroundInstance, trace) -> Verdict:
    """Direct finite-trace evaluation.

    G: satisfied iff the body holds at every state; the witness of a
    violation is the index of the first failing state.  F: satisfied iff
    the body holds at some state.
    """
    states = _trace_states(trace)
    if not len(states):
        raise VelError("trace must contain at least the initial state")
    _check_objects(inst)
    if inst.source.operator == ALWAYS:
        for index, state in enumerate(states):
            if not instance_body_holds(inst, _state_atoms(state)):
                return Verdict(VerdictStatus.VIOLATED, witness=index)
        return Verdict(VerdictStatus.SATISFIED)
    for state in states:
        if instance_body_holds(inst, _state_atoms(state)):
            return Verdict(VerdictStatus.SATISFIED)
    return Verdict(VerdictStatus.VIOLATED)


# ---------------------------------------------------------------------------
# Monitors

class MonitorState(Enum):
    PENDING = "pending"
    SATISFIED_FOREVER = "satisfied-forever"
    VIOLATED_FOREVER = "violated-forever"


@dataclass(frozen=True)
class Monitor:
    instance: GroundInstance
    state: MonitorState = MonitorState.PENDING
    witness: int | None = None
    steps: int = 0


def compile_monitor(inst: GroundInstance) -> Monitor:
    _check_objects(inst)
    return Monitor(inst)


def monitor_step(monitor: Monitor, state) -> Monitor:
    """Feed one trace state.  Absorbing states never change again."""
    if monitor.state is not MonitorState.PENDING:
        return monitor
    atoms = _state_atoms(state)
    holds = instance_body_holds(monitor.instance, atoms)
    operator = monitor.instance.source.operator
    if operator == ALWAYS and not holds:
        return Monitor(monitor.instance, MonitorState.VIOLATED_FOREVER, monitor.steps, monitor.steps + 1)
    if operator == EVENTUALLY and holds:
        return Monitor(monitor.instance, MonitorState.SATISFIED_FOREVER, None, monitor.steps + 1)
    return Monitor(monitor.instance, MonitorState.PENDING, None, monitor.steps + 1)


def monitor_finalize(monitor: Monitor) -> Verdict:
    """End of trace: pending G instances are satisfied, pending F violated."""
    if monitor.state is MonitorState.VIOLATED_FOREVER:
        return Verdict(VerdictStatus.VIOLATED, witness=monitor.witness)
    if monitor.state is MonitorState.SATISFIED_FOREVER:
        return Verdict(VerdictStatus.SATISFIED)
    if monitor.instance.source.operator == ALWAYS:
        return Verdict(VerdictStatus.SATISFIED)
    return Verdict(VerdictStatus.VIOLATED)
