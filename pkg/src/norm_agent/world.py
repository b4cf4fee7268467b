"""Declarative action domains: states, ground actions, rollouts, domain files.

A domain file is a small YAML document with a ``version: 1`` header; see the
README for the field reference.  States are immutable sets of ground atoms
plus a funds counter and a terminated flag; applying the domain's single
terminal action ends the episode.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import yaml

from .nlu import Lexicon, VerbForms
from .vel import Atom, Formula, Literal, Obj, Var, VelError, parse_vel

FORMAT_VERSION = 1


class DomainError(Exception):
    """Invalid domain file or domain definition."""


class ActionError(Exception):
    """An action cannot be interpreted or applied in a state."""


class RolloutError(ActionError):
    def __init__(self, index: int, action: "GroundAction", reason: str):
        super().__init__(f"action {index} ({action}) is not applicable: {reason}")
        self.index = index
        self.action = action


@dataclass(frozen=True)
class WorldState:
    atoms: frozenset[Atom]
    funds: int
    terminated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        if self.funds < 0:
            raise DomainError("funds must be non-negative")


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameter: str | None = None
    preconditions: tuple[Literal, ...] = ()
    add: tuple[Atom, ...] = ()
    delete: tuple[Atom, ...] = ()
    cost: int = 0
    terminal: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "preconditions", tuple(self.preconditions))
        object.__setattr__(self, "add", tuple(self.add))
        object.__setattr__(self, "delete", tuple(self.delete))
        if self.cost < 0:
            raise DomainError(f"action {self.name!r} has negative cost")


@dataclass(frozen=True)
class GroundAction:
    name: str
    argument: str | None = None

    def __str__(self) -> str:
        if self.argument is None:
            return self.name
        return f"{self.name}({self.argument})"


_ACTION_TEXT_RE = re.compile(r"([A-Za-z0-9_]+)(?:\(([A-Za-z0-9_]+)\))?\Z")


def parse_action_text(text: str) -> GroundAction:
    match = _ACTION_TEXT_RE.match(text.strip())
    if match is None:
        raise ActionError(f"cannot parse action {text!r}")
    return GroundAction(match.group(1), match.group(2))


@dataclass(frozen=True)
class Trace:
    """States visited and the actions between them; one more state than actions."""

    states: tuple[WorldState, ...]
    actions: tuple[GroundAction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.states) != len(self.actions) + 1:
            raise DomainError("trace must contain one more state than actions")
        if any(state.terminated for state in self.states[:-1]):
            raise DomainError("no state before the last may be terminated")

    def action_strings(self) -> list[str]:
        return [str(action) for action in self.actions]


@dataclass(frozen=True)
class DomainSpec:
    objects: tuple[str, ...]
    fluents: Mapping[str, int]
    schemas: tuple[ActionSchema, ...]
    initial_atoms: frozenset[Atom]
    initial_funds: int
    horizon: int
    lexicon: Lexicon
    norms: tuple[tuple[Formula, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "schemas", tuple(self.schemas))
        object.__setattr__(self, "initial_atoms", frozenset(self.initial_atoms))
        object.__setattr__(self, "norms", tuple(tuple(n) for n in self.norms))
        if self.horizon < 1:
            raise DomainError("horizon must be at least 1")
        if len(set(self.objects)) != len(self.objects):
            raise DomainError("duplicate object names")
        names = [schema.name for schema in self.schemas]
        if len(set(names)) != len(names):
            raise DomainError("duplicate action names")
        terminals = [schema for schema in self.schemas if schema.terminal]
        if len(terminals) != 1:
            raise DomainError("domain must declare exactly one terminal action")

    def schema(self, name: str) -> ActionSchema:
        for schema in self.schemas:
            if schema.name == name:
                return schema
        raise ActionError(f"unknown action schema {name!r}")


def initial_state(domain: DomainSpec) -> WorldState:
    return WorldState(domain.initial_atoms, domain.initial_funds)


def ground_actions(domain: DomainSpec) -> tuple[GroundAction, ...]:
    """All ground actions in canonical order: schema declaration order,
    then object declaration order.  This order breaks planning ties."""
    out: list[GroundAction] = []
    for schema in domain.schemas:
        if schema.parameter is None:
            out.append(GroundAction(schema.name))
        else:
            out.extend(GroundAction(schema.name, obj) for obj in domain.objects)
    return tuple(out)


def _substitute(atom: Atom, parameter: str | None, argument: str | None) -> Atom:
    term = atom.argument
    if isinstance(term, Var):
        if term.name != parameter or argument is None:
            raise ActionError(f"unbound action parameter {term.name!r}")
        return Atom(atom.predicate, Obj(argument))
    return atom


def _check_pairing(schema: ActionSchema, action: GroundAction, domain: DomainSpec) -> None:
    if (schema.parameter is None) != (action.argument is None):
        raise ActionError(f"action {action} does not match schema parameter")
    if action.argument is not None and action.argument not in domain.objects:
        raise ActionError(f"unknown object {action.argument!r}")


def applicable(state: WorldState, action: GroundAction, domain: DomainSpec) -> bool:
    """True when every precondition literal holds, funds cover the cost, and
    the state is not terminated."""
    schema = domain.schema(action.name)
    _check_pairing(schema, action, domain)
    if state.terminated or state.funds < schema.cost:
        return False
    for literal in schema.preconditions:
        atom = _substitute(literal.atom, schema.parameter, action.argument)
        if (atom in state.atoms) == literal.negated:
            return False
    return True


def apply(state: WorldState, action: GroundAction, domain: DomainSpec) -> WorldState:
    """Successor state: deletes applied before adds, cost subtracted."""
    if not applicable(state, action, domain):
        raise ActionError(f"action {action} is not applicable")
    schema = domain.schema(action.name)
    atoms = set(state.atoms)
    for atom in schema.delete:
        atoms.discard(_substitute(atom, schema.parameter, action.argument))
    for atom in schema.add:
        atoms.add(_substitute(atom, schema.parameter, action.argument))
    return WorldState(frozenset(atoms), state.funds - schema.cost, schema.terminal)


def rollout(domain: DomainSpec, actions: Iterable[GroundAction]) -> Trace:
    """Deterministically replay actions from the initial state."""
    states = [initial_state(domain)]
    performed: list[GroundAction] = []
    for index, action in enumerate(actions):
        try:
            ok = applicable(states[-1], action, domain)
        except ActionError as err:
            raise RolloutError(index, action, str(err)) from err
        if not ok:
            raise RolloutError(index, action, "preconditions do not hold")
        states.append(apply(states[-1], action, domain))
        performed.append(action)
    return Trace(tuple(states), tuple(performed))


# ---------------------------------------------------------------------------
# Domain files

_LITERAL_TEXT_RE = re.compile(r"(!)?\s*([A-Za-z0-9_]+)(?:\(([A-Za-z0-9_]+)\))?\Z")


def _parse_literal_text(
    text: str, parameter: str | None, objects: Sequence[str], where: str
) -> Literal:
    match = _LITERAL_TEXT_RE.match(str(text).strip())
    if match is None:
        raise DomainError(f"cannot parse literal {text!r} in {where}")
    negated, predicate, argument = match.groups()
    term = None
    if argument is not None:
        if argument == parameter:
            term = Var(argument)
        elif argument in objects:
            term = Obj(argument)
        else:
            raise DomainError(
                f"argument {argument!r} in {where} is neither the parameter nor an object"
            )
    return Literal(Atom(predicate, term), negated == "!")


def _check_fluent(atom: Atom, fluents: Mapping[str, int], where: str) -> None:
    if atom.predicate not in fluents:
        raise DomainError(f"undeclared fluent {atom.predicate!r} in {where}")
    arity = 0 if atom.argument is None else 1
    if fluents[atom.predicate] != arity:
        raise DomainError(f"fluent {atom.predicate!r} used with wrong arity in {where}")


def _verb_forms(entry, where: str) -> VerbForms:
    if not isinstance(entry, dict):
        raise DomainError(f"lexicon entry {where} must be a mapping")
    try:
        return VerbForms(
            base=str(entry["base"]),
            past=str(entry["past"]),
            participle=str(entry["participle"]),
            gerund=str(entry["gerund"]),
        )
    except KeyError as err:
        raise DomainError(f"lexicon entry {where} is missing form {err}") from None


def _build_lexicon(raw, domain_objects, fluents, schemas) -> Lexicon:
    if not isinstance(raw, dict):
        raise DomainError("lexicon section must be a mapping")
    objects = {str(k): str(v) for k, v in (raw.get("objects") or {}).items()}
    for obj in domain_objects:
        if obj not in objects:
            raise DomainError(f"lexicon is missing a noun phrase for object {obj!r}")
    fluent_forms: dict[str, VerbForms] = {}
    for name, entry in (raw.get("fluents") or {}).items():
        fluent_forms[str(name)] = _verb_forms(entry, f"fluents.{name}")
    action_forms: dict[str, VerbForms] = {}
    for name, entry in (raw.get("actions") or {}).items():
        action_forms[str(name)] = _verb_forms(entry, f"actions.{name}")
    for name, arity in fluents.items():
        if name not in fluent_forms:
            raise DomainError(f"lexicon is missing verb forms for fluent {name!r}")
        if fluent_forms[name].has_slot != (arity == 1):
            raise DomainError(f"lexicon object slot does not match arity of fluent {name!r}")
    for schema in schemas:
        if schema.name not in action_forms:
            raise DomainError(f"lexicon is missing verb forms for action {schema.name!r}")
        if action_forms[schema.name].has_slot != (schema.parameter is not None):
            raise DomainError(
                f"lexicon object slot does not match parameter of action {schema.name!r}"
            )
    return Lexicon(fluents=fluent_forms, actions=action_forms, objects=objects)


def load_domain(text: str) -> DomainSpec:
    """Parse and validate a domain file; raises DomainError with the reason."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise DomainError(f"domain file is not valid YAML: {err}") from err
    if not isinstance(raw, dict):
        raise DomainError("domain file must be a mapping")
    if raw.get("version") != FORMAT_VERSION:
        raise DomainError(f"domain file must declare 'version: {FORMAT_VERSION}'")

    objects = tuple(str(obj) for obj in raw.get("objects") or [])
    fluents_raw = raw.get("fluents") or {}
    if not isinstance(fluents_raw, dict):
        raise DomainError("fluents section must be a mapping of name to arity")
    fluents: dict[str, int] = {}
    for name, arity in fluents_raw.items():
        if arity not in (0, 1):
            raise DomainError(f"fluent {name!r} must have arity 0 or 1")
        fluents[str(name)] = int(arity)

    schemas: list[ActionSchema] = []
    for entry in raw.get("actions") or []:
        if not isinstance(entry, dict) or "name" not in entry:
            raise DomainError("each action needs at least a name")
        name = str(entry["name"])
        parameter = entry.get("param")
        parameter = None if parameter is None else str(parameter)
        where = f"action {name!r}"
        pre = tuple(
            _parse_literal_text(item, parameter, objects, where)
            for item in entry.get("pre") or []
        )

        def effect_atoms(key: str) -> tuple[Atom, ...]:
            atoms = []
            for item in entry.get(key) or []:
                literal = _parse_literal_text(item, parameter, objects, where)
                if literal.negated:
                    raise DomainError(f"effect {item!r} in {where} must not be negated")
                atoms.append(literal.atom)
            return tuple(atoms)

        add = effect_atoms("add")
        delete = effect_atoms("del")
        for literal in pre:
            _check_fluent(literal.atom, fluents, where)
        for atom in add + delete:
            _check_fluent(atom, fluents, where)
        schemas.append(
            ActionSchema(
                name=name,
                parameter=parameter,
                preconditions=pre,
                add=add,
                delete=delete,
                cost=int(entry.get("cost") or 0),
                terminal=bool(entry.get("terminal", False)),
            )
        )

    initial_raw = raw.get("initial") or {}
    initial_atoms = set()
    for item in initial_raw.get("atoms") or []:
        literal = _parse_literal_text(item, None, objects, "initial atoms")
        if literal.negated:
            raise DomainError("initial atoms must be positive")
        _check_fluent(literal.atom, fluents, "initial atoms")
        initial_atoms.add(literal.atom)
    initial_funds = int(initial_raw.get("funds") or 0)

    norms: list[tuple[Formula, int]] = []
    ranks: set[int] = set()
    for entry in raw.get("norms") or []:
        if not isinstance(entry, dict) or "vel" not in entry or "rank" not in entry:
            raise DomainError("each norm needs 'vel' and 'rank' fields")
        try:
            formula = parse_vel(str(entry["vel"]))
        except VelError as err:
            raise DomainError(f"invalid norm {entry['vel']!r}: {err}") from err
        rank = int(entry["rank"])
        if rank < 1:
            raise DomainError("norm ranks must be positive")
        if rank in ranks:
            raise DomainError(f"duplicate norm rank {rank}")
        ranks.add(rank)
        for lit in formula.body.literals:
            _check_fluent(lit.atom, fluents, f"norm {entry['vel']!r}")
        if formula.prefix and not objects:
            raise DomainError("quantified norms require a nonempty object list")
        for const in formula.constants():
            if const not in objects:
                raise DomainError(f"norm references unknown object {const!r}")
        norms.append((formula, rank))

    lexicon = _build_lexicon(raw.get("lexicon") or {}, objects, fluents, schemas)
    return DomainSpec(
        objects=objects,
        fluents=fluents,
        schemas=tuple(schemas),
        initial_atoms=frozenset(initial_atoms),
        initial_funds=initial_funds,
        horizon=int(raw.get("horizon") or 1),
        lexicon=lexicon,
        norms=tuple(norms),
    )


def load_domain_file(path: str | Path) -> DomainSpec:
    return load_domain(Path(path).read_text(encoding="utf-8"))
