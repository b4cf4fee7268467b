"""Shared test helpers: builders, random generators, brute-force oracles."""
from __future__ import annotations

import itertools
import random
from typing import Sequence

from norm_agent.nlu import Lexicon
from norm_agent.planning import Norm, NormSystem
from norm_agent.vel import (
    ALWAYS,
    EVENTUALLY,
    EXISTS,
    FORALL,
    Atom,
    Conjunction,
    Formula,
    Literal,
    Obj,
    Var,
    VerdictStatus,
    evaluate,
    ground,
)
from norm_agent.world import (
    ActionSchema,
    DomainSpec,
    applicable,
    apply,
    ground_actions,
    initial_state,
    rollout,
)


def lit(predicate: str, argument=None, negated: bool = False) -> Literal:
    term = None
    if isinstance(argument, str):
        term = Var(argument)
    elif argument is not None:
        term = argument
    return Literal(Atom(predicate, term), negated)


def formula(prefix, operator, literals, negated=False) -> Formula:
    return Formula(tuple(prefix), operator, Conjunction(tuple(literals), negated))


# ---------------------------------------------------------------------------
# Random formulas and traces

_AST_PREDS = [("p", 0), ("q", 1), ("r", 1), ("s", 0), ("holding", 1)]
_AST_OBJECTS = ["a", "b"]


def random_ast(rng: random.Random) -> Formula:
    """Arbitrary valid formula, two quantifiers and constants included."""
    var_pool = ["x", "y"][: rng.randint(0, 2)]
    n_literals = rng.randint(1, 4)
    literals = []
    used_vars: set[str] = set()
    for _ in range(n_literals):
        pred, arity = rng.choice(_AST_PREDS)
        term = None
        if arity == 1:
            choice = rng.random()
            if var_pool and choice < 0.6:
                name = rng.choice(var_pool)
                term = Var(name)
                used_vars.add(name)
            else:
                term = Obj(rng.choice(_AST_OBJECTS))
        literals.append(Literal(Atom(pred, term), rng.random() < 0.4))
    prefix = tuple(
        (rng.choice([FORALL, EXISTS]), name) for name in var_pool if name in used_vars
    )
    return Formula(prefix, rng.choice([ALWAYS, EVENTUALLY]),
                   Conjunction(tuple(literals), rng.random() < 0.5))


def random_trace_atoms(rng: random.Random, max_states: int = 8) -> list[frozenset[Atom]]:
    """A trace as bare atom sets (the evaluator accepts those directly)."""
    all_atoms = []
    for pred, arity in _AST_PREDS:
        if arity == 0:
            all_atoms.append(Atom(pred))
        else:
            all_atoms.extend(Atom(pred, Obj(obj)) for obj in _AST_OBJECTS)
    states = []
    for _ in range(rng.randint(1, max_states)):
        states.append(frozenset(a for a in all_atoms if rng.random() < 0.35))
    return states


def random_fragment_formula(
    rng: random.Random,
    preds: Sequence[tuple[str, int]],
    objects: Sequence[str],
    max_literals: int = 3,
) -> Formula:
    """A formula over the given fluents, as a norm or premise would use."""
    n = rng.randint(1, max_literals)
    want_var = bool(objects) and rng.random() < 0.7
    literals = []
    var_used = False
    for i in range(n):
        pred, arity = rng.choice(list(preds))
        term = None
        if arity == 1:
            if want_var and (rng.random() < 0.5 or (i == n - 1 and not var_used)):
                term = Var("v")
                var_used = True
            else:
                term = Obj(rng.choice(list(objects)))
        literals.append(Literal(Atom(pred, term), rng.random() < 0.4))
    prefix = ((rng.choice([FORALL, EXISTS]), "v"),) if var_used else ()
    return Formula(prefix, rng.choice([ALWAYS, EVENTUALLY]),
                   Conjunction(tuple(literals), rng.random() < 0.5))


# ---------------------------------------------------------------------------
# Random planning domains (shopping-like, small enough to enumerate)

_EMPTY_LEXICON = Lexicon(fluents={}, actions={}, objects={})


def random_domain(rng: random.Random) -> DomainSpec:
    n_obj = rng.randint(1, 3)
    objects = tuple(f"o{i + 1}" for i in range(n_obj))
    fluents = {"holding": 1, "bought": 1, "leave": 0}
    x = Var("x")
    schemas = [
        ActionSchema(
            "pickup", "x",
            preconditions=(Literal(Atom("holding", x), True),),
            add=(Atom("holding", x),),
        ),
        ActionSchema(
            "buy", "x",
            preconditions=(Literal(Atom("holding", x), False), Literal(Atom("bought", x), True)),
            add=(Atom("bought", x),),
            cost=rng.randint(0, 2),
        ),
    ]
    with_drop = n_obj <= 2 and rng.random() < 0.4
    if with_drop:
        schemas.append(
            ActionSchema(
                "drop", "x",
                preconditions=(Literal(Atom("holding", x), False),),
                delete=(Atom("holding", x),),
            )
        )
    schemas.append(ActionSchema("leave", add=(Atom("leave"),), terminal=True))
    initial_atoms = set()
    if rng.random() < 0.3:
        initial_atoms.add(Atom("holding", Obj(rng.choice(objects))))
    horizon = rng.randint(3, 5 if (n_obj == 3 or with_drop) else 6)
    return DomainSpec(
        objects=objects,
        fluents=fluents,
        schemas=tuple(schemas),
        initial_atoms=frozenset(initial_atoms),
        initial_funds=rng.randint(0, 2),
        horizon=horizon,
        lexicon=_EMPTY_LEXICON,
    )


def random_norm_system(rng: random.Random, domain: DomainSpec, max_norms: int = 3) -> NormSystem:
    n = rng.randint(1, max_norms)
    ranks = rng.sample(range(1, 9), n)
    preds = list(domain.fluents.items())
    norms = tuple(
        Norm(random_fragment_formula(rng, preds, domain.objects), ranks[i], "initial", i)
        for i in range(n)
    )
    return NormSystem(norms)


# ---------------------------------------------------------------------------
# Brute-force planning oracle (independent enumeration, direct evaluation)

def enumerate_episodes(domain: DomainSpec):
    """Every applicable action sequence that ends with the terminal action
    within the horizon."""
    actions = ground_actions(domain)
    episodes: list[tuple] = []

    def recurse(state, prefix):
        if len(prefix) >= domain.horizon:
            return
        for action in actions:
            if not applicable(state, action, domain):
                continue
            successor = apply(state, action, domain)
            if successor.terminated:
                episodes.append(tuple(prefix) + (action,))
            else:
                recurse(successor, prefix + [action])

    recurse(initial_state(domain), [])
    return episodes


def oracle_vector(ns: NormSystem, trace, domain: DomainSpec) -> tuple[int, ...]:
    counts = []
    for norm in sorted(ns.norms, key=lambda n: -n.rank):
        violated = sum(
            1
            for inst in ground(norm.formula, domain.objects)
            if evaluate(inst, trace).status is VerdictStatus.VIOLATED
        )
        counts.append(violated)
    return tuple(counts)


def oracle_best(domain: DomainSpec, ns: NormSystem, premise=None):
    """Minimum (vector, length, canonical action order) over all complete
    episodes, or None when no (premise-satisfying) episode exists."""
    actions = ground_actions(domain)
    index = {action: i for i, action in enumerate(actions)}
    premise_instances = ground(premise, domain.objects) if premise is not None else []
    best_key = None
    best_actions = None
    for episode in enumerate_episodes(domain):
        trace = rollout(domain, episode)
        if premise_instances and any(
            evaluate(inst, trace).status is VerdictStatus.VIOLATED
            for inst in premise_instances
        ):
            continue
        key = (
            oracle_vector(ns, trace, domain),
            len(episode),
            tuple(index[action] for action in episode),
        )
        if best_key is None or key < best_key:
            best_key = key
            best_actions = episode
    if best_key is None:
        return None
    return best_key, best_actions


# ---------------------------------------------------------------------------
# Exhaustive enumeration of formulas the shopping lexicon can express

_GEN_PREDS = [("leave", 0), ("holding", 1), ("bought", 1)]
_GEN_OBJECTS = ["glasses", "watch"]


def enumerate_generable(max_literals: int = 3) -> list[Formula]:
    """Every formula the lexicon realizes and the parser reads back.

    Host literals are positive; a literal repeating an earlier argument
    renders as a relative clause and only those may be negated.  At most one
    quantified variable, at most one constant per formula, and a relative
    clause never repeats its host's predicate.
    """
    formulas: list[Formula] = []
    for positive in (True, False):
        quants = [None, FORALL] + ([EXISTS] if positive else [])
        for quant in quants:
            terms = [Var("x")] if quant else []
            terms += [Obj(obj) for obj in _GEN_OBJECTS]

            def extend(literals, used_terms, used_triples, const_used):
                if literals:
                    var_ok = quant is None or any(
                        isinstance(term, Var) for term in used_terms
                    )
                    if var_ok:
                        formulas.append(_close(literals, positive, quant))
                if len(literals) >= max_literals:
                    return
                for pred, arity in _GEN_PREDS:
                    if arity == 0:
                        candidates = [(None, False)]
                    else:
                        candidates = []
                        for term in terms:
                            if isinstance(term, Obj) and const_used and term not in used_terms:
                                continue
                            repeated = term in used_terms
                            if repeated:
                                hosts = [
                                    l for l in literals if l.atom.argument == term
                                ]
                                if any(l.atom.predicate == pred for l in hosts):
                                    continue
                                candidates.extend([(term, False), (term, True)])
                            else:
                                candidates.append((term, False))
                    for term, negated in candidates:
                        triple = (pred, term, negated)
                        if triple in used_triples:
                            continue
                        if term is None and any(
                            l.atom.predicate == pred for l in literals
                        ):
                            continue
                        extend(
                            literals + [Literal(Atom(pred, term), negated)],
                            used_terms | ({term} if term is not None else set()),
                            used_triples | {triple},
                            const_used or isinstance(term, Obj),
                        )

            extend([], frozenset(), frozenset(), False)
    return formulas


def _close(literals, positive: bool, quant) -> Formula:
    prefix = ((quant, "x"),) if quant else ()
    if positive:
        return Formula(prefix, EVENTUALLY, Conjunction(tuple(literals), False))
    return Formula(prefix, ALWAYS, Conjunction(tuple(literals), True))


# ---------------------------------------------------------------------------
# Mixed utterance pool for dialogue fuzzing

_FUZZ_VERB_PHRASES = [
    "leave the store",
    "hold the watch",
    "hold the glasses",
    "buy the watch",
    "buy the glasses",
    "hold everything",
    "hold something",
    "buy anything",
    "leave the store while holding everything",
    "leave the store while holding the watch which i have not bought",
    "hold the watch which i had bought",
    "dance",
    "hold the hat",
    "leave the store while",
    "hold everything while buying everything",
]

_FUZZ_FRAMES = [
    "You must {vp}.",
    "You must not {vp}.",
    "You should {vp}.",
    "You cannot {vp}.",
    "You can not {vp}.",
    "You may {vp}.",
    "You can {vp}.",
    "You don't have to {vp}.",
    "You have to {vp}.",
    "Suppose you had to {vp}.",
    "Suppose you couldn't {vp}.",
    "Suppose you didn't have to {vp}.",
    "Let's say you could {vp}.",
    "Why didn't you {vp}?",
    "Why did you not {vp}?",
    "Make it so.",
    "What rules do you follow?",
    "What rules would you follow?",
    "What did you do?",
    "What would you have done?",
    "What rules did you break?",
    "What rules would you have broken?",
    "How would you have done that?",
    "How would that have been worse?",
    "wibble wobble",
    "why",
    "",
    "   ",
    "You must.",
    "Suppose nothing.",
]


def fuzz_utterance(rng: random.Random) -> str:
    frame = rng.choice(_FUZZ_FRAMES)
    if "{vp}" in frame:
        return frame.format(vp=rng.choice(_FUZZ_VERB_PHRASES))
    return frame
