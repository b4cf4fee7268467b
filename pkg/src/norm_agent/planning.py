"""Planning that maximally satisfies prioritized norms.

A norm system assigns each formula a unique rank; outcomes are compared by
their violation vectors, counts of violated instances ordered by descending
rank and compared lexicographically.  The planner searches the product of
world states and monitor statuses over all complete episodes (ending with
the terminal action, within the horizon) and returns the best one, breaking
ties by episode length and then by canonical action order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .vel import (
    ALWAYS,
    EVENTUALLY,
    Formula,
    GroundInstance,
    MonitorState,
    Verdict,
    VerdictStatus,
    alpha_equal,
    evaluate,
    ground,
    instance_body_holds,
)
from .world import DomainSpec, GroundAction, Trace, apply, applicable, ground_actions, initial_state, rollout

ORIGIN_INITIAL = "initial"
ORIGIN_USER = "user-added"


class PlanningError(Exception):
    pass


@dataclass(frozen=True)
class Norm:
    formula: Formula
    rank: int
    origin: str = ORIGIN_INITIAL
    index: int = 0

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise PlanningError("norm rank must be positive")


@dataclass(frozen=True)
class NormSystem:
    """Norms in insertion order; ranks are unique, higher rank wins."""

    norms: tuple[Norm, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "norms", tuple(self.norms))
        ranks = [norm.rank for norm in self.norms]
        if len(set(ranks)) != len(ranks):
            raise PlanningError("norm ranks must be unique")
        indices = [norm.index for norm in self.norms]
        if len(set(indices)) != len(indices):
            raise PlanningError("norm insertion indices must be unique")

    def by_rank_desc(self) -> tuple[Norm, ...]:
        return tuple(sorted(self.norms, key=lambda norm: -norm.rank))

    @property
    def max_rank(self) -> int:
        return max((norm.rank for norm in self.norms), default=0)

    @property
    def max_index(self) -> int:
        return max((norm.index for norm in self.norms), default=-1)

    def add(self, norm: Norm) -> "NormSystem":
        return NormSystem(self.norms + (norm,))

    def remove_alpha(self, formula: Formula) -> tuple["NormSystem", Norm | None]:
        """Remove the most recently added norm alpha-equal to the formula."""
        matches = [norm for norm in self.norms if alpha_equal(norm.formula, formula)]
        if not matches:
            return self, None
        removed = max(matches, key=lambda norm: norm.index)
        remaining = tuple(norm for norm in self.norms if norm is not removed)
        return NormSystem(remaining), removed


@dataclass(frozen=True)
class ViolationVector:
    """Violation counts ordered by descending norm rank."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        if any(count < 0 for count in self.counts):
            raise PlanningError("violation counts must be non-negative")


def compare(a: ViolationVector, b: ViolationVector) -> int:
    """Lexicographic comparison: -1 when a is better, 0 equal, 1 when worse."""
    if len(a.counts) != len(b.counts):
        raise PlanningError("cannot compare vectors over different norm systems")
    if a.counts < b.counts:
        return -1
    if a.counts > b.counts:
        return 1
    return 0


@dataclass(frozen=True)
class InstanceViolation:
    binding: tuple[tuple[str, str], ...]
    verdict: Verdict

    def binding_map(self) -> dict[str, str]:
        return dict(self.binding)


@dataclass(frozen=True)
class NormViolations:
    norm: Norm
    violations: tuple[InstanceViolation, ...]


@dataclass(frozen=True)
class ViolationReport:
    """Violated instances per norm, norms in insertion order, instances in
    grounding enumeration order."""

    entries: tuple[NormViolations, ...]

    def total(self) -> int:
        return sum(len(entry.violations) for entry in self.entries)

    def for_norm(self, norm: Norm) -> tuple[InstanceViolation, ...]:
        for entry in self.entries:
            if entry.norm.index == norm.index:
                return entry.violations
        return ()


@dataclass(frozen=True)
class PlanResult:
    trace: Trace
    vector: ViolationVector
    report: ViolationReport


def evaluate_norms(
    ns: NormSystem, trace: Trace, domain: DomainSpec
) -> tuple[ViolationVector, ViolationReport]:
    """Ground every norm over the domain objects and evaluate on the trace."""
    violated: dict[int, list[InstanceViolation]] = {}
    for norm in ns.norms:
        found = []
        for inst in ground(norm.formula, domain.objects):
            verdict = evaluate(inst, trace)
            if verdict.status is VerdictStatus.VIOLATED:
                found.append(InstanceViolation(inst.binding, verdict))
        violated[norm.index] = found
    counts = tuple(len(violated[norm.index]) for norm in ns.by_rank_desc())
    entries = tuple(NormViolations(norm, tuple(violated[norm.index])) for norm in ns.norms)
    return ViolationVector(counts), ViolationReport(entries)


# ---------------------------------------------------------------------------
# Search

def _advance(status: MonitorState, inst: GroundInstance, atoms) -> MonitorState:
    if status is not MonitorState.PENDING:
        return status
    holds = instance_body_holds(inst, atoms)
    if inst.source.operator == ALWAYS and not holds:
        return MonitorState.VIOLATED_FOREVER
    if inst.source.operator == EVENTUALLY and holds:
        return MonitorState.SATISFIED_FOREVER
    return status


def _finalized_violated(status: MonitorState, inst: GroundInstance) -> bool:
    if status is MonitorState.VIOLATED_FOREVER:
        return True
    if status is MonitorState.PENDING and inst.source.operator == EVENTUALLY:
        return True
    return False


def _best_episode(
    domain: DomainSpec,
    norm_groups: Sequence[Sequence[GroundInstance]],
    premise_instances: Sequence[GroundInstance],
) -> tuple[GroundAction, ...] | None:
    """Layered search over (state, monitor statuses) keeping, per product
    state and depth, the prefix that is smallest in canonical action order."""
    instances: list[GroundInstance] = [inst for group in norm_groups for inst in group]
    split = len(instances)
    instances.extend(premise_instances)

    start = initial_state(domain)
    statuses0 = tuple(
        _advance(MonitorState.PENDING, inst, start.atoms) for inst in instances
    )
    actions = ground_actions(domain)
    action_index = {action: i for i, action in enumerate(actions)}

    group_sizes = [len(group) for group in norm_groups]

    def vector_of(statuses: Sequence[MonitorState]) -> tuple[int, ...]:
        counts = []
        offset = 0
        for size in group_sizes:
            counts.append(
                sum(
                    1
                    for i in range(offset, offset + size)
                    if _finalized_violated(statuses[i], instances[i])
                )
            )
            offset += size
        return tuple(counts)

    def premise_ok(statuses: Sequence[MonitorState]) -> bool:
        return not any(
            _finalized_violated(statuses[i], instances[i])
            for i in range(split, len(instances))
        )

    best_key: tuple | None = None
    best_actions: tuple[GroundAction, ...] | None = None
    layer: dict = {(start, statuses0): ()}
    for depth in range(domain.horizon):
        next_layer: dict = {}
        for (state, statuses), prefix in layer.items():
            for action in actions:
                if not applicable(state, action, domain):
                    continue
                successor = apply(state, action, domain)
                new_statuses = tuple(
                    _advance(status, inst, successor.atoms)
                    for status, inst in zip(statuses, instances)
                )
                extended = prefix + (action,)
                if successor.terminated:
                    if not premise_ok(new_statuses):
                        continue
                    key = (
                        vector_of(new_statuses),
                        len(extended),
                        tuple(action_index[a] for a in extended),
                    )
                    if best_key is None or key < best_key:
                        best_key = key
                        best_actions = extended
                else:
                    product = (successor, new_statuses)
                    if product not in next_layer:
                        next_layer[product] = extended
        layer = next_layer
        if not layer:
            break
    return best_actions


def plan(domain: DomainSpec, ns: NormSystem) -> PlanResult:
    """Best complete episode under the norm system.

    Deterministic: ties go to shorter episodes, then to the action sequence
    that is smallest in declaration order.
    """
    groups = [ground(norm.formula, domain.objects) for norm in ns.by_rank_desc()]
    best = _best_episode(domain, groups, ())
    if best is None:
        raise PlanningError("no complete episode within the horizon")
    trace = rollout(domain, best)
    vector, report = evaluate_norms(ns, trace, domain)
    return PlanResult(trace, vector, report)


def plan_constrained(
    domain: DomainSpec, ns: NormSystem, premise: Formula
) -> PlanResult | None:
    """Best complete episode that satisfies every instance of the premise.

    The premise acts as a constraint above all ranks; the reported vector
    covers only the norm system.  None when no such episode exists.
    """
    groups = [ground(norm.formula, domain.objects) for norm in ns.by_rank_desc()]
    premise_instances = ground(premise, domain.objects)
    best = _best_episode(domain, groups, premise_instances)
    if best is None:
        return None
    trace = rollout(domain, best)
    vector, report = evaluate_norms(ns, trace, domain)
    return PlanResult(trace, vector, report)


def worst_regression(
    actual: PlanResult, alt: PlanResult, ns: NormSystem
) -> tuple[tuple[Norm, dict[str, str]], tuple[Norm, dict[str, str]] | None]:
    """Explain why the alternative is worse.

    Returns the first extra violated instance of the highest-ranked norm the
    alternative does worse on, and the instance the actual outcome trades it
    against (None when the actual outcome has no excess violation anywhere).
    """
    if compare(actual.vector, alt.vector) != -1:
        raise PlanningError("the alternative is not worse than the actual outcome")
    order = ns.by_rank_desc()

    def first_extra(
        report: ViolationReport, other: ViolationReport, norm: Norm
    ) -> dict[str, str] | None:
        other_bindings = {iv.binding for iv in other.for_norm(norm)}
        for iv in report.for_norm(norm):
            if iv.binding not in other_bindings:
                return iv.binding_map()
        return None

    worse: tuple[Norm, dict[str, str]] | None = None
    for position, norm in enumerate(order):
        if alt.vector.counts[position] > actual.vector.counts[position]:
            binding = first_extra(alt.report, actual.report, norm)
            if binding is not None:
                worse = (norm, binding)
                break
    if worse is None:
        raise PlanningError("no norm has more violations in the alternative")
    better: tuple[Norm, dict[str, str]] | None = None
    for position, norm in enumerate(order):
        if actual.vector.counts[position] > alt.vector.counts[position]:
            binding = first_extra(actual.report, alt.report, norm)
            if binding is not None:
                better = (norm, binding)
                break
    return worse, better
