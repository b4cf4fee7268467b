"""Norm-aware planning agent with natural-language norm editing."""
from .dialogue import DialogueState, new_session, respond
from .planning import (
    Norm,
    NormSystem,
    PlanResult,
    ViolationReport,
    ViolationVector,
    compare,
    evaluate_norms,
    plan,
    plan_constrained,
    worst_regression,
)
from .vel import (
    Formula,
    GroundInstance,
    Monitor,
    Verdict,
    alpha_equal,
    compile_monitor,
    evaluate,
    ground,
    monitor_finalize,
    monitor_step,
    parse_vel,
    print_vel,
)
from .world import DomainSpec, GroundAction, Trace, WorldState, load_domain, load_domain_file

__all__ = [
    "DialogueState",
    "DomainSpec",
    "Formula",
    "GroundAction",
    "GroundInstance",
    "Monitor",
    "Norm",
    "NormSystem",
    "PlanResult",
    "Trace",
    "Verdict",
    "ViolationReport",
    "ViolationVector",
    "WorldState",
    "alpha_equal",
    "compare",
    "compile_monitor",
    "evaluate",
    "evaluate_norms",
    "ground",
    "load_domain",
    "load_domain_file",
    "monitor_finalize",
    "monitor_step",
    "new_session",
    "parse_vel",
    "plan",
    "plan_constrained",
    "print_vel",
    "respond",
    "worst_regression",
]
