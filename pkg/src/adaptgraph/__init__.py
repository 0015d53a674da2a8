"""Graphs that switch between adjacency-list and adjacency-matrix storage at run time."""

from .errors import (AdaptationAborted, AdaptGraphError, ConfigError, EdgeListParseError, GraphInputError,
                     GraphStateError, LogError, MigrationError, ParseError, PolicyParseError)
from .graph import GraphRepr, Repr, build_from_edges, density, footprint, migrate
from .policy import TransitionPolicy, bundled_policy, choose_representation, load_policy, parse_policy
from .runtime import (ChangeRequest, MemoryBudget, TriggerSchedule, realized_benefit, run_adaptive, run_fixed,
                      transition_latency)

__version__ = "0.1.0"

__all__ = [
    "AdaptGraphError", "AdaptationAborted", "ChangeRequest", "ConfigError", "EdgeListParseError", "GraphInputError",
    "GraphRepr", "GraphStateError", "LogError", "MemoryBudget", "MigrationError", "ParseError", "PolicyParseError",
    "Repr", "TransitionPolicy", "TriggerSchedule", "build_from_edges", "bundled_policy", "choose_representation",
    "density", "footprint", "load_policy", "migrate", "parse_policy", "realized_benefit", "run_adaptive",
    "run_fixed", "transition_latency",
]
