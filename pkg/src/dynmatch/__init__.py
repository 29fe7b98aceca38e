"""Fully dynamic approximate maximum matching.

The main entry points are :class:`DynamicMatchingEngine` (additive
``epsilon * n`` guarantee), :class:`MultiplicativeWrapper` (``1 - epsilon``
factor), the static solver :func:`match_and_certify`, the exact oracle
:func:`exact_matching`, and the ordered induced-matching toolkit in
:mod:`dynmatch.ors`.
"""

from __future__ import annotations

from .engine import DynamicMatchingEngine, EngineConfig, Metrics
from .errors import (
    ConfigError,
    DynMatchError,
    InvalidArgument,
    InvalidEdge,
    InvalidVertex,
    InvariantViolation,
    MalformedInstance,
    StreamParseError,
)
from .graph import DifferenceView, DynamicGraph, OverlaySet, difference_matrix_probe, edge, materialize_sparse
from .matching import Matching
from .oracle import MaximalBaseline, RebuildBaseline, exact_matching
from .ors import (
    OrderedMatchingInstance,
    OrsViolation,
    greedy_ors_pack,
    hard_sequence_gen,
    pairwise_overlap_max,
    verify_ors,
    verify_rs,
)
from .sparsifier import ContractionMap, MultiplicativeWrapper, contract_edge
from .static import (
    Certificate,
    SolveOutcome,
    boosted_matching,
    degree_proxy_of,
    greedy_matching,
    match_and_certify,
    random_sampling,
    solve_induced,
)
from .streams import Event, Stream, parse_stream, parse_stream_text

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConfigError",
    "ContractionMap",
    "DifferenceView",
    "DynMatchError",
    "DynamicGraph",
    "DynamicMatchingEngine",
    "EngineConfig",
    "Event",
    "InvalidArgument",
    "InvalidEdge",
    "InvalidVertex",
    "InvariantViolation",
    "MalformedInstance",
    "Matching",
    "MaximalBaseline",
    "Metrics",
    "MultiplicativeWrapper",
    "OrderedMatchingInstance",
    "OrsViolation",
    "OverlaySet",
    "RebuildBaseline",
    "SolveOutcome",
    "Stream",
    "StreamParseError",
    "boosted_matching",
    "contract_edge",
    "degree_proxy_of",
    "difference_matrix_probe",
    "edge",
    "exact_matching",
    "greedy_matching",
    "greedy_ors_pack",
    "hard_sequence_gen",
    "match_and_certify",
    "materialize_sparse",
    "pairwise_overlap_max",
    "parse_stream",
    "parse_stream_text",
    "random_sampling",
    "solve_induced",
    "verify_ors",
    "verify_rs",
]
