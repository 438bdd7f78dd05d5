"""Exact symbolic verifier for the constant-mean-curvature conclusions
about ideal biconservative hypersurfaces in Euclidean space.

The package re-derives, with exact rational arithmetic only, the
elimination arguments showing that the two-curvature scenario forces a
minimal hypersurface, the three-curvature scenario forces constant mean
curvature, and the four-curvature scenario with constant scalar curvature
forces constant mean curvature.  Every run produces a machine-checkable
report."""

from .algebra import (
    AssumptionSet,
    Poly,
    Rational,
    RatFunc,
    VariableTable,
)
from .frame import StructureContext, build_context, sos_h_witness
from .proofscripts import (
    ProofReport,
    RunConfig,
    compare_with_fixture,
    probabilistic_fallback,
    run_case,
    run_delta2,
    run_delta3,
    run_delta4,
)

__all__ = [
    "AssumptionSet",
    "Poly",
    "ProofReport",
    "RatFunc",
    "Rational",
    "RunConfig",
    "StructureContext",
    "VariableTable",
    "build_context",
    "compare_with_fixture",
    "probabilistic_fallback",
    "run_case",
    "run_delta2",
    "run_delta3",
    "run_delta4",
    "sos_h_witness",
]

__version__ = "0.1.0"
