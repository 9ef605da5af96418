"""Distributional chaos toolkit for piecewise monotonic interval maps.

Build a map from exact rational pieces (or tabulated branches), verify
the Markov and shrinking-cylinder conditions, inspect the covering graph
and its entropy, construct periodic points from admissible words, and
estimate the spectrum of minimal lower distributional functions.
"""

from .intervals import EMPTY, Interval, merge_intervals, union_covers
from .map_model import (AffineBranch, CriticalSet, DomainError, PMMap,
                        PartitionError, PartitionFinding, Piece, TableBranch,
                        ToleranceError, format_rational, parse_rational)
from .mapfile import MapSpecError, load_map, parse_map_spec, save_map, \
    serialize_map_spec
from .maps import (antichain_breakpoints, antichain_family, antichain_pair,
                   period_three_map, tent_map)
from .symbolic import (Cylinder, EnumerationLimitError, GeneratorDiagnostic,
                       MarkovResult, MarkovWitness, admissible_words,
                       count_admissible_words, cylinder, cylinders_to_csv,
                       enumerate_cylinders, generator_diagnostic, itinerary,
                       markov_check, transition_relation)
from .graph import (CoveringGraph, FStarCycle, IrreducibleComponent,
                    MarkovPreconditionError, TransitivityWitness,
                    build_covering_graph, component_cycle,
                    entropy_lower_bound, f_star_periodic_sets,
                    irreducible_components, strong_transitivity_witness)
from .periodic import (AuditEntry, AuditReport, FixedIntervalCertificate,
                       PeriodicPoint, audit_to_csv, dense_periodic_audit,
                       periodic_point_from_word)
from .distributional import (Candidate, Comparison, DFPair,
                             EmpiricalProvenance, ExactProvenance,
                             GeneratorStalledError, InfimumProvenance,
                             MinimalResult, ProbeResult, SamplerConfig,
                             SpectrumReport, StepFunction, WeakPairRecord,
                             chaos_measure, compare, default_t_grid,
                             empirical_df, exact_df, isotectic_probe,
                             minimal_elements, spectrum_estimate,
                             step_function_to_csv, weak_pair_filter,
                             weak_spectrum_estimate, worker_count, xi)

__version__ = "0.1.0"

__all__ = [
    "AffineBranch", "AuditEntry", "AuditReport", "Candidate", "Comparison",
    "CoveringGraph", "CriticalSet", "Cylinder", "DFPair", "DomainError",
    "EMPTY", "EmpiricalProvenance", "EnumerationLimitError", "ExactProvenance",
    "FStarCycle", "FixedIntervalCertificate", "GeneratorDiagnostic",
    "GeneratorStalledError", "InfimumProvenance", "Interval",
    "IrreducibleComponent", "MapSpecError", "MarkovPreconditionError",
    "MarkovResult", "MarkovWitness", "MinimalResult", "PMMap",
    "PartitionError", "PartitionFinding", "PeriodicPoint", "Piece",
    "ProbeResult", "SamplerConfig", "SpectrumReport", "StepFunction",
    "TableBranch", "ToleranceError", "TransitivityWitness", "WeakPairRecord",
    "admissible_words", "antichain_breakpoints", "antichain_family",
    "antichain_pair", "audit_to_csv", "build_covering_graph", "chaos_measure",
    "compare", "component_cycle", "count_admissible_words", "cylinder",
    "cylinders_to_csv", "default_t_grid", "dense_periodic_audit",
    "empirical_df", "entropy_lower_bound", "enumerate_cylinders", "exact_df",
    "f_star_periodic_sets", "format_rational", "generator_diagnostic",
    "irreducible_components", "isotectic_probe", "itinerary", "load_map",
    "markov_check", "merge_intervals", "minimal_elements", "parse_map_spec",
    "parse_rational", "period_three_map", "periodic_point_from_word",
    "save_map", "serialize_map_spec", "spectrum_estimate",
    "step_function_to_csv", "strong_transitivity_witness", "tent_map",
    "transition_relation", "union_covers", "weak_pair_filter",
    "weak_spectrum_estimate", "worker_count", "xi",
]
