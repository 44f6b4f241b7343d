"""Mixed-SAT to Ising toolkit: cascading-OR penalty compilation, annealing-style
sampling, ALL-SAT enumeration, and solver-comparison metrics."""

from .allsat import EnumerationResult, SolutionEvent, count_solutions_capped, enumerate_all
from .compiler import (
    ClausePenalty,
    ConstructionPolicy,
    PenaltyLayout,
    QubitAllocator,
    TermSet,
    build_clause_penalty,
    build_h2,
    build_h_or,
    compile_cnf,
)
from .ising import (
    IsingModel,
    apply_gauge,
    energy,
    enumerate_ground_states,
    min_energy_over_ancillas,
    ungauge_sample,
)
from .metrics import (
    CrossoverReport,
    DistinctTimeline,
    InstanceReport,
    build_timeline,
    find_crossover,
    hamming_neighbor_distances,
    overlap_fraction,
    summarize_instance,
)
from .samplers import (
    OverheadModel,
    SampleRecord,
    SamplerConfig,
    decode_sample,
    random_gauges,
    sample,
    sample_with_srt_rotation,
)
from .sat import (
    Clause,
    Cnf,
    DimacsError,
    GenerationError,
    Literal,
    MixedSatSpec,
    emit_dimacs,
    evaluate,
    generate_mixed_sat,
    parse_dimacs,
)

__version__ = "0.1.0"

__all__ = [
    "Clause",
    "ClausePenalty",
    "Cnf",
    "ConstructionPolicy",
    "CrossoverReport",
    "DimacsError",
    "DistinctTimeline",
    "EnumerationResult",
    "GenerationError",
    "InstanceReport",
    "IsingModel",
    "Literal",
    "MixedSatSpec",
    "OverheadModel",
    "PenaltyLayout",
    "QubitAllocator",
    "SampleRecord",
    "SamplerConfig",
    "SolutionEvent",
    "TermSet",
    "apply_gauge",
    "build_clause_penalty",
    "build_h2",
    "build_h_or",
    "build_timeline",
    "compile_cnf",
    "count_solutions_capped",
    "decode_sample",
    "emit_dimacs",
    "energy",
    "enumerate_all",
    "enumerate_ground_states",
    "evaluate",
    "find_crossover",
    "generate_mixed_sat",
    "hamming_neighbor_distances",
    "min_energy_over_ancillas",
    "overlap_fraction",
    "parse_dimacs",
    "random_gauges",
    "sample",
    "sample_with_srt_rotation",
    "summarize_instance",
    "ungauge_sample",
]
