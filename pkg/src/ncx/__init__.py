"""Simplex embeddability of accessible GPT fragments and noise robustness.

Decides via linear programming whether a fragment of states and effects fits
inside a classical probability simplex, computes how much depolarizing or
dephasing noise is needed until it does, and provides the state-discrimination
scenario family with all of its closed-form robustness curves.
"""

from .cones import (
    ConeFacets,
    cone_contains,
    enumerate_facets,
    enumerate_facets_bruteforce_3d,
)
from .embedding import (
    EmbeddingSolution,
    EmbeddingStatus,
    NoiseKind,
    NoiseMap,
    NoncontextualModel,
    assemble_embedding_lp,
    embedding_feasible_at_noise,
    extract_model,
    fragment_facets,
    is_simplex_embeddable,
    min_noise_for_embedding,
    model_violations,
    noisy_probability,
)
from .errors import (
    AssemblyError,
    CertificateCorruptionError,
    DegenerateConeError,
    InternalConsistencyError,
    InvalidNoiseError,
    NotParameterizableError,
    SolverStalledError,
    SpanDimensionError,
    StructureError,
)
from .fragment import (
    GptFragment,
    InclusionMaps,
    ValidationReport,
    Violation,
    apply_noise_to_effects,
    compute_inclusion_maps,
    dedupe_vectors,
    find_duplicates,
    fragment_from_json,
    fragment_to_json,
    pair_probability,
    validate_fragment,
)
from .lp import LinearProgram, LpSolution, LpStatus, solve
from .scenarios import (
    DataTable,
    MesdParams,
    SceParameters,
    build_mesd,
    coherence,
    coherence_bound,
    data_table,
    dephase_fragment,
    dephasing_matrix,
    depolarizing_matrix,
    extract_sce,
    incoherent_model,
    nc_inequality_holds,
    p_threshold,
    r_deph_min_analytic,
    r_depol_min_analytic,
)
from .tolerance import DEFAULT_TOL, default_tol, resolve_tol

__version__ = "0.1.0"

__all__ = [
    "AssemblyError",
    "CertificateCorruptionError",
    "ConeFacets",
    "DataTable",
    "DEFAULT_TOL",
    "DegenerateConeError",
    "EmbeddingSolution",
    "EmbeddingStatus",
    "GptFragment",
    "InclusionMaps",
    "InternalConsistencyError",
    "InvalidNoiseError",
    "LinearProgram",
    "LpSolution",
    "LpStatus",
    "MesdParams",
    "NoiseKind",
    "NoiseMap",
    "NoncontextualModel",
    "NotParameterizableError",
    "SceParameters",
    "SolverStalledError",
    "SpanDimensionError",
    "StructureError",
    "ValidationReport",
    "Violation",
    "apply_noise_to_effects",
    "assemble_embedding_lp",
    "build_mesd",
    "coherence",
    "coherence_bound",
    "compute_inclusion_maps",
    "cone_contains",
    "data_table",
    "dedupe_vectors",
    "default_tol",
    "dephase_fragment",
    "dephasing_matrix",
    "depolarizing_matrix",
    "embedding_feasible_at_noise",
    "enumerate_facets",
    "enumerate_facets_bruteforce_3d",
    "extract_model",
    "extract_sce",
    "find_duplicates",
    "fragment_facets",
    "fragment_from_json",
    "fragment_to_json",
    "incoherent_model",
    "is_simplex_embeddable",
    "min_noise_for_embedding",
    "model_violations",
    "nc_inequality_holds",
    "noisy_probability",
    "p_threshold",
    "pair_probability",
    "r_deph_min_analytic",
    "r_depol_min_analytic",
    "resolve_tol",
    "solve",
    "validate_fragment",
]
