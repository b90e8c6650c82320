"""Exact and combinatorial tools for unicuspidal plane curves and their pencils."""
from __future__ import annotations

from .cusp_numerics import (
    BlockDecomposition,
    CuspProfile,
    ObstructionReport,
    admissible_profiles,
    block_decompose,
    embedded_sequence,
    euclid_sequence,
    genus_zero_check,
    nu_emb,
    nu_tilde,
    proximity_matrix,
    section_obstruction,
    verify_euclid_identities,
)
from .erasability import (
    ErasabilityOutcome,
    WeightedPair,
    contract,
    ell_bounded,
    normalize,
    pair_blow_ups,
    parse_chain_pair,
    prune,
)
from .linear_systems import (
    HomogeneousForm,
    LocalCurve,
    TruncatedSeries,
    map_degree_probe,
    multiplicity_sequence_from_param,
)
from .pencil_resolution import (
    ResolutionPlan,
    dicriticals,
    dual_graph,
    plan,
    tree_check,
    verify_exceptional_contracts,
)
from .weighted_graph import (
    WeightedGraph,
    blow_down,
    blow_up_at_edge,
    blow_up_at_vertex,
    blow_up_free,
    canonical_form,
    equiv_empty,
    lattice_invariants,
)

__version__ = "0.1.0"
