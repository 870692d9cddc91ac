"""Graphs of finite idempotent algebras: edge classification, witness
operation synthesis, thin edges, connectivity and reduct checks."""

from .core import (
    UNKNOWN,
    Algebra,
    AlgebraError,
    App,
    OpTable,
    ParseError,
    TermExpr,
    Var,
    VerificationError,
    evaluate_op,
    evaluate_term,
    parse_algebra,
    product_algebra,
    projection,
    quotient_algebra,
    serialize_algebra,
    subalgebra_induced,
    term_table,
)
from .subpower import (
    ClosureBudget,
    SubUniverse,
    closure_search,
    extract_term,
    generate_subuniverse,
    member_with_witness,
    term_slice,
)
from .congruence import (
    Partition,
    Tolerance,
    all_congruences,
    all_tolerances,
    compatible_tolerance_generated,
    congruence_generated,
    is_class_subuniverse,
    is_compatible_tolerance,
    is_congruence,
    is_connected_tolerance,
    is_simple,
    link_tolerance,
    maximal_congruences,
    principal_congruence,
    tolerance_classes,
)
from .edges import (
    AFFINE,
    MAJORITY,
    SEMILATTICE,
    AffineCertificate,
    EdgeGraph,
    EdgeInfo,
    affine_certificates,
    affine_quotient_certificate,
    all_subuniverses,
    classify_pair,
    edge_graph,
    graph_connected,
    graph_connected_hereditary,
    has_siggers_term,
    is_strictly_simple,
    is_tolerance_free,
    majority_witness,
    omits_type1,
    semilattice_witness,
    type1_divisor,
    verify_simple_case4,
)
from .thin import (
    SynthesisError,
    ThinEdge,
    UnifiedOps,
    all_thin_edges,
    enforce_identities,
    find_thin_affine,
    find_thin_majority,
    good_f,
    is_thin_affine,
    is_thin_majority,
    synth_unified,
    thin_semilattice_edges,
    unified_conditions,
    verify_thick_thin,
    witness_majority_triple,
    witness_mixed,
)
from .connectivity import (
    ComponentOrder,
    OrientedThinGraph,
    build_oriented_graph,
    components,
    depth_and_sdistance,
    export_dot,
    max_elements,
    path_query,
    verify_as_connectivity,
    verify_going_maximal,
)
from .reduct import Reduct, ThickEdgeSubset, build_reduct, thick_edge_subset, verify_reduct_claims
from .verify import (
    THEOREMS,
    Analysis,
    VerificationReport,
    enumerate_and_verify,
    idempotent_algebra,
    iter_idempotent_algebras,
    run_suite,
)
from .fixtures import all_fixtures, fixture

__all__ = [name for name in dir() if not name.startswith("_")]
