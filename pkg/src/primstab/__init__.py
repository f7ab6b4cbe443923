"""Primitive conjugacy classes in free groups and stability diagnostics
for their images under representations into PSL(2, C)."""

from .words import (
    Word,
    CyclicWord,
    parse_word,
    parse_cyclic_word,
    free_reduce,
    cyclic_reduce,
    canonical_class,
    power,
    cyclic_subword_occurs,
)
from .whitehead import (
    WhiteheadGraph,
    ConnectivityReport,
    SeparabilityVerdict,
    LetterPermutation,
    WhiteheadMove,
    PrimitivityVerdict,
    BlockingReport,
    whitehead_graph,
    connectivity_report,
    whitehead_separability_test,
    all_letter_permutations,
    all_whitehead_automorphisms,
    apply_automorphism,
    apply_to_class,
    minimize,
    enumerate_primitive_classes,
    primitivity_oracle,
    blocking_witness,
    graph_to_dot,
    graph_to_adjacency,
)
from .h3 import (
    INFINITY,
    H3Point,
    MoebiusMap,
    BoundaryGeodesic,
    IsometryType,
    classify,
    fixed_points,
    translation_length,
    axis,
    act_h3,
    dist_h3,
    dist_to_geodesic,
    chordal_distance,
)
from .reps import (
    Representation,
    OrbitPath,
    PSMetrics,
    PSSummary,
    PSReport,
    CertificateStatus,
    evaluate,
    orbit_path,
    ps_metrics,
    ps_report,
    make_schottky_pair,
    make_sanov,
    make_punctured_torus,
    ping_pong_certificate,
    rep_to_json,
    rep_from_json,
    load_representation,
)

__version__ = "0.1.0"
