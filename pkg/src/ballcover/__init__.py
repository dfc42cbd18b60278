"""Explicit coverings of unit balls in finite-dimensional lp spaces.

Constructions (simplex, tight-frame, incoherent-dictionary, axis/basis,
iterated), numerical certification against proof-level margins, constructive
uncovered-point witnesses, and covering-number bound evaluators.
"""

from .bounds import (
    BoundConstants,
    BoundTableRow,
    VolumetricBounds,
    calibrate_c1,
    covering_bound_table,
    mu_from_delta,
    ndmu_upper,
    ndmux_upper,
    table_to_csv,
    volumetric_bounds,
)
from .coverings import (
    BallCovering,
    CoverMargin,
    STRICT_OPEN,
    UNIFORM,
    axis_cover,
    banach_simplex_search,
    basis_cover,
    dictionary_cover_banach,
    dictionary_cover_l2,
    etf_cover,
    iterate_cover,
    simplex_cover_shrunk,
    simplex_cover_unit,
)
from .dictionaries import (
    CoherenceMatrix,
    Dictionary,
    coherence_banach,
    coherence_euclidean,
    coherence_matrix,
    functional_matrix,
    greedy_maximal_dictionary,
)
from .frames import TightFrame, etf_from_hadamard, frame_gram, verify_frame_identities
from .hadamard import (
    HadamardMatrix,
    MAX_ORDER,
    kronecker,
    normalize_first_row,
    sylvester,
    verify_hadamard,
)
from .spaces import (
    DualVector,
    LpSpace,
    SmoothnessMajorant,
    norm,
    norming_functional,
    norms,
    sample_ball,
    sample_sphere,
    smoothness_majorant_for,
    smoothness_upper_bound,
    solve_step_size,
    solve_step_size_bisect,
)
from .verify import (
    CoverageReport,
    MaximalityRepairError,
    VertexCoverReport,
    adversarial_search,
    affine_hull_distance,
    certify_maximality,
    certify_sampling,
    check_point,
    harden_dictionary,
    linf_vertex_check,
    min_distances,
    select_positive_entry,
    simplex_dichotomy_check,
    uncovered_witness,
)

__version__ = "0.1.0"
