"""Exact-arithmetic tools for tiling and spectral sets in Z_p^d.

Builds and rank-analyzes log-Hadamard matrices over prime fields, decides
tiling/spectrality/graph structure of finite point sets with certificates,
and runs the batch scans behind the known (p, d) results.
"""

from ._version import __version__
from .construct import (
    CounterexampleParams,
    beta_for,
    build_modified,
    build_original,
    build_spectral_pair,
    is_nonsquare,
    moment_vector,
    nonsquares,
    nontiling_size8_example,
    smallest_nonsquare,
    tao_dephased_12,
)
from .deciders import (
    AmbientMismatchError,
    GraphWitness,
    PointSet,
    SpectrumCertificate,
    TilingCertificate,
    UniverseBoundError,
    difference_set,
    graph_on_subspace,
    spectral,
    spectral_naive,
    tiles,
    verify_graph_witness,
    verify_spectrum,
    verify_tiling,
)
from .formats import (
    HadamardLibrary,
    HadamardLibraryEntry,
    ParseError,
    bundled_hadamard_12,
    bundled_library,
    bundled_tao12_path,
    load_library,
    parse_gf_matrix_file,
    parse_gf_matrix_text,
    parse_point_set_file,
    parse_point_set_text,
    parse_sign_matrix_file,
    parse_sign_matrix_text,
    serialize_gf_matrix,
    serialize_point_set,
    serialize_sign_matrix,
)
from .gfmat import (
    GFMatrix,
    GFVector,
    RankFactorization,
    check_prime,
    is_prime,
    matmul,
    rank,
    rank_factorization,
    row_reduce,
)
from .loghad import (
    EquivalenceMove,
    SignMatrix,
    apply_move,
    dephase,
    from_sign_matrix,
    hadamard_defect,
    is_equidistributed,
    is_log_hadamard,
    is_log_hadamard_by_columns,
    min_rank_in_class,
    random_move,
)
from .reports import Metrics, VerdictReport
from .scans import (
    BudgetExceededError,
    LibraryError,
    RankSweepResult,
    ScanConfig,
    SizeFeasibility,
    fuglede_scan,
    rank3_probe,
    rank_sweep,
    size_feasibility,
)
