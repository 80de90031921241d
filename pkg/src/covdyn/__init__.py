"""covdyn: zero-dimensional systems as graph coverings, Gambaudo-Martens
validation, and Bratteli-Vershik realization with symbolic verification."""

from .arrays import (
    ArrayWindow,
    ConjugacyReport,
    LinkedArrayWindow,
    NSymbol,
    RotatedWord,
    SlideSpec,
    build_ordered_bratteli,
    cuts_nested,
    is_normalized,
    linked_window,
    n_symbol,
    normalize_for_construction,
    rotated_words,
    slide,
    telescope_gm,
    verify_conjugacy,
)
from .bratteli import (
    OrderedBratteli,
    PathPrefix,
    bratteli_rank,
    bv_array_rows,
    check_properly_ordered,
    check_simple_bratteli,
    extreme_paths,
    max_path_to,
    min_path_to,
    paths_into,
    telescope_bratteli,
    vershik_predecessor,
    vershik_successor,
)
from .covering import (
    Covering,
    GraphHom,
    HomClassification,
    VertexTower,
    classify_hom,
    compose,
    depth_windows,
    identity_hom,
    minimality_witness,
    telescope,
    tower_from_top,
)
from .digraph import (
    Circuit,
    DiGraph,
    Walk,
    build_graph,
    enumerate_circuits,
    singleton_graph,
    walks_of_length,
)
from .errors import CovdynError
from .gm import (
    CircuitWord,
    GmCovering,
    GmLevel,
    build_gm_covering,
    build_gm_level_from_words,
    check_no_isolated_points,
    check_simplicity,
    expand_word,
    level0_gm,
    rank_estimate,
    validate_gm,
)

__version__ = "0.1.0"
