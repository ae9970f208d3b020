"""Switching components (ghosts) of lattice sets under discrete X-rays."""

from .bounds import (
    PigeonholeReport,
    guaranteed_threshold_scan,
    pigeonhole_certificate,
    profile_space_bound,
    subset_count,
    theorem_n,
    weak_composition_count,
)
from .constructions import (
    CoprimeCensus,
    DegenerateGhost,
    GhostPair,
    PolygonPairingCertificate,
    coprime_census,
    hypercube_ghost,
    paper_example_m5,
    polygon_ghost,
    select_directions,
    zeta_lower_check,
)
from .lattice import (
    DimensionError,
    Direction,
    DirectionSet,
    Grid,
    InvalidDirection,
    InvalidParameter,
    NotPairwiseIndependent,
    NotSpanning,
    PointConfiguration,
    TomographyError,
    canonicalize_direction,
    validate_direction_set,
)
from .pte import (
    DegenerateFunctional,
    PTESolution,
    ghost_to_pte2,
    reduce_to_pte1,
    suggest_alpha,
    verify_pte,
)
from .search import (
    BudgetExceeded,
    InvalidProfileSet,
    OutOfGrid,
    SearchOutcome,
    SignedConfiguration,
    min_ghost,
    sets_with_profile,
    ugon_check,
    uniqueness_check,
)
from .xray import (
    UnsupportedOrientation,
    XRayProfile,
    count_lines_bound,
    count_lines_exact,
    line_key,
    tomographically_equivalent,
    xray,
)

__version__ = "0.1.0"
SCHEMA_VERSION = "1"

__all__ = [
    "PigeonholeReport",
    "guaranteed_threshold_scan",
    "pigeonhole_certificate",
    "profile_space_bound",
    "subset_count",
    "theorem_n",
    "weak_composition_count",
    "CoprimeCensus",
    "DegenerateGhost",
    "GhostPair",
    "PolygonPairingCertificate",
    "coprime_census",
    "hypercube_ghost",
    "paper_example_m5",
    "polygon_ghost",
    "select_directions",
    "zeta_lower_check",
    "DimensionError",
    "Direction",
    "DirectionSet",
    "Grid",
    "InvalidDirection",
    "InvalidParameter",
    "NotPairwiseIndependent",
    "NotSpanning",
    "PointConfiguration",
    "TomographyError",
    "canonicalize_direction",
    "validate_direction_set",
    "DegenerateFunctional",
    "PTESolution",
    "ghost_to_pte2",
    "reduce_to_pte1",
    "suggest_alpha",
    "verify_pte",
    "BudgetExceeded",
    "InvalidProfileSet",
    "OutOfGrid",
    "SearchOutcome",
    "SignedConfiguration",
    "min_ghost",
    "sets_with_profile",
    "ugon_check",
    "uniqueness_check",
    "UnsupportedOrientation",
    "XRayProfile",
    "count_lines_bound",
    "count_lines_exact",
    "line_key",
    "tomographically_equivalent",
    "xray",
    "__version__",
    "SCHEMA_VERSION",
]
