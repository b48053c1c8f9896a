"""Digital images with c_u adjacency, and homotopy questions decided exactly.

The package represents finite digital images, digitally continuous maps,
finite and eventually constant paths, and decides continuity, homotopy,
loop-class, and fundamental-group questions by exhaustive bounded search.
"""

from .lattice import (
    AdjacencySpec,
    DigitalImage,
    DigitalInterval,
    Point,
    components,
    cu_adjacent,
    digital_interval,
    neighbors,
)
from .maps import (
    DigitalMap,
    EquivalenceCertificate,
    Homotopy,
    StageConstraint,
    compose,
    homotopic,
    is_continuous,
    is_homotopy,
    no_pointed_equivalence,
    one_step,
    pointed_neighbors_of_identity,
    verify_homotopy_equivalence,
)
from .paths import (
    FinitePath,
    ForbiddenPair,
    PathHomotopy,
    TabResult,
    constant_path,
    enumerate_loops,
    enumerate_trivial_extensions,
    is_path_homotopy,
    is_tab,
    is_trivial_extension,
    loop_class_equal_by_extensions,
    loops_reachable,
    product,
    reverse,
    tab_equivalent,
)
from .ecpaths import (
    EcHomotopy,
    EcPath,
    EcReachResult,
    ec_homotopic,
    ec_inverse,
    ec_star,
    ec_star_with_padding,
    extension_absorption_homotopy,
    infty,
    is_ec_homotopy,
    lift_path_homotopy,
    minus,
    restrict_ec_homotopy,
    tail_index,
)
from .search import SearchBudgetExceeded, available_backends, get_backend, set_backend

__version__ = "0.1.0"
