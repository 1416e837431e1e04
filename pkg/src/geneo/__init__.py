"""Linear group equivariant (non-expansive) operators between finite perception pairs."""

from .action import (
    Orbit,
    SignedMeasure,
    act,
    all_orbits,
    is_permutant,
    measure_from_function,
    orbit_of,
)
from .errors import *  # noqa: F401,F403
from .groups import (
    Homomorphism,
    Permutation,
    PermutationGroup,
    build_homomorphism,
    cyclic_group,
    grid_setting,
    group_closure,
    identity_homomorphism,
    is_transitive,
    orbit_partition,
    symmetric_group,
    trivial_group,
    trivial_homomorphism,
)
from .polytope import (
    OrbitBasis,
    check_redundancy_identity,
    is_linear_geneo_hull,
    measure_coefficients,
    orbit_basis,
    weighted_l1,
)
from .representation import (
    GeoProblem,
    MeasureTriple,
    SplitParts,
    apply_measure,
    check_equivariance,
    check_mutual_singularity,
    check_row_permutation,
    extract_coeffs,
    is_geneo,
    matrix_of_measure,
    norm_witness,
    operator_norm_inf,
    orbit_average,
    represent,
    represent_by_orbits,
    split_by_target_orbits,
    split_pos_neg,
)
from .stochastic import ConvexCombo, decompose_stochastic, is_row_stochastic, reconstruct

__version__ = "0.1.0"
