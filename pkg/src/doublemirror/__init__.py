"""Exact polyhedral combinatorics for toric double mirrors.

Reflexive polytopes, nef partitions, Cayley cones, torus-subgroup degree
bookkeeping, regular triangulations with GKZ chambers, and an end-to-end
double-mirror report, all over exact integer and rational arithmetic.
"""

from .errors import (
    DoubleMirrorError,
    InputError,
    InternalConsistencyError,
    VerificationError,
)
from .fans import Fan, bundle_fan, cox_data, normal_fan, polytope_divisor, simplicial_refinement
from .intlinalg import (
    AbelianPresentation,
    cokernel,
    hermite_normal_form,
    smith_normal_form,
    solve_integer,
)
from .nefpartitions import (
    CayleyData,
    NefPartition,
    SplittingData,
    cayley,
    cayley_duality_check,
    dual_nef_partition,
    recover_partition,
    special_simplices,
    splittings,
    validate_nef_partition,
)
from .pipeline import (
    DoubleMirrorInput,
    DoubleMirrorReport,
    double_mirror_pipeline,
    monomial_table,
    rcharge_check,
    translated_partition,
)
from .polytopes import (
    GorensteinData,
    LatticePolytope,
    RationalCone,
    dual_cone,
    dual_polytope,
    gorenstein_cone_data,
    gorenstein_polytope_data,
    hull,
    lattice_points,
    minkowski_sum,
)
from .torus import (
    Character,
    TorusSubgroupData,
    calabi_yau_vector,
    divisor_character,
    is_quasi_calabi_yau,
    points_of_subgroup,
    torus_subgroup,
    unimodular_equivalence,
)
from .triangulations import (
    ChamberDescription,
    PointConfig,
    Subdivision,
    Triangulation,
    chamber_of_triangulation,
    regularity_certificate,
    triangulation_from_weights,
    triangulation_of_bundle_fan,
)

__version__ = "0.1.0"
