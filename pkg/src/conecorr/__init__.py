"""Exact set-valued maps on simplicial cones: superadditivity, homogeneity,
linear selections, and a normed space of polytope pairs.

The core objects are :class:`~conecorr.geometry.Polytope` (convex hulls of
rational points, stored exactly), :class:`~conecorr.cone.ConeBasis` /
:class:`~conecorr.cone.ConePoint` (simplicial cones with rational
coordinates), and :class:`~conecorr.correspondence.Correspondence`
(set-valued maps from a cone into ``R^m`` with polytope values).
"""

from .cone import ConeBasis, ConeError, ConePoint, standard_basis
from .correspondence import (
    AffineCorrespondence,
    BoundaryJumpCorrespondence,
    Correspondence,
    InflatedLinearCorrespondence,
    LinearCorrespondence,
    ProbeReport,
    Verdict,
    check_q_homogeneous,
    check_superadditive,
    continuity_probe,
    jensen_check,
    scalarize,
    uniform_boundedness_probe,
)
from .geometry import (
    GeometryError,
    Polytope,
    canonicalize,
    contains_point,
    contains_set,
    dist_point_to_polytope,
    format_polytope,
    format_vector,
    hausdorff,
    minkowski_sum,
    parse_polytope,
    parse_vector,
    rational,
    scale,
    set_equal,
    support,
)
from .radstrom import (
    DifferencePair,
    embed,
    equivalent,
    pair_add,
    pair_dist,
    pair_norm,
    pair_scale,
    pair_sub,
    zero_pair,
)
from .selection import (
    LinearSelection,
    Multimatrix,
    SelectionCapError,
    SelectionError,
    SelectionFamily,
    SelectionMatrix,
    apply_selection,
    basis_images,
    certify_selection,
    check_hull_recovery,
    extreme_matrices,
    selection_family,
)

__version__ = "0.1.0"

__all__ = [
    "AffineCorrespondence",
    "BoundaryJumpCorrespondence",
    "ConeBasis",
    "ConeError",
    "ConePoint",
    "Correspondence",
    "DifferencePair",
    "GeometryError",
    "InflatedLinearCorrespondence",
    "LinearCorrespondence",
    "LinearSelection",
    "Multimatrix",
    "Polytope",
    "ProbeReport",
    "SelectionCapError",
    "SelectionError",
    "SelectionFamily",
    "SelectionMatrix",
    "Verdict",
    "apply_selection",
    "basis_images",
    "canonicalize",
    "certify_selection",
    "check_hull_recovery",
    "check_q_homogeneous",
    "check_superadditive",
    "contains_point",
    "contains_set",
    "continuity_probe",
    "dist_point_to_polytope",
    "embed",
    "equivalent",
    "extreme_matrices",
    "format_polytope",
    "format_vector",
    "hausdorff",
    "jensen_check",
    "minkowski_sum",
    "pair_add",
    "pair_dist",
    "pair_norm",
    "pair_scale",
    "pair_sub",
    "parse_polytope",
    "parse_vector",
    "rational",
    "scalarize",
    "scale",
    "selection_family",
    "set_equal",
    "standard_basis",
    "support",
    "uniform_boundedness_probe",
    "zero_pair",
]
