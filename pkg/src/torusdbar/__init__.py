"""Numerics for flat line bundles on complex tori and elliptic curves.

The package computes, on C^d / Lambda:

* the real-linear coordinate identifying U(1)-characters of the lattice
  with points of C^d modulo Lambda_c (with Voronoi reduction),
* the perturbed dbar operator, its adjoint, and its character spectrum,
  including the exact identity K * dist(trivial) = 1 on flat tori,
* Weierstrass sigma/zeta evaluators and the twisted-kernel integral
  solver of the dbar equation on an elliptic curve,
* a constructive Cech layer (partitions of unity, coboundaries,
  delta-primitives) with the associated sup-norm ratio diagnostics,
* a reproducible batch CLI (`torusdbar`).
"""

__version__ = "0.1.0"

from .bundle import (
    Representation,
    SigmaSection,
    c_of_representation,
    distance_to_trivial,
    monodromy_defect,
    sigma_eval,
)
from .cech import (
    Cochain,
    OpenCover,
    Rect,
    cocycle_to_form,
    delta0,
    partition_of_unity,
    solve_primitive,
    square_cover,
    ueda_ratio,
)
from .elliptic import (
    EllipticCurve,
    TwistData,
    WeierstrassContext,
    kernel_eval,
    solve_dbar_kernel,
    theorem_constant,
    weierstrass_sigma,
    weierstrass_zeta,
    young_l1_bound,
)
from .errors import (
    BidegreeOverflow,
    BidegreeUnderflow,
    CoverGap,
    CutoffTooSmall,
    DiagonalPole,
    DimensionMismatch,
    NonImaginaryInput,
    NotACocycle,
    PoleAtLattice,
    ResourceLimit,
    SingularLattice,
    TorusDbarError,
    TrivialBundle,
    TrivialTwist,
)
from .lattice import (
    CVector,
    DualBasis,
    Lattice,
    c_map,
    curve_lattice,
    dual_basis,
    key_identity_residual,
    lambda_c_generators,
    lattice_from_json,
    lattice_to_json,
    period_matrix,
    reduce,
    square_lattice,
)
from .spectral import (
    FormGrid,
    SpectralReport,
    apply_dbar_rho,
    apply_dbar_rho_star,
    character,
    character_form,
    counterexample_11,
    fd_laplacian_lambda_min,
    k_rho,
    l2_inner,
    l2_norm,
    min_eigenvalue,
    p0_kernel_gap,
    smallest_nonzero_eigenvalue,
    solve_dbar_rho,
    sweep_pic0,
    verify_cross_term,
    verify_gap_inequality,
)
