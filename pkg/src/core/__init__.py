"""DefCoh Core - scalars, noncommutative polynomials, cochains and complexes."""

from .eulerpoincare import (
    DeformedComplex,
    FiniteComplex,
    chi_bidegree_table,
    deform,
    fuzz,
    invariance_report,
    specialize,
)
from .exceptions import DefCohError, InvalidParameters, OutOfRange
from .hochschild import (
    CochainWindow,
    PolyDiffCochain,
    TorsionVerdict,
    circ,
    coboundary,
    compose,
    cup,
    deformed_window_dims,
    gerstenhaber,
    hkr_cohomology_dims,
    inner_lift,
    lift_cocycle,
    lift_is_coboundary,
    primary_obstruction,
    skew_part,
    solve_coboundary,
    solve_layered_coboundary,
    symmetric_part,
    wedge,
    window_cohomology_dims,
)
from .ncpoly import (
    AlgebraSpec,
    Derivation,
    NCPoly,
    annihilates_center,
    center_basis,
    derivation_basis,
    inner_derivation,
    normal_form,
    parse_ncpoly,
    twisted_relation_check,
)
from .scalars import ScalarField, embed, hbar_valuation, parse_descriptor, q_integer
from .starprod import (
    StarProduct,
    associativity_defect,
    gm_star,
    group_action_check,
    moyal_star,
    quantum_plane_star,
    star_apply,
    star_commutator,
    weyl_identification,
    weyl_isomorphism_check,
    weyl_star,
)

__all__ = [
    # Scalars
    "ScalarField",
    "q_integer",
    "embed",
    "hbar_valuation",
    "parse_descriptor",

    # Noncommutative polynomials
    "AlgebraSpec",
    "NCPoly",
    "Derivation",
    "normal_form",
    "parse_ncpoly",
    "center_basis",
    "derivation_basis",
    "inner_derivation",
    "annihilates_center",
    "twisted_relation_check",

    # Star products
    "StarProduct",
    "gm_star",
    "moyal_star",
    "weyl_star",
    "quantum_plane_star",
    "star_apply",
    "star_commutator",
    "associativity_defect",
    "weyl_identification",
    "weyl_isomorphism_check",
    "group_action_check",

    # Hochschild cochains
    "PolyDiffCochain",
    "CochainWindow",
    "TorsionVerdict",
    "compose",
    "circ",
    "gerstenhaber",
    "cup",
    "wedge",
    "coboundary",
    "skew_part",
    "symmetric_part",
    "solve_coboundary",
    "solve_layered_coboundary",
    "primary_obstruction",
    "lift_cocycle",
    "lift_is_coboundary",
    "inner_lift",
    "hkr_cohomology_dims",
    "window_cohomology_dims",
    "deformed_window_dims",

    # Euler-Poincaré
    "FiniteComplex",
    "DeformedComplex",
    "deform",
    "specialize",
    "invariance_report",
    "fuzz",
    "chi_bidegree_table",

    # Errors
    "DefCohError",
    "InvalidParameters",
    "OutOfRange",
]
