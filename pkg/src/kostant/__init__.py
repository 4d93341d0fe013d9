"""Exact-arithmetic integral Kostant sections for split reductive groups.

Builds Chevalley Lie algebras with their principal grading, classifies good
primes by Smith normal form, constructs the section Y + Xi, tests topological
nilpotence of p-adic Lie algebra elements, conjugates regular topologically
nilpotent elements into the section with verifiable certificates, and
evaluates the associated lattice dualities and orbital-integral constants.
"""

from .chevalley import (
    ChevalleyAlgebra,
    ConsistencyError,
    GradedAdY,
    PrincipalNilpotent,
    StandardRep,
    build_algebra,
    standard_rep,
)
from .padic import (
    BilinearForm,
    FormNotPerfect,
    LieElement,
    MPLattice,
    PadicScalar,
    PrecisionExhausted,
    dual_lattice_levels,
    dual_pair_is_perfect,
    lattice_membership,
    padic_divisor_valuations,
    trace_form,
    valuation,
)
from .reduction import (
    NilpotenceVerdict,
    OrbitalConstants,
    ReductionCertificate,
    SelfdualReport,
    algebra_coordinates,
    check_level_image,
    check_selfdual,
    constants,
    d_g_valuation,
    is_topologically_nilpotent,
    mock_exp,
    newton_root_valuations,
    reduce_to_section,
    same_orbit,
    verify_certificate,
)
from .roots import (
    LambdaCocharacter,
    RootDatum,
    RootSystem,
    build_root_datum,
    build_root_system,
    catalog,
    catalog_datum,
    direct_sum_datum,
    fundamental_group_order,
    lambda_cocharacter,
)
from .sections import (
    InvariantSystem,
    KostantSection,
    SectionUnavailable,
    SmithData,
    build_section,
    chi_projection_check,
    excluded_n,
    excluded_primes,
    invariant_system,
    invariants_chi,
    is_g_good,
    is_g_good_closed_form,
    is_n_good,
    is_n_good_closed_form,
    section_for,
    section_invert,
    smith_decompose,
)

__version__ = "0.1.0"
