"""Exact symbolic models of the generalized loop Heisenberg-Virasoro algebra.

The library realizes the algebra over pluggable exact scalar backends
(rationals, real quadratic extensions) and verifies its structure theory
at finite truncation scale: the bracket and grading, the four-family
classification of derivations, two-local derivations, biderivations and
commuting maps, commutative post-Lie products, and the five-parameter
automorphism group with its composition law.  Everything is
zero-tolerance exact arithmetic; no floats anywhere.
"""

from .algebra import (
    AlgebraElement,
    TruncationBox,
    basis_elements,
    bracket,
    bracket_basis,
    central_subspace,
    check_perfect,
    format_basis_index,
    format_element,
    graded_decompose,
    is_central,
    quotient_mod_H,
)
from .autos import (
    AutomorphismParams,
    ScalingIsomorphism,
    apply_automorphism,
    check_automorphism,
    compose_params,
    extract_params,
    invert_params,
    isomorphism_by_scaling,
    tabulate_automorphism,
)
from .bider import (
    BilinearTable,
    LinearTable,
    check_biderivation,
    check_commuting,
    check_post_lie,
    decompose_commuting,
    extract_inner_coefficient,
)
from .derivations import (
    CoefficientDerivation,
    DecompositionResult,
    Derivation,
    HScalingDerivation,
    InnerDerivation,
    LToHDerivation,
    ScalingDerivation,
    SumDerivation,
    TableDerivation,
    apply_derivation,
    check_derivation,
    decompose_degree_zero,
    degree_of,
    direct_sum_check,
    homogeneous_parts,
    inner_witness_nonzero_degree,
    scaling_hom_for_inner_l0,
    tabulate,
)
from .gamma import (
    Character,
    GammaConfig,
    GammaHom,
    GSymbol,
    find_scaling,
    iota_apply,
    scaling_group_contains,
    solve_g_space,
)
from .laurent import LaurentPoly, RhoOperator, format_laurent, parse_laurent
from .parsing import parse_expression
from .reports import Report
from .scalars import QQ, Quad, QuadraticField, RationalField, format_scalar, parse_scalar
from .serialize import Session, load_config
from .suites import SUITE_NAMES, run_all, run_suite
from .twolocal import (
    ReferenceFamilies,
    TwoLocalTable,
    WitnessSpec,
    certify_two_local,
    default_reference_families,
    find_pair_witness,
    verify_two_local,
)

__version__ = "0.1.0"
