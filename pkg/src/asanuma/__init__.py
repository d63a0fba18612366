"""Exact computation in Asanuma-type quotient rings over finite fields.

Normal forms, weight filtrations and associated graded rings, exponential
maps (additive group actions) with their invariants, bounded searches for such
maps, and finite-field point counts and singularity certificates.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    AsanumaParams,
    PresentedAlgebra,
    SubringProfile,
    asanuma_algebra,
    asanuma_gr_algebra,
    compose_images,
    equals,
    normalize,
    polynomial_ring,
    subring_profile,
    verify_hom,
    verify_isomorphism_pair,
)
from .errors import *  # noqa: F401,F403
from .expmap import (
    DerksenReport,
    ExpMap,
    ExpStatus,
    InvariantBasis,
    apply,
    asanuma_maps,
    check_exponential,
    check_lead_containment,
    derksen_report,
    induce_on_gr,
    invariant_basis,
    is_invariant,
    is_nontrivial,
    translation_maps,
)
from .field import (
    GF,
    ExtensionElement,
    ExtensionField,
    FieldElement,
    PrimeField,
    enumerate_elements,
    field_of_order,
    frobenius,
    invert,
)
from .geometry import (
    PointCountResult,
    SingularityCertificate,
    SmoothnessCertificate,
    count_points,
    singular_at,
    smoothness_certificate,
)
from .grading import (
    GradedPresentation,
    WeightGrading,
    check_filtration_axioms,
    first_grading,
    gr_presentation,
    homogeneous_components,
    leading_form,
    second_grading,
    trinomial_grading,
    weight_degree,
)
from .linalg import nullspace, rref
from .poly import (
    Polynomial,
    evaluate,
    exact_divide,
    format_poly,
    mul,
    parse_poly,
    partial_derivative,
)
from .search import y_fixed_template, search_expmaps
