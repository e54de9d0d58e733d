"""Exact symbolic verification of Darboux-type first integrals.

Given a polynomial p-form defining a codimension-p plane field on affine
n-space and a list of candidate invariant hypersurfaces, this package checks
invariance, extracts cofactors, solves for flat weight vectors, assembles
logarithmic 1-forms, and certifies a p-component first integral -- every
identity verified exactly over the Gaussian rationals.
"""

from .errors import (
    CertificateError,
    DarbouxError,
    FlatnessViolated,
    InputError,
    InsufficientHypersurfaces,
    NotCoprime,
    NotDivisible,
    NotInvariant,
    NotLDS,
    NotProportional,
    NotSquarefree,
    ObstructionError,
    RatioNotFirstIntegral,
)
from .forms import KForm, gradient_form
from .integrals import (
    CofactorRecord,
    Component,
    DarbouxSystem,
    FirstIntegralReport,
    Hypersurface,
    LogForm,
    build_log_form,
    cofactor_matrix,
    divide_forms,
    extract_ratio,
    first_integral,
    flat_kernel,
    invariance_cofactor,
    select_independent,
    verify_first_integral,
    wedge_log_forms,
)
from .plane_field import (
    PlaneField,
    check_integrability,
    check_lds,
    load_plane_field,
    normalize_content,
)
from .poly import MPoly, RationalFunction, poly_gcd, squarefree_check
from .problem import (
    ProblemFile,
    format_form,
    format_poly,
    format_problem,
    parse_form_text,
    parse_poly_text,
    parse_problem,
)
from .report import Report, parse_report, serialize_report
from .scalars import GR, GaussianRational, format_scalar, parse_scalar

__version__ = "0.1.0"
