"""Validation of a polynomial p-form as a codimension-p plane field.

Loading a plane field performs three steps:

1. content normalization -- the gcd of all coefficient polynomials is
   divided out.  This removes exactly the divisorial part of the singular
   set; codimension of what remains is *not* computed (that would need
   Groebner machinery) and the limitation is surfaced as a diagnostic.
2. decomposability -- the contraction identities ``(i_J w) ^ w = 0`` over
   every basis multi-index J of length p-1.  Failure means the form does not
   define a plane field at all.
3. integrability -- same contractions against dw.  Recorded as a flag only;
   non-integrable plane fields are legitimate input.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DegreeMismatch, InputError, NotLDS, ZeroForm
from .forms import KForm
from .poly import MPoly, content_gcd

__all__ = [
    "PlaneField",
    "normalize_content",
    "check_lds",
    "check_integrability",
    "load_plane_field",
    "CODIM_DIAGNOSTIC",
]

CODIM_DIAGNOSTIC = (
    "singular-set codimension >= 2 enforced on its divisorial part only "
    "(unit coefficient content)"
)


@dataclass(frozen=True)
class PlaneField:
    """A validated plane field: content-normalized, decomposability-checked."""

    nvars: int
    codim: int
    form: KForm
    content: MPoly
    integrable: bool
    lds_checked: bool = True


def normalize_content(form: KForm) -> tuple[KForm, MPoly]:
    """Split off the monic gcd of all coefficients: returns (form/g, g)."""
    if form.is_zero():
        raise ZeroForm("cannot normalize the zero form")
    g = content_gcd(form.coefficients())
    if g.is_unit():
        return form, MPoly.constant(form.nvars, 1)
    normalized = KForm(form.nvars, form.degree,
                       {i: p.exact_div(g) for i, p in form.terms.items()})
    return normalized, g


def _contraction_indices(nvars: int, length: int):
    return combinations(range(nvars), length)


def check_lds(form: KForm) -> bool:
    """Decomposability test: ``(i_J form) ^ form = 0`` for all |J| = p-1.

    Every 1-form is decomposable, as is every (n-1)-form in n variables, so
    those cases short-circuit.
    """
    p = form.degree
    if p <= 1 or p >= form.nvars - 1:
        return True
    for index in _contraction_indices(form.nvars, p - 1):
        contracted = form.contract(index)
        if not contracted.wedge(form).is_zero():
            return False
    return True


def check_integrability(form: KForm) -> bool:
    """Frobenius test ``(i_J form) ^ dform = 0`` for all |J| = p-1.

    Assumes `check_lds(form)` already passed.
    """
    p = form.degree
    d = form.exterior_derivative()
    if d.is_zero():
        return True
    for index in _contraction_indices(form.nvars, p - 1):
        contracted = form.contract(index)
        if not contracted.wedge(d).is_zero():
            return False
    return True


def load_plane_field(nvars: int, codim: int, form: KForm) -> PlaneField:
    """Validate and normalize a candidate p-form into a `PlaneField`."""
    if not 1 <= codim <= nvars - 1:
        raise InputError(f"codimension {codim} out of range for {nvars} variables")
    if form.nvars != nvars:
        raise InputError(f"form declares {form.nvars} variables, expected {nvars}")
    if form.degree != codim:
        raise DegreeMismatch(f"form degree {form.degree} differs from codimension {codim}")
    if form.is_zero():
        raise ZeroForm("the zero form defines no plane field")
    normalized, content = normalize_content(form)
    if not check_lds(normalized):
        raise NotLDS("form fails the decomposability identities")
    integrable = check_integrability(normalized)
    return PlaneField(nvars=nvars, codim=codim, form=normalized,
                      content=content, integrable=integrable)
