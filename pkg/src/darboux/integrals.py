"""Invariant hypersurfaces, cofactors, flat weight vectors, and first integrals.

The pipeline realized by `first_integral`:

1. Each candidate hypersurface f must divide ``w ^ df``; the quotient is its
   cofactor, a (p+1)-form.
2. Weight vectors annihilating the weighted cofactor sum form the flat
   kernel, computed by exact fraction-free elimination.
3. Every kernel vector yields a logarithmic 1-form ``sum w_j dlog f_j``,
   certified by the *cleared* identity
   ``sum_j w_j (prod_{k!=j} f_k) df_j ^ w = 0`` -- a polynomial statement, so
   every check in this module is exact.  Meromorphic forms are never stored.
4. A greedy scan picks p logarithmic forms with nonzero cleared wedge; their
   multiplicative presentations ``prod f_j^(w_j)`` are the first-integral
   components, and the cleared wedge must divide the plane-field form
   (exact proportionality), closing the loop.

Every identity the pipeline relies on is re-verified after it is produced;
a failure raises `CertificateError` because it can only mean a defect here,
never bad input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    CertificateError,
    ConstantPolynomial,
    DegreeMismatch,
    FlatnessViolated,
    InputError,
    InsufficientHypersurfaces,
    NotCoprime,
    NotDivisible,
    NotInvariant,
    NotProportional,
    NotSquarefree,
    RatioNotFirstIntegral,
    VariableCountMismatch,
    ZeroForm,
)
from .forms import BasisIndex, KForm, gradient_form
from .plane_field import PlaneField
from .poly import Monomial, MPoly, RationalFunction, grlex_key, poly_gcd, squarefree_check
from .scalars import GR, GaussianRational

__all__ = [
    "Hypersurface",
    "CofactorRecord",
    "LogForm",
    "CofactorMatrix",
    "DarbouxSystem",
    "Component",
    "FirstIntegralReport",
    "invariance_cofactor",
    "cofactor_matrix",
    "flat_kernel",
    "nullspace_basis",
    "build_log_form",
    "cleared_log_derivative",
    "select_independent",
    "wedge_log_forms",
    "divide_forms",
    "extract_ratio",
    "verify_first_integral",
    "first_integral",
]

_ZERO = GR(0)
_ONE = GR(1)


@dataclass(frozen=True)
class Hypersurface:
    """A reduced hypersurface f = 0: nonconstant, squarefree, monic."""

    poly: MPoly

    def __post_init__(self):
        if self.poly.is_zero() or self.poly.is_constant():
            raise ConstantPolynomial("hypersurface polynomial must be nonconstant")
        if not squarefree_check(self.poly):
            raise NotSquarefree("hypersurface polynomial has a repeated factor")
        object.__setattr__(self, "poly", self.poly.monic())


@dataclass(frozen=True)
class CofactorRecord:
    """A hypersurface with its cofactor: ``w ^ df = f * cofactor`` exactly."""

    hypersurface: Hypersurface
    cofactor: KForm


@dataclass(frozen=True)
class LogForm:
    """A weighted formal combination ``sum w_j dlog f_j``."""

    weights: tuple[GaussianRational, ...]
    hypersurfaces: tuple[Hypersurface, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.hypersurfaces):
            raise InputError("weight and hypersurface counts differ")
        if all(w.is_zero() for w in self.weights):
            raise InputError("logarithmic form needs at least one nonzero weight")
        polys = [h.poly for h in self.hypersurfaces]
        if len(set(polys)) != len(polys):
            raise InputError("hypersurfaces must be pairwise distinct")


@dataclass(frozen=True)
class CofactorMatrix:
    """Stacked cofactor coefficients; column j belongs to hypersurface j."""

    rows: tuple[tuple[GaussianRational, ...], ...]
    ncols: int
    row_keys: tuple[tuple[BasisIndex, Monomial], ...]

    @property
    def nrows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class DarbouxSystem:
    """A plane field, its cofactor records, and the flat kernel basis."""

    field: PlaneField
    records: tuple[CofactorRecord, ...]
    kernel_basis: tuple[tuple[GaussianRational, ...], ...]


@dataclass(frozen=True)
class Component:
    """One first-integral component ``prod f_j^(e_j)``.

    `rational` is True when every exponent is a real rational, in which case
    the exponents have been scaled to coprime integers and the component is a
    genuine rational function; otherwise the exponents are left untouched and
    the component is a multivalued expression whose logarithmic derivative is
    still exactly certified.
    """

    exponents: tuple[GaussianRational, ...]
    rational: bool


@dataclass(frozen=True)
class FirstIntegralReport:
    """The verified output of the full pipeline."""

    system: DarbouxSystem
    log_forms: tuple[LogForm, ...]
    components: tuple[Component, ...]
    verified: bool
    proportionality_factor: RationalFunction | None

    @property
    def hypersurfaces(self) -> tuple[Hypersurface, ...]:
        return tuple(r.hypersurface for r in self.system.records)


# -- cofactors ------------------------------------------------------------------


def invariance_cofactor(field: PlaneField, f: MPoly | Hypersurface) -> CofactorRecord:
    """Divide ``w ^ df`` by f; failure of exact division means non-invariance."""
    hyp = f if isinstance(f, Hypersurface) else Hypersurface(f)
    if hyp.poly.nvars != field.nvars:
        raise VariableCountMismatch("hypersurface and field variable counts differ")
    product = field.form.wedge(gradient_form(hyp.poly))
    quotient_terms: dict[BasisIndex, MPoly] = {}
    for index, poly in product.terms.items():
        try:
            quotient_terms[index] = poly.exact_div(hyp.poly)
        except NotDivisible:
            names = [f"x{k}" for k in range(hyp.poly.nvars)]
            raise NotInvariant(hyp.poly.to_text(names)) from None
    cofactor = KForm(field.nvars, field.codim + 1, quotient_terms)
    if product != cofactor * hyp.poly:
        raise CertificateError("cofactor identity failed to re-verify")
    return CofactorRecord(hypersurface=hyp, cofactor=cofactor)


def cofactor_matrix(records: Sequence[CofactorRecord]) -> CofactorMatrix:
    """Stack all cofactor coefficients into an exact matrix.

    Rows are indexed by the (basis index, monomial) pairs occurring in any
    cofactor, in a fixed order; a weight vector lies in the nullspace iff the
    weighted cofactor sum vanishes identically.
    """
    if not records:
        raise InputError("no cofactor records")
    nvars = records[0].cofactor.nvars
    degree = records[0].cofactor.degree
    for record in records:
        if record.cofactor.nvars != nvars or record.cofactor.degree != degree:
            raise VariableCountMismatch("cofactor records mix ambient dimensions")
    keys: set[tuple[BasisIndex, Monomial]] = set()
    for record in records:
        for index, poly in record.cofactor.terms.items():
            for mono in poly.terms:
                keys.add((index, mono))
    ordered = sorted(keys, key=lambda bm: (bm[0], grlex_key(bm[1])))
    rows = []
    for index, mono in ordered:
        row = []
        for record in records:
            poly = record.cofactor.terms.get(index)
            row.append(poly.terms.get(mono, _ZERO) if poly is not None else _ZERO)
        rows.append(tuple(row))
    return CofactorMatrix(rows=tuple(rows), ncols=len(records), row_keys=tuple(ordered))


# -- exact nullspace -------------------------------------------------------------


def nullspace_basis(rows: Sequence[Sequence[GaussianRational]], ncols: int,
                    ) -> list[tuple[GaussianRational, ...]]:
    """Exact nullspace basis via fraction-free (Bareiss) forward elimination.

    Each free column yields one basis vector with unit entry there and the
    pivot entries solved by back-substitution.
    """
    work = [list(row) for row in rows]
    nrows = len(work)
    pivots: list[tuple[int, int]] = []  # (row, col)
    prev = _ONE
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, nrows):
            if not work[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        pivot = work[rank][col]
        for r in range(rank + 1, nrows):
            factor = work[r][col]
            for c in range(col, ncols):
                work[r][c] = (pivot * work[r][c] - factor * work[rank][c]) / prev
        prev = pivot
        pivots.append((rank, col))
        rank += 1

    pivot_cols = {col for _, col in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        vec: list[GaussianRational] = [_ZERO] * ncols
        vec[free] = _ONE
        for row, col in reversed(pivots):
            total = _ZERO
            for c in range(col + 1, ncols):
                if not vec[c].is_zero():
                    total = total + work[row][c] * vec[c]
            vec[col] = -total / work[row][col]
        basis.append(tuple(vec))
    return basis


def flat_kernel(matrix: CofactorMatrix | Sequence[Sequence[GaussianRational]],
                ncols: int | None = None) -> list[tuple[GaussianRational, ...]]:
    """Basis of exact weight vectors annihilating the stacked cofactors."""
    if isinstance(matrix, CofactorMatrix):
        return nullspace_basis(matrix.rows, matrix.ncols)
    rows = [tuple(row) for row in matrix]
    if ncols is None:
        if not rows:
            raise InputError("empty matrix needs an explicit column count")
        ncols = len(rows[0])
    return nullspace_basis(rows, ncols)


# -- logarithmic forms -----------------------------------------------------------


def cleared_log_derivative(log_form: LogForm) -> KForm:
    """The polynomial 1-form ``sum_j w_j (prod_{k!=j} f_k) df_j``.

    This is ``(prod f_k) * xi`` with all denominators multiplied out, so its
    identities are polynomial statements.
    """
    polys = [h.poly for h in log_form.hypersurfaces]
    m = len(polys)
    nvars = polys[0].nvars
    prefix = [MPoly.constant(nvars, _ONE)]
    for p in polys:
        prefix.append(prefix[-1] * p)
    suffix = [MPoly.constant(nvars, _ONE)]
    for p in reversed(polys):
        suffix.append(suffix[-1] * p)
    suffix.reverse()
    total = KForm.zero(nvars, 1)
    for j in range(m):
        weight = log_form.weights[j]
        if weight.is_zero():
            continue
        others = prefix[j] * suffix[j + 1]
        total = total + gradient_form(polys[j]) * (others * weight)
    return total


def build_log_form(weights: Sequence[GaussianRational],
                   hypersurfaces: Sequence[Hypersurface],
                   field: PlaneField) -> LogForm:
    """Assemble ``sum w_j dlog f_j`` and certify the cleared annihilation.

    The certified property is ``cleared(xi) ^ w = 0``; with the weighted
    cofactor sum it is equivalent, but this check is run directly on the
    cleared polynomial form.
    """
    log_form = LogForm(weights=tuple(weights), hypersurfaces=tuple(hypersurfaces))
    cleared = cleared_log_derivative(log_form)
    if not cleared.wedge(field.form).is_zero():
        raise FlatnessViolated("cleared logarithmic form does not annihilate the field")
    return log_form


def verify_first_integral(field: PlaneField, log_form: LogForm) -> bool:
    """Exact test ``sum_j w_j (prod_{k!=j} f_k) df_j ^ w = 0``."""
    return cleared_log_derivative(log_form).wedge(field.form).is_zero()


def select_independent(candidates: Sequence[LogForm], p: int) -> list[LogForm]:
    """Greedily pick p candidates whose cleared wedge stays nonzero.

    Deterministic: candidates are scanned in input order and one is kept
    whenever adding it keeps the cleared wedge of the chosen set a nonzero
    polynomial form.
    """
    if p < 1:
        raise InputError("need at least one component")
    chosen: list[LogForm] = []
    running: KForm | None = None
    hyps = candidates[0].hypersurfaces if candidates else ()
    for candidate in candidates:
        if candidate.hypersurfaces != hyps:
            raise InputError("candidates must share one hypersurface list")
        cleared = cleared_log_derivative(candidate)
        trial = cleared if running is None else running.wedge(cleared)
        if trial.is_zero():
            continue
        chosen.append(candidate)
        running = trial
        if len(chosen) == p:
            return chosen
    raise InsufficientHypersurfaces(
        f"only {len(chosen)} independent logarithmic forms found, need {p}"
    )


def wedge_log_forms(selected: Sequence[LogForm]) -> KForm:
    """Cleared polynomial wedge of the selected logarithmic forms."""
    if not selected:
        raise InputError("nothing to wedge")
    result = cleared_log_derivative(selected[0])
    for log_form in selected[1:]:
        result = result.wedge(cleared_log_derivative(log_form))
    if result.is_zero():
        raise ZeroForm("cleared wedge of the selection vanished")
    return result


# -- proportionality and ratios ----------------------------------------------------


def _cross_proportional(a: KForm, b: KForm) -> None:
    """Certify a and b proportional by cross-multiplying all coefficient pairs."""
    keys = sorted(set(a.terms) | set(b.terms))
    zero = MPoly.zero(a.nvars)
    for i, key_i in enumerate(keys):
        ai = a.terms.get(key_i, zero)
        bi = b.terms.get(key_i, zero)
        for key_j in keys[i + 1:]:
            aj = a.terms.get(key_j, zero)
            bj = b.terms.get(key_j, zero)
            if ai * bj != aj * bi:
                raise NotProportional(
                    f"cross-multiplication fails between {key_i} and {key_j}"
                )


def _proportion(a: KForm, b: KForm) -> RationalFunction:
    """Exact h with ``a * den(h) = num(h) * b``; raises `NotProportional`."""
    if a.nvars != b.nvars:
        raise VariableCountMismatch("forms declare different variable counts")
    if a.degree != b.degree:
        raise DegreeMismatch("proportional forms must share a degree")
    if b.is_zero():
        raise ZeroForm("reference form is zero")
    _cross_proportional(a, b)
    ref = min(b.terms)
    ratio = RationalFunction(a.terms.get(ref, MPoly.zero(a.nvars)), b.terms[ref])
    for key in set(a.terms) | set(b.terms):
        left = a.terms.get(key, MPoly.zero(a.nvars)) * ratio.den
        right = ratio.num * b.terms.get(key, MPoly.zero(b.nvars))
        if left != right:
            raise NotProportional(f"proportionality fails at {key}")
    return ratio


def divide_forms(field: PlaneField, cleared_wedge: KForm) -> RationalFunction:
    """The exact factor h with ``w * den(h) = num(h) * cleared_wedge``."""
    if cleared_wedge.is_zero():
        raise ZeroForm("cannot divide by the zero form")
    return _proportion(field.form, cleared_wedge)


def extract_ratio(form_a: KForm, form_b: KForm, field: PlaneField) -> RationalFunction:
    """Ratio h = form_a / form_b, accepted only if ``dh ^ w = 0`` exactly.

    Proportionality alone is not enough: the ratio must also be a first
    integral of the field, checked on the cleared differential
    ``den * d(num) - num * d(den)``.
    """
    ratio = _proportion(form_a, form_b)
    cleared_diff = (gradient_form(ratio.num) * ratio.den
                    - gradient_form(ratio.den) * ratio.num)
    if not cleared_diff.wedge(field.form).is_zero():
        raise RatioNotFirstIntegral("ratio differential does not annihilate the field")
    return ratio


# -- the full pipeline ---------------------------------------------------------------


def _integer_scaled(weights: Sequence[GaussianRational]) -> tuple[GaussianRational, ...]:
    """Scale an all-real weight vector by a positive rational to coprime integers."""
    rationals = [w.re for w in weights]
    denominator_lcm = math.lcm(*(q.denominator for q in rationals))
    integers = [q * denominator_lcm for q in rationals]
    common = math.gcd(*(abs(q.numerator) for q in integers))
    return tuple(GR(Fraction(q.numerator // common)) for q in integers)


def first_integral(field: PlaneField,
                   hypersurfaces: Sequence[MPoly | Hypersurface]) -> FirstIntegralReport:
    """Run the whole pipeline and return an exactly verified report."""
    if not hypersurfaces:
        raise InputError("no candidate hypersurfaces")
    hyps = [h if isinstance(h, Hypersurface) else Hypersurface(h) for h in hypersurfaces]
    for i in range(len(hyps)):
        for j in range(i + 1, len(hyps)):
            if not poly_gcd(hyps[i].poly, hyps[j].poly).is_unit():
                raise NotCoprime(f"hypersurfaces {i} and {j} share a factor")

    records = []
    for index, hyp in enumerate(hyps):
        try:
            records.append(invariance_cofactor(field, hyp))
        except NotInvariant as err:
            err.hyp_index = index
            raise
    matrix = cofactor_matrix(records)
    kernel = flat_kernel(matrix)

    zero_sum = KForm.zero(field.nvars, field.codim + 1)
    for vector in kernel:
        total = zero_sum
        for weight, record in zip(vector, records):
            if not weight.is_zero():
                total = total + record.cofactor * weight
        if not total.is_zero():
            raise CertificateError("kernel vector fails the weighted cofactor identity")

    system = DarbouxSystem(field=field, records=tuple(records), kernel_basis=tuple(kernel))

    try:
        candidates = [build_log_form(vector, hyps, field) for vector in kernel]
    except FlatnessViolated as err:
        raise CertificateError(f"kernel vector rejected as logarithmic form: {err}") from err

    selected = select_independent(candidates, field.codim)

    log_forms = []
    components = []
    for log_form in selected:
        if all(w.is_real() for w in log_form.weights):
            scaled = _integer_scaled(log_form.weights)
            try:
                presented = build_log_form(scaled, hyps, field)
            except FlatnessViolated as err:
                raise CertificateError(f"integer scaling broke a certificate: {err}") from err
            log_forms.append(presented)
            components.append(Component(exponents=scaled, rational=True))
        else:
            log_forms.append(log_form)
            components.append(Component(exponents=log_form.weights, rational=False))

    for log_form in log_forms:
        if not verify_first_integral(field, log_form):
            raise CertificateError("selected component failed the annihilation identity")

    cleared_wedge = wedge_log_forms(log_forms)
    try:
        factor = divide_forms(field, cleared_wedge)
    except NotProportional as err:
        raise CertificateError(f"cleared wedge not proportional to the field: {err}") from err

    return FirstIntegralReport(
        system=system,
        log_forms=tuple(log_forms),
        components=tuple(components),
        verified=True,
        proportionality_factor=factor,
    )
