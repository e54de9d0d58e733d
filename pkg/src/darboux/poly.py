"""Sparse multivariate polynomials over the Gaussian rationals.

A polynomial is a map from exponent tuples to nonzero `GaussianRational`
coefficients, plus the ambient variable count.  The zero polynomial is the
empty map.  Values are immutable by convention: every operation returns a new
`MPoly` and never mutates its operands, so instances can be shared freely.

The canonical monomial order is graded lexicographic in declared variable
order.  It is used for monic normalization and for serialization only; no
algorithm here depends on it for correctness.

Division, gcd (content/primitive-part recursion with a pseudo-remainder
univariate core), derivatives and the squarefree test live here, together
with `RationalFunction`, the reduced fraction of two polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Mapping

from .errors import (
    ConstantPolynomial,
    DivisionByZero,
    InputError,
    NotDivisible,
    VariableCountMismatch,
)
from .scalars import GR, GaussianRational

__all__ = [
    "Monomial",
    "MPoly",
    "RationalFunction",
    "poly_gcd",
    "content_gcd",
    "squarefree_check",
]

# Exponent tuple, one entry per ambient variable.
Monomial = tuple[int, ...]

_ZERO = GR(0)
_ONE = GR(1)


def grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    """Sort key realizing graded lexicographic order (total degree, then lex)."""
    return (sum(mono), mono)


class MPoly:
    """A sparse exact polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, GaussianRational] | None = None):
        if nvars < 0:
            raise InputError("negative variable count")
        clean: dict[Monomial, GaussianRational] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise VariableCountMismatch(
                        f"monomial {mono} has length {len(mono)}, expected {nvars}"
                    )
                if any(e < 0 for e in mono):
                    raise InputError(f"negative exponent in monomial {mono}")
                if not coeff.is_zero():
                    clean[mono] = coeff
        self.nvars = nvars
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: GaussianRational | int | Fraction) -> "MPoly":
        return cls(nvars, {(0,) * nvars: GR(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MPoly":
        if not 0 <= index < nvars:
            raise InputError(f"variable index {index} out of range for {nvars} variables")
        exponents = [0] * nvars
        exponents[index] = 1
        return cls(nvars, {tuple(exponents): _ONE})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def is_unit(self) -> bool:
        """Nonzero constant: a unit of the polynomial ring over a field."""
        return bool(self.terms) and self.is_constant()

    def constant_value(self) -> GaussianRational:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def total_degree(self) -> int:
        """Total degree; zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(m[var] for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise DivisionByZero("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> GaussianRational:
        return self.terms[self.leading_monomial()]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        names = [f"x{k}" for k in range(self.nvars)]
        return f"MPoly({self.to_text(names)!r})"

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "MPoly") -> None:
        if self.nvars != other.nvars:
            raise VariableCountMismatch(
                f"operands declare {self.nvars} and {other.nvars} variables"
            )

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check_compatible(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, _ZERO) + coeff
        return MPoly(self.nvars, out)

    def __sub__(self, other: "MPoly") -> "MPoly":
        self._check_compatible(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, _ZERO) - coeff
        return MPoly(self.nvars, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "MPoly | GaussianRational | int") -> "MPoly":
        if isinstance(other, (GaussianRational, int)):
            scale = GR(other)
            return MPoly(self.nvars, {m: c * scale for m, c in self.terms.items()})
        self._check_compatible(other)
        out: dict[Monomial, GaussianRational] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                out[mono] = out.get(mono, _ZERO) + ca * cb
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MPoly":
        if exponent < 0:
            raise InputError("negative polynomial power")
        result = MPoly.constant(self.nvars, _ONE)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, factor: GaussianRational) -> "MPoly":
        return self * factor

    def monic(self) -> "MPoly":
        """Divide by the graded-lex leading coefficient; zero stays zero."""
        if not self.terms:
            return self
        lead = self.leading_coefficient()
        if lead.is_one():
            return self
        inv = _ONE / lead
        return self * inv

    # -- division ----------------------------------------------------------

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Exact quotient self / divisor, or raise `NotDivisible`.

        Single-divisor multivariate division in graded-lex order: the leading
        term of the running remainder must be divisible by the divisor's
        leading term at every step, otherwise no exact quotient exists.
        """
        self._check_compatible(divisor)
        if divisor.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        if self.is_zero():
            return self
        lead_mono = divisor.leading_monomial()
        lead_coeff = divisor.terms[lead_mono]
        quotient: dict[Monomial, GaussianRational] = {}
        remainder = self
        while remainder.terms:
            mono = remainder.leading_monomial()
            diff = tuple(a - b for a, b in zip(mono, lead_mono))
            if any(e < 0 for e in diff):
                raise NotDivisible("remainder leading term not divisible")
            coeff = remainder.terms[mono] / lead_coeff
            quotient[diff] = coeff
            remainder = remainder - MPoly(self.nvars, {diff: coeff}) * divisor
        return MPoly(self.nvars, quotient)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    # -- calculus -----------------------------------------------------------

    def partial(self, var: int) -> "MPoly":
        """Formal partial derivative with respect to variable `var`."""
        if not 0 <= var < self.nvars:
            raise InputError(f"variable index {var} out of range")
        out: dict[Monomial, GaussianRational] = {}
        for mono, coeff in self.terms.items():
            e = mono[var]
            if e == 0:
                continue
            lowered = mono[:var] + (e - 1,) + mono[var + 1:]
            out[lowered] = out.get(lowered, _ZERO) + coeff * GR(e)
        return MPoly(self.nvars, out)

    def evaluate(self, point: Iterable[GaussianRational]) -> GaussianRational:
        values = list(point)
        if len(values) != self.nvars:
            raise VariableCountMismatch("evaluation point has wrong length")
        total = _ZERO
        for mono, coeff in self.terms.items():
            term = coeff
            for value, e in zip(values, mono):
                for _ in range(e):
                    term = term * value
            total = total + term
        return total

    # -- serialization --------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, GaussianRational]]:
        """Terms in descending graded-lex order (leading term first)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def to_text(self, var_names: list[str]) -> str:
        from .problem import format_poly  # local import: problem owns the text syntax

        return format_poly(self, var_names)


# -- gcd machinery ------------------------------------------------------------


def _occurring_vars(*polys: MPoly) -> list[int]:
    seen: set[int] = set()
    for p in polys:
        for mono in p.terms:
            for idx, e in enumerate(mono):
                if e > 0:
                    seen.add(idx)
    return sorted(seen)


def _coefficients_in(p: MPoly, var: int) -> dict[int, MPoly]:
    """View p as univariate in `var`: power -> coefficient (free of `var`)."""
    split: dict[int, dict[Monomial, GaussianRational]] = {}
    for mono, coeff in p.terms.items():
        e = mono[var]
        rest = mono[:var] + (0,) + mono[var + 1:]
        split.setdefault(e, {})[rest] = coeff
    return {e: MPoly(p.nvars, terms) for e, terms in split.items()}


def _content_in(p: MPoly, var: int) -> MPoly:
    """Gcd of the univariate-in-`var` coefficients of p."""
    coeffs = list(_coefficients_in(p, var).values())
    return reduce(poly_gcd, coeffs)


def _var_power(nvars: int, var: int, e: int) -> MPoly:
    mono = [0] * nvars
    mono[var] = e
    return MPoly(nvars, {tuple(mono): _ONE})


def _pseudo_rem(a: MPoly, b: MPoly, var: int) -> MPoly:
    """Pseudo-remainder of a by b with respect to `var` (deg_var(b) >= 0).

    Each cancellation step multiplies the remainder by b's leading
    coefficient, so no fractions in the coefficient ring appear.  The result
    differs from a true remainder by a factor that the caller's
    primitive-part step removes.
    """
    db = b.degree_in(var)
    lead_b = _coefficients_in(b, var)[db]
    r = a
    while not r.is_zero() and r.degree_in(var) >= db:
        dr = r.degree_in(var)
        lead_r = _coefficients_in(r, var)[dr]
        r = r * lead_b - b * lead_r * _var_power(a.nvars, var, dr - db)
    return r


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Monic greatest common divisor; gcd(a, 0) is monic(a).

    Content/primitive-part recursion over the occurring variables with a
    pseudo-remainder sequence in the chosen main variable; primitive parts
    are taken at every step to keep coefficients small.
    """
    if a.nvars != b.nvars:
        raise VariableCountMismatch("gcd operands declare different variable counts")
    if a.is_zero() and b.is_zero():
        raise InputError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()

    occurring = _occurring_vars(a, b)
    if not occurring:
        return MPoly.constant(a.nvars, _ONE)
    var = occurring[-1]

    content_a = _content_in(a, var)
    content_b = _content_in(b, var)
    prim_a = a.exact_div(content_a)
    prim_b = b.exact_div(content_b)

    if prim_a.degree_in(var) < prim_b.degree_in(var):
        prim_a, prim_b = prim_b, prim_a
    while not prim_b.is_zero():
        r = _pseudo_rem(prim_a, prim_b, var)
        if r.is_zero():
            prim_a, prim_b = prim_b, r
        else:
            prim_a, prim_b = prim_b, r.exact_div(_content_in(r, var))

    if prim_a.degree_in(var) == 0:
        prim_gcd = MPoly.constant(a.nvars, _ONE)
    else:
        prim_gcd = prim_a
    return (poly_gcd(content_a, content_b) * prim_gcd).monic()


def content_gcd(polys: Iterable[MPoly]) -> MPoly:
    """Monic gcd of a nonempty collection, ignoring zero entries."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise InputError("content of an all-zero collection")
    return reduce(poly_gcd, nonzero).monic()


def squarefree_check(f: MPoly) -> bool:
    """True iff gcd(f, all partials) is a unit.  Requires f nonconstant."""
    if f.is_constant():
        raise ConstantPolynomial("squarefree test needs a nonconstant polynomial")
    g = f
    for var in _occurring_vars(f):
        d = f.partial(var)
        if d.is_zero():
            continue
        g = poly_gcd(g, d)
        if g.is_unit():
            return True
    return g.is_unit()


# -- rational functions --------------------------------------------------------


class RationalFunction:
    """A reduced fraction of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly):
        if num.nvars != den.nvars:
            raise VariableCountMismatch("numerator and denominator variable counts differ")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            num = MPoly.zero(num.nvars)
            den = MPoly.constant(num.nvars, _ONE)
        else:
            g = poly_gcd(num, den)
            if not g.is_unit():
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.leading_coefficient()
            if not lead.is_one():
                inv = _ONE / lead
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        names = [f"x{k}" for k in range(self.num.nvars)]
        return f"RationalFunction({self.num.to_text(names)!r}, {self.den.to_text(names)!r})"

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("reciprocal of zero")
        return RationalFunction(self.den, self.num)
