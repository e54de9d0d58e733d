"""Polynomial differential forms with wedge, d, and basis contraction.

A `KForm` of degree k stores a map from strictly increasing index tuples
(the dx_{i1}^...^dx_{ik} basis) to `MPoly` coefficients.  Like `MPoly`,
instances are immutable by convention and all operations are pure.

Contraction is only supported against constant coordinate multivectors: the
iterated interior product by coordinate vector fields.  The convention is
fixed here once: ``contract((j1 < ... < jm))`` applies the interior product
by e_{j1} first, then e_{j2}, and so on.
"""

from __future__ import annotations

from typing import Iterator, Mapping

from .errors import DegreeMismatch, InputError, VariableCountMismatch
from .poly import MPoly
from .scalars import GR, GaussianRational

__all__ = ["BasisIndex", "KForm", "gradient_form"]

# Strictly increasing tuple of variable indices naming a wedge basis element.
BasisIndex = tuple[int, ...]


def _check_basis_index(index: BasisIndex, degree: int, nvars: int) -> None:
    if len(index) != degree:
        raise DegreeMismatch(f"basis index {index} has length {len(index)}, expected {degree}")
    if any(b >= nvars or b < 0 for b in index):
        raise InputError(f"basis index {index} out of range for {nvars} variables")
    if any(a >= b for a, b in zip(index, index[1:])):
        raise InputError(f"basis index {index} is not strictly increasing")


def _merge_indices(left: BasisIndex, right: BasisIndex) -> tuple[int, BasisIndex] | None:
    """Sort the concatenation; returns (sign, merged) or None on repeats."""
    if set(left) & set(right):
        return None
    sign = 1
    for b in right:
        # each element of `left` greater than b contributes one transposition
        sign *= (-1) ** sum(1 for a in left if a > b)
    merged = tuple(sorted(left + right))
    return sign, merged


class KForm:
    """A polynomial differential form of fixed degree."""

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int,
                 terms: Mapping[BasisIndex, MPoly] | None = None):
        if degree < 0:
            raise DegreeMismatch("negative form degree")
        clean: dict[BasisIndex, MPoly] = {}
        if terms:
            for index, poly in terms.items():
                _check_basis_index(index, degree, nvars)
                if poly.nvars != nvars:
                    raise VariableCountMismatch(
                        f"coefficient declares {poly.nvars} variables, form {nvars}"
                    )
                if not poly.is_zero():
                    clean[index] = poly
        self.nvars = nvars
        self.degree = degree
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "KForm":
        return cls(nvars, degree)

    @classmethod
    def from_poly(cls, poly: MPoly) -> "KForm":
        """Degree-0 form wrapping a polynomial."""
        return cls(poly.nvars, 0, {(): poly})

    @classmethod
    def basis(cls, nvars: int, index: BasisIndex) -> "KForm":
        """The basis form dx_{i1}^...^dx_{ik} with unit coefficient."""
        one = MPoly.constant(nvars, GR(1))
        return cls(nvars, len(index), {tuple(index): one})

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.nvars == other.nvars and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from .problem import format_form

        names = [f"x{k}" for k in range(self.nvars)]
        return f"KForm({format_form(self, names)!r})"

    def coefficients(self) -> Iterator[MPoly]:
        return iter(self.terms.values())

    def sorted_terms(self) -> list[tuple[BasisIndex, MPoly]]:
        return sorted(self.terms.items())

    def _check_compatible(self, other: "KForm") -> None:
        if self.nvars != other.nvars:
            raise VariableCountMismatch(
                f"operands declare {self.nvars} and {other.nvars} variables"
            )

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        if self.degree != other.degree:
            raise DegreeMismatch("cannot add forms of different degrees")
        out = dict(self.terms)
        for index, poly in other.terms.items():
            merged = out.get(index)
            out[index] = poly if merged is None else merged + poly
        return KForm(self.nvars, self.degree, out)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __neg__(self) -> "KForm":
        return KForm(self.nvars, self.degree, {i: -p for i, p in self.terms.items()})

    def __mul__(self, factor: "MPoly | GaussianRational | int") -> "KForm":
        if isinstance(factor, (GaussianRational, int)):
            factor = MPoly.constant(self.nvars, GR(factor))
        return KForm(self.nvars, self.degree,
                     {i: p * factor for i, p in self.terms.items()})

    __rmul__ = __mul__

    # -- exterior algebra -------------------------------------------------------

    def wedge(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        out_degree = self.degree + other.degree
        out: dict[BasisIndex, MPoly] = {}
        if out_degree > self.nvars:
            return KForm(self.nvars, out_degree)
        for ia, pa in self.terms.items():
            for ib, pb in other.terms.items():
                merged = _merge_indices(ia, ib)
                if merged is None:
                    continue
                sign, index = merged
                contribution = pa * pb if sign > 0 else -(pa * pb)
                present = out.get(index)
                out[index] = contribution if present is None else present + contribution
        return KForm(self.nvars, out_degree, out)

    def exterior_derivative(self) -> "KForm":
        out: dict[BasisIndex, MPoly] = {}
        out_degree = self.degree + 1
        if out_degree > self.nvars:
            return KForm(self.nvars, out_degree)
        for index, poly in self.terms.items():
            for var in range(self.nvars):
                if var in index:
                    continue
                d = poly.partial(var)
                if d.is_zero():
                    continue
                position = sum(1 for b in index if b < var)
                signed = d if position % 2 == 0 else -d
                merged = tuple(sorted(index + (var,)))
                present = out.get(merged)
                out[merged] = signed if present is None else present + signed
        return KForm(self.nvars, out_degree, out)

    def contract_single(self, var: int) -> "KForm":
        """Interior product with the coordinate vector field e_var."""
        if not 0 <= var < self.nvars:
            raise InputError(f"variable index {var} out of range")
        if self.degree == 0:
            return KForm(self.nvars, 0)
        out: dict[BasisIndex, MPoly] = {}
        for index, poly in self.terms.items():
            if var not in index:
                continue
            position = index.index(var)
            reduced = index[:position] + index[position + 1:]
            signed = poly if position % 2 == 0 else -poly
            present = out.get(reduced)
            out[reduced] = signed if present is None else present + signed
        return KForm(self.nvars, self.degree - 1, out)

    def contract(self, index: BasisIndex) -> "KForm":
        """Iterated interior product by the coordinate multivector e_index.

        ``index`` must be strictly increasing; contraction by e_{j1} is
        applied first, then e_{j2}, ...  The empty index is the identity.
        """
        if any(a >= b for a, b in zip(index, index[1:])):
            raise InputError(f"contraction index {index} is not strictly increasing")
        if len(index) > self.degree:
            raise DegreeMismatch(
                f"cannot contract a degree-{self.degree} form with {len(index)} vectors"
            )
        result = self
        for var in index:
            result = result.contract_single(var)
        return result


def gradient_form(f: MPoly) -> KForm:
    """The exact 1-form df = sum of partial derivatives times dx_i."""
    terms = {}
    for var in range(f.nvars):
        d = f.partial(var)
        if not d.is_zero():
            terms[(var,)] = d
    return KForm(f.nvars, 1, terms)
