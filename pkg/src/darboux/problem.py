"""Problem-file parsing and the canonical text syntax for polynomials and forms.

The problem file is line oriented; ``#`` starts a comment.

    vars x y z          # ambient variables, in declared order
    codim 2             # codimension p = degree of the plane-field form
    omega x*dy^dz - y*dx^dz + z*dx^dy
    hyp x               # one candidate invariant hypersurface per line
    hyp y

Expression grammar (recursive descent, exact positions on every error):

    polyexpr = ["+"|"-"] pterm (("+"|"-") pterm)*
    pterm    = patom ("*" patom)*
    patom    = scalar | "i" | var ["^" int] | "(" polyexpr ")" ["^" int]
    formexpr = ["+"|"-"] fterm (("+"|"-") fterm)*
    fterm    = (patom "*"?)* diff ("^" diff)*
    diff     = "d" var

``i`` is reserved for the imaginary unit and cannot be declared as a
variable.  The formatters below emit the canonical graded-lex text that the
parsers accept back bit-exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegreeMismatch, ProblemSyntaxError, UndeclaredVariable
from .forms import KForm
from .poly import MPoly, RationalFunction
from .scalars import GR, GaussianRational, format_scalar

__all__ = [
    "Token",
    "ProblemFile",
    "parse_problem",
    "parse_poly_text",
    "parse_form_text",
    "format_poly",
    "format_form",
    "format_rational_function",
    "format_problem",
]


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "symbol"
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"[ \t]+"
    r"|(?P<number>\d+(?:/\d+)?i?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<symbol>[-+*^()])"
)


def _tokenize_line(text: str, line_no: int) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos] == "#":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProblemSyntaxError(
                f"unexpected character {text[pos]!r}", line_no, pos + 1
            )
        if m.lastgroup == "number":
            tokens.append(Token("number", m.group(), line_no, pos + 1))
        elif m.lastgroup == "ident":
            tokens.append(Token("ident", m.group(), line_no, pos + 1))
        elif m.lastgroup == "symbol":
            tokens.append(Token("symbol", m.group(), line_no, pos + 1))
        pos = m.end()
    return tokens


@dataclass
class ProblemFile:
    """Parsed problem: variables, codimension, plane-field form, hypersurfaces."""

    vars: tuple[str, ...]
    codim: int
    omega: KForm
    hyps: tuple[MPoly, ...]
    options: dict[str, str] = field(default_factory=dict)


class _ExprParser:
    """Recursive-descent parser over one line's tokens."""

    def __init__(self, tokens: list[Token], var_names: tuple[str, ...],
                 line_no: int, line_len: int):
        self.tokens = tokens
        self.vars = var_names
        self.index = 0
        self.line_no = line_no
        self.eol_column = line_len + 1

    # -- token helpers ---------------------------------------------------

    def peek(self) -> Token | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ProblemSyntaxError("unexpected end of line", self.line_no,
                                     self.eol_column)
        self.index += 1
        return tok

    def fail(self, message: str, expected: str | None = None) -> None:
        tok = self.peek()
        if tok is None:
            raise ProblemSyntaxError(message, self.line_no, self.eol_column, expected)
        raise ProblemSyntaxError(message, tok.line, tok.column, expected)

    def at_symbol(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "symbol" and tok.text == text

    def expect_end(self) -> None:
        if self.peek() is not None:
            self.fail(f"trailing tokens after expression", expected="end of line")

    def is_differential(self, tok: Token | None) -> bool:
        return (tok is not None and tok.kind == "ident"
                and tok.text not in self.vars
                and len(tok.text) > 1 and tok.text[0] == "d"
                and tok.text[1:] in self.vars)

    def _at_atom(self) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        if tok.kind == "number":
            return True
        if tok.kind == "symbol":
            return tok.text == "("
        return not self.is_differential(tok)

    # -- scalars and atoms --------------------------------------------------

    def _scalar_from_number(self, tok: Token) -> GaussianRational:
        text = tok.text
        if text.endswith("i"):
            return GaussianRational(Fraction(0), Fraction(text[:-1]))
        return GaussianRational(Fraction(text), Fraction(0))

    def _integer_from_number(self, tok: Token) -> int:
        if "/" in tok.text or tok.text.endswith("i"):
            raise ProblemSyntaxError("expected an integer", tok.line, tok.column,
                                     "integer")
        return int(tok.text)

    def _optional_power(self, base: MPoly) -> MPoly:
        if not self.at_symbol("^"):
            return base
        self.advance()
        tok = self.peek()
        if tok is None or tok.kind != "number":
            self.fail("expected integer exponent after '^'", expected="integer")
        exponent = self._integer_from_number(self.advance())
        return base ** exponent

    def parse_patom(self) -> MPoly:
        nvars = len(self.vars)
        tok = self.peek()
        if tok is None:
            self.fail("expected a polynomial factor", expected="factor")
        if tok.kind == "number":
            self.advance()
            return MPoly.constant(nvars, self._scalar_from_number(tok))
        if tok.kind == "symbol" and tok.text == "(":
            self.advance()
            inner = self.parse_polyexpr()
            if not self.at_symbol(")"):
                self.fail("unbalanced parenthesis", expected="')'")
            self.advance()
            return self._optional_power(inner)
        if tok.kind == "ident":
            if tok.text == "i":
                self.advance()
                return MPoly.constant(nvars, GR(0, 1))
            if tok.text in self.vars:
                self.advance()
                base = MPoly.variable(nvars, self.vars.index(tok.text))
                return self._optional_power(base)
            if self.is_differential(tok):
                self.fail(f"differential {tok.text} not allowed inside a polynomial",
                          expected="variable or scalar")
            raise UndeclaredVariable(tok.text, tok.line, tok.column)
        self.fail("expected a polynomial factor", expected="factor")
        raise AssertionError("unreachable")

    # -- polynomial expressions -----------------------------------------------

    def parse_pterm(self) -> MPoly:
        total = self.parse_patom()
        while self.at_symbol("*"):
            self.advance()
            total = total * self.parse_patom()
        return total

    def parse_polyexpr(self) -> MPoly:
        negative = False
        if self.at_symbol("+") or self.at_symbol("-"):
            negative = self.advance().text == "-"
        total = self.parse_pterm()
        if negative:
            total = -total
        while self.at_symbol("+") or self.at_symbol("-"):
            op = self.advance().text
            term = self.parse_pterm()
            total = total - term if op == "-" else total + term
        return total

    # -- form expressions ---------------------------------------------------------

    def parse_diff(self) -> int:
        tok = self.peek()
        if not self.is_differential(tok):
            self.fail("expected a differential", expected="d<var>")
        self.advance()
        return self.vars.index(tok.text[1:])

    def parse_fterm(self) -> tuple[MPoly, list[int]]:
        nvars = len(self.vars)
        coeff = MPoly.constant(nvars, GR(1))
        while not self.is_differential(self.peek()):
            if not self._at_atom():
                self.fail("expected polynomial factor or differential",
                          expected="factor or d<var>")
            coeff = coeff * self.parse_patom()
            if self.at_symbol("*"):
                self.advance()
                continue
            if not self.is_differential(self.peek()):
                self.fail("form term needs a differential", expected="d<var>")
        indices = [self.parse_diff()]
        while self.at_symbol("^"):
            self.advance()
            indices.append(self.parse_diff())
        return coeff, indices

    def parse_formexpr(self) -> KForm:
        nvars = len(self.vars)
        negative = False
        if self.at_symbol("+") or self.at_symbol("-"):
            negative = self.advance().text == "-"
        total: KForm | None = None

        def add_term(coeff: MPoly, indices: list[int], neg: bool) -> None:
            nonlocal total
            degree = len(indices)
            if total is not None and degree != total.degree:
                raise DegreeMismatch(
                    f"{self.line_no}: mixed degrees {total.degree} and {degree} "
                    "in one form expression"
                )
            term = _signed_basis_term(nvars, coeff if not neg else -coeff, indices)
            total = term if total is None else total + term

        coeff, indices = self.parse_fterm()
        add_term(coeff, indices, negative)
        while self.at_symbol("+") or self.at_symbol("-"):
            op = self.advance().text
            coeff, indices = self.parse_fterm()
            add_term(coeff, indices, op == "-")
        assert total is not None
        return total


def _signed_basis_term(nvars: int, coeff: MPoly, indices: list[int]) -> KForm:
    """coeff * dx_{i1}^...^dx_{ik} with the indices sorted into canonical order."""
    degree = len(indices)
    if len(set(indices)) != degree:
        return KForm.zero(nvars, degree)
    inversions = sum(
        1
        for a in range(degree)
        for b in range(a + 1, degree)
        if indices[a] > indices[b]
    )
    signed = coeff if inversions % 2 == 0 else -coeff
    return KForm(nvars, degree, {tuple(sorted(indices)): signed})


def _expr_parser(tokens: list[Token], var_names: tuple[str, ...], line_no: int,
                 source_line: str) -> _ExprParser:
    return _ExprParser(tokens, var_names, line_no, len(source_line))


def parse_poly_text(text: str, var_names: tuple[str, ...] | list[str]) -> MPoly:
    """Parse a standalone polynomial expression."""
    parser = _expr_parser(_tokenize_line(text, 1), tuple(var_names), 1, text)
    poly = parser.parse_polyexpr()
    parser.expect_end()
    return poly


def parse_form_text(text: str, var_names: tuple[str, ...] | list[str]) -> KForm:
    """Parse a standalone form expression."""
    parser = _expr_parser(_tokenize_line(text, 1), tuple(var_names), 1, text)
    form = parser.parse_formexpr()
    parser.expect_end()
    return form


def parse_problem(text: str) -> ProblemFile:
    """Parse a whole problem file, reporting precise positions on errors."""
    var_names: tuple[str, ...] | None = None
    codim: int | None = None
    omega: KForm | None = None
    omega_line = 0
    hyps: list[MPoly] = []
    line_count = 0

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line_count = line_no
        tokens = _tokenize_line(raw, line_no)
        if not tokens:
            continue
        head = tokens[0]
        if head.kind != "ident" or head.text not in ("vars", "codim", "omega", "hyp"):
            raise ProblemSyntaxError(
                f"unknown directive {head.text!r}", head.line, head.column,
                "vars, codim, omega, or hyp",
            )
        body = tokens[1:]
        if head.text == "vars":
            if var_names is not None:
                raise ProblemSyntaxError("duplicate vars line", head.line, head.column)
            if not body:
                raise ProblemSyntaxError("vars line needs at least one name",
                                         head.line, head.column, "identifier")
            names: list[str] = []
            for tok in body:
                if tok.kind != "ident":
                    raise ProblemSyntaxError(f"bad variable name {tok.text!r}",
                                             tok.line, tok.column, "identifier")
                if tok.text == "i":
                    raise ProblemSyntaxError("'i' is reserved for the imaginary unit",
                                             tok.line, tok.column)
                if tok.text in names:
                    raise ProblemSyntaxError(f"duplicate variable {tok.text!r}",
                                             tok.line, tok.column)
                names.append(tok.text)
            for name in names:
                if len(name) > 1 and name[0] == "d" and name[1:] in names:
                    raise ProblemSyntaxError(
                        f"variable {name!r} collides with the differential of "
                        f"{name[1:]!r}", head.line, head.column)
            var_names = tuple(names)
            continue
        if head.text == "codim":
            if codim is not None:
                raise ProblemSyntaxError("duplicate codim line", head.line, head.column)
            if len(body) != 1 or body[0].kind != "number":
                raise ProblemSyntaxError("codim needs one integer", head.line,
                                         head.column, "integer")
            if "/" in body[0].text or body[0].text.endswith("i"):
                raise ProblemSyntaxError("codim must be an integer", body[0].line,
                                         body[0].column, "integer")
            codim = int(body[0].text)
            continue
        # omega and hyp both need the variables declared first
        if var_names is None:
            raise ProblemSyntaxError(
                f"'{head.text}' before any vars line", head.line, head.column, "vars"
            )
        parser = _expr_parser(body, var_names, line_no, raw)
        if head.text == "omega":
            if omega is not None:
                raise ProblemSyntaxError("duplicate omega line", head.line, head.column)
            omega = parser.parse_formexpr()
            parser.expect_end()
            omega_line = line_no
        else:
            hyp = parser.parse_polyexpr()
            parser.expect_end()
            hyps.append(hyp)

    end = line_count + 1
    if var_names is None:
        raise ProblemSyntaxError("missing vars line", end, 1, "vars")
    if codim is None:
        raise ProblemSyntaxError("missing codim line", end, 1, "codim")
    if omega is None:
        raise ProblemSyntaxError("missing omega line", end, 1, "omega")
    if omega.degree != codim:
        raise DegreeMismatch(
            f"{omega_line}: omega has degree {omega.degree}, codim says {codim}"
        )
    return ProblemFile(vars=var_names, codim=codim, omega=omega, hyps=tuple(hyps))


# -- canonical formatting --------------------------------------------------------


def _format_fraction_abs(q) -> str:
    if q.denominator == 1:
        return str(abs(q.numerator))
    return f"{abs(q.numerator)}/{q.denominator}"


def _monomial_text(mono: tuple[int, ...], names: list[str] | tuple[str, ...]) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _term_pieces(coeff: GaussianRational, mono_text: str) -> tuple[str, str]:
    """(sign, body) for one polynomial term; sign is '+' or '-'."""
    if coeff.im == 0:
        sign = "-" if coeff.re < 0 else "+"
        magnitude = _format_fraction_abs(coeff.re)
        if mono_text:
            body = mono_text if magnitude == "1" else f"{magnitude}*{mono_text}"
        else:
            body = magnitude
        return sign, body
    if coeff.re == 0:
        sign = "-" if coeff.im < 0 else "+"
        magnitude = _format_fraction_abs(coeff.im)
        unit = "i" if magnitude == "1" else f"{magnitude}*i"
        body = f"{unit}*{mono_text}" if mono_text else unit
        return sign, body
    body = f"({format_scalar(coeff)})"
    if mono_text:
        body = f"{body}*{mono_text}"
    return "+", body


def format_poly(poly: MPoly, names: list[str] | tuple[str, ...]) -> str:
    """Canonical polynomial text: graded-lex descending, declared-name order."""
    if poly.is_zero():
        return "0"
    pieces = []
    for mono, coeff in poly.sorted_terms():
        sign, body = _term_pieces(coeff, _monomial_text(mono, names))
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def format_form(form: KForm, names: list[str] | tuple[str, ...]) -> str:
    """Canonical form text: basis indices ascending, coefficients canonical."""
    if form.is_zero():
        return "0"
    pieces = []
    for index, poly in form.sorted_terms():
        basis = "^".join(f"d{names[i]}" for i in index)
        items = poly.sorted_terms()
        if len(items) == 1:
            mono, coeff = items[0]
            sign, body = _term_pieces(coeff, _monomial_text(mono, names))
            term = basis if body == "1" else f"{body}*{basis}"
        else:
            sign = "+"
            term = f"({format_poly(poly, names)})*{basis}"
        if not pieces:
            pieces.append(term if sign == "+" else f"-{term}")
        else:
            pieces.append(f" {sign} {term}")
    return "".join(pieces)


def format_rational_function(value: RationalFunction,
                             names: list[str] | tuple[str, ...]) -> str:
    return f"({format_poly(value.num, names)}) / ({format_poly(value.den, names)})"


def format_problem(problem: ProblemFile) -> str:
    """Canonical problem-file text; `parse_problem` reads it back unchanged."""
    lines = ["vars " + " ".join(problem.vars), f"codim {problem.codim}",
             "omega " + format_form(problem.omega, problem.vars)]
    for hyp in problem.hyps:
        lines.append("hyp " + format_poly(hyp, problem.vars))
    return "\n".join(lines) + "\n"
