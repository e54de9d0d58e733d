"""Report assembly and bit-exact serialization.

The machine rendering is line oriented, ``key = value``, in a fixed key
order with canonical scalar/polynomial/form text everywhere, so identical
inputs produce byte-identical reports.  `parse_report` inverts it exactly.
The human rendering carries the same data as prose.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import InputError
from .integrals import FirstIntegralReport, CofactorRecord
from .plane_field import CODIM_DIAGNOSTIC, PlaneField
from .poly import MPoly
from .problem import ProblemFile, format_form, format_poly, format_rational_function
from .scalars import GaussianRational, format_scalar, parse_scalar

__all__ = [
    "Report",
    "ReportComponent",
    "serialize_report",
    "parse_report",
    "report_from_plane_field",
    "report_from_cofactors",
    "report_from_first_integral",
    "error_report",
    "format_component",
]

STATUSES = ("ok", "not_lds", "not_invariant", "insufficient", "error")


@dataclass(frozen=True)
class ReportComponent:
    text: str
    exponents: tuple[GaussianRational, ...]
    rational: bool


@dataclass(frozen=True)
class Report:
    status: str
    lds: bool | None = None
    integrable: bool | None = None
    content: str | None = None
    cofactors: tuple[str, ...] = ()
    kernel_dim: int | None = None
    kernel: tuple[tuple[GaussianRational, ...], ...] = ()
    components: tuple[ReportComponent, ...] = ()
    verified: bool | None = None
    proportionality: str | None = None
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status not in STATUSES:
            raise InputError(f"unknown report status {self.status!r}")


# -- component text -----------------------------------------------------------------


def _exponent_text(e: GaussianRational) -> str:
    if e.im == 0 and e.re.denominator == 1:
        return str(e.re.numerator)
    return f"({format_scalar(e)})"


def format_component(exponents: tuple[GaussianRational, ...],
                     hyp_polys: tuple[MPoly, ...],
                     names: tuple[str, ...]) -> str:
    """Multiplicative presentation, positive exponents first: ``y * x^-2``."""
    factors = []
    positive: list[tuple[MPoly, GaussianRational]] = []
    negative: list[tuple[MPoly, GaussianRational]] = []
    for poly, e in zip(hyp_polys, exponents):
        if e.is_zero():
            continue
        if e.re > 0 or (e.re == 0 and e.im > 0):
            positive.append((poly, e))
        else:
            negative.append((poly, e))
    for poly, exponent in positive + negative:
        base = format_poly(poly, names)
        if len(poly.terms) > 1:
            base = f"({base})"
        if exponent.is_one():
            factors.append(base)
        else:
            factors.append(f"{base}^{_exponent_text(exponent)}")
    return " * ".join(factors)


# -- serialization --------------------------------------------------------------------


def _bool_text(value: bool) -> str:
    return "true" if value else "false"


def _vector_text(vector: tuple[GaussianRational, ...]) -> str:
    return "[" + ", ".join(format_scalar(v) for v in vector) + "]"


def serialize_report(report: Report, mode: str = "machine") -> str:
    if mode == "machine":
        return _serialize_machine(report)
    if mode == "human":
        return _serialize_human(report)
    raise InputError(f"unknown serialization mode {mode!r}")


def _serialize_machine(report: Report) -> str:
    lines = [f"status = {report.status}"]
    if report.lds is not None:
        lines.append(f"lds = {_bool_text(report.lds)}")
    if report.integrable is not None:
        lines.append(f"integrable = {_bool_text(report.integrable)}")
    if report.content is not None:
        lines.append(f"content = {report.content}")
    for j, cofactor in enumerate(report.cofactors):
        lines.append(f"cofactor.{j} = {cofactor}")
    if report.kernel_dim is not None:
        lines.append(f"kernel_dim = {report.kernel_dim}")
    for k, vector in enumerate(report.kernel):
        lines.append(f"kernel.{k} = {_vector_text(vector)}")
    for idx, component in enumerate(report.components):
        lines.append(f"component.{idx} = {component.text}")
        lines.append(f"exponents.{idx} = {_vector_text(component.exponents)}")
        lines.append(f"rational.{idx} = {_bool_text(component.rational)}")
    if report.verified is not None:
        lines.append(f"verified = {_bool_text(report.verified)}")
    if report.proportionality is not None:
        lines.append(f"proportionality = {report.proportionality}")
    for k, message in enumerate(report.diagnostics):
        lines.append(f"diagnostic.{k} = {message}")
    return "\n".join(lines) + "\n"


def _yes_no(value: bool) -> str:
    return "yes" if value else "no"


def _serialize_human(report: Report) -> str:
    lines = [f"status: {report.status}"]
    if report.lds is not None:
        lines.append(f"locally decomposable plane field: {_yes_no(report.lds)}")
    if report.integrable is not None:
        lines.append(f"integrable (Frobenius): {_yes_no(report.integrable)}")
    if report.content is not None:
        lines.append(f"divisorial content extracted: {report.content}")
    for j, cofactor in enumerate(report.cofactors):
        lines.append(f"cofactor of hypersurface {j}: {cofactor}")
    if report.kernel_dim is not None:
        lines.append(f"flat kernel dimension: {report.kernel_dim}")
    for k, vector in enumerate(report.kernel):
        lines.append(f"kernel vector {k}: {_vector_text(vector)}")
    for idx, component in enumerate(report.components):
        kind = "rational exponents" if component.rational else "non-rational exponents"
        lines.append(
            f"component {idx}: {component.text}  "
            f"(exponents {_vector_text(component.exponents)}, {kind})"
        )
    if report.verified is not None:
        lines.append(f"first integral verified exactly: {_yes_no(report.verified)}")
    if report.proportionality is not None:
        lines.append(f"proportionality factor against the field: {report.proportionality}")
    for message in report.diagnostics:
        lines.append(f"note: {message}")
    return "\n".join(lines) + "\n"


# -- machine parsing --------------------------------------------------------------------


def _parse_bool(value: str) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise InputError(f"bad boolean {value!r} in report")


def _parse_vector(value: str) -> tuple[GaussianRational, ...]:
    stripped = value.strip()
    if not (stripped.startswith("[") and stripped.endswith("]")):
        raise InputError(f"bad vector {value!r} in report")
    inner = stripped[1:-1].strip()
    if not inner:
        return ()
    return tuple(parse_scalar(piece.strip()) for piece in inner.split(","))


def _indexed(key: str, prefix: str) -> int | None:
    if not key.startswith(prefix + "."):
        return None
    suffix = key[len(prefix) + 1:]
    if not suffix.isdigit():
        raise InputError(f"bad index in report key {key!r}")
    return int(suffix)


def parse_report(text: str) -> Report:
    """Invert the machine rendering; rejects malformed or out-of-order keys."""
    status: str | None = None
    lds = integrable = verified = None
    content = proportionality = None
    kernel_dim: int | None = None
    cofactors: list[str] = []
    kernel: list[tuple[GaussianRational, ...]] = []
    component_texts: list[str] = []
    component_exponents: list[tuple[GaussianRational, ...]] = []
    component_rational: list[bool] = []
    diagnostics: list[str] = []

    def expect_index(seen: int, index: int, key: str) -> None:
        if index != seen:
            raise InputError(f"report key {key!r} out of order")

    for raw in text.split("\n"):
        line = raw.rstrip()
        if not line:
            continue
        if " = " not in line:
            raise InputError(f"bad report line {line!r}")
        key, value = line.split(" = ", 1)
        if key == "status":
            status = value
        elif key == "lds":
            lds = _parse_bool(value)
        elif key == "integrable":
            integrable = _parse_bool(value)
        elif key == "content":
            content = value
        elif key == "kernel_dim":
            kernel_dim = int(value)
        elif key == "verified":
            verified = _parse_bool(value)
        elif key == "proportionality":
            proportionality = value
        elif (index := _indexed(key, "cofactor")) is not None:
            expect_index(len(cofactors), index, key)
            cofactors.append(value)
        elif (index := _indexed(key, "kernel")) is not None:
            expect_index(len(kernel), index, key)
            kernel.append(_parse_vector(value))
        elif (index := _indexed(key, "component")) is not None:
            expect_index(len(component_texts), index, key)
            component_texts.append(value)
        elif (index := _indexed(key, "exponents")) is not None:
            expect_index(len(component_exponents), index, key)
            component_exponents.append(_parse_vector(value))
        elif (index := _indexed(key, "rational")) is not None:
            expect_index(len(component_rational), index, key)
            component_rational.append(_parse_bool(value))
        elif (index := _indexed(key, "diagnostic")) is not None:
            expect_index(len(diagnostics), index, key)
            diagnostics.append(value)
        else:
            raise InputError(f"unknown report key {key!r}")

    if status is None:
        raise InputError("report has no status line")
    if not (len(component_texts) == len(component_exponents) == len(component_rational)):
        raise InputError("component lines are incomplete")
    components = tuple(
        ReportComponent(text=t, exponents=e, rational=r)
        for t, e, r in zip(component_texts, component_exponents, component_rational)
    )
    return Report(
        status=status,
        lds=lds,
        integrable=integrable,
        content=content,
        cofactors=tuple(cofactors),
        kernel_dim=kernel_dim,
        kernel=tuple(kernel),
        components=components,
        verified=verified,
        proportionality=proportionality,
        diagnostics=tuple(diagnostics),
    )


# -- builders -----------------------------------------------------------------------


def report_from_plane_field(problem: ProblemFile, field: PlaneField) -> Report:
    return Report(
        status="ok",
        lds=True,
        integrable=field.integrable,
        content=format_poly(field.content, problem.vars),
        diagnostics=(CODIM_DIAGNOSTIC,),
    )


def report_from_cofactors(problem: ProblemFile, field: PlaneField,
                          records: tuple[CofactorRecord, ...]) -> Report:
    base = report_from_plane_field(problem, field)
    return replace(
        base,
        cofactors=tuple(format_form(r.cofactor, problem.vars) for r in records),
    )


def report_from_first_integral(problem: ProblemFile,
                               result: FirstIntegralReport) -> Report:
    field = result.system.field
    hyp_polys = tuple(h.poly for h in result.hypersurfaces)
    components = tuple(
        ReportComponent(
            text=format_component(c.exponents, hyp_polys, problem.vars),
            exponents=c.exponents,
            rational=c.rational,
        )
        for c in result.components
    )
    proportionality = None
    if result.proportionality_factor is not None:
        proportionality = format_rational_function(
            result.proportionality_factor, problem.vars
        )
    return Report(
        status="ok",
        lds=True,
        integrable=field.integrable,
        content=format_poly(field.content, problem.vars),
        cofactors=tuple(
            format_form(r.cofactor, problem.vars) for r in result.system.records
        ),
        kernel_dim=len(result.system.kernel_basis),
        kernel=result.system.kernel_basis,
        components=components,
        verified=result.verified,
        proportionality=proportionality,
        diagnostics=(CODIM_DIAGNOSTIC,),
    )


def error_report(status: str, diagnostics: tuple[str, ...]) -> Report:
    return Report(status=status, diagnostics=diagnostics)
