"""Command-line driver: check / invariant / integrate / verify.

Exit codes: 0 success, 1 obstruction (not a plane field, non-invariant
hypersurface, not enough independent logarithmic forms), 2 invalid input,
3 certificate failure (a previously emitted report does not re-verify, or an
internal identity broke -- the latter is always a defect).
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    CertificateError,
    DarbouxError,
    FlatnessViolated,
    InputError,
    InsufficientHypersurfaces,
    NotInvariant,
    NotLDS,
    ObstructionError,
)
from .integrals import (
    Hypersurface,
    build_log_form,
    cleared_log_derivative,
    cofactor_matrix,
    divide_forms,
    first_integral,
    flat_kernel,
    invariance_cofactor,
    nullspace_basis,
    verify_first_integral,
)
from .plane_field import load_plane_field
from .problem import ProblemFile, format_form, format_poly, format_rational_function, parse_problem
from .report import (
    Report,
    error_report,
    format_component,
    parse_report,
    report_from_cofactors,
    report_from_first_integral,
    report_from_plane_field,
    serialize_report,
)

EXIT_OK = 0
EXIT_OBSTRUCTION = 1
EXIT_INVALID_INPUT = 2
EXIT_CERTIFICATE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darboux",
        description="Exact verification of Darboux-type first integrals "
                    "for polynomial plane fields.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "check": "validate the plane field only (decomposability, integrability)",
        "invariant": "test each hypersurface for invariance and report cofactors",
        "integrate": "run the full first-integral pipeline",
        "verify": "re-check the certificates of a previously emitted report",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("file", help="problem file (UTF-8, '#' comments)")
        p.add_argument("--machine", action="store_true",
                       help="emit the line-oriented machine report")
        p.add_argument("--max-degree", type=int, default=None, metavar="N",
                       help="reject inputs whose polynomials exceed total degree N")
        p.add_argument("--quiet", action="store_true", help="suppress report output")
        if name == "verify":
            p.add_argument("--report", required=True, metavar="PATH",
                           help="machine report to re-check against the problem")
    return parser


def _enforce_max_degree(problem: ProblemFile, limit: int | None) -> None:
    if limit is None:
        return
    for poly in problem.omega.coefficients():
        if poly.total_degree() > limit:
            raise InputError(f"omega coefficient degree exceeds --max-degree {limit}")
    for hyp in problem.hyps:
        if hyp.total_degree() > limit:
            raise InputError(f"hypersurface degree exceeds --max-degree {limit}")


def _hyp_label(problem: ProblemFile, index: int | None, fallback: str) -> str:
    if index is not None and 0 <= index < len(problem.hyps):
        return format_poly(problem.hyps[index], problem.vars)
    return fallback


def run(subcommand: str, problem: ProblemFile) -> tuple[Report, int]:
    """Dispatch check/invariant/integrate on a parsed problem."""
    if subcommand == "check":
        try:
            field = load_plane_field(len(problem.vars), problem.codim, problem.omega)
        except NotLDS as err:
            return error_report("not_lds", (str(err),)), EXIT_OBSTRUCTION
        return report_from_plane_field(problem, field), EXIT_OK

    if subcommand == "invariant":
        try:
            field = load_plane_field(len(problem.vars), problem.codim, problem.omega)
        except NotLDS as err:
            return error_report("not_lds", (str(err),)), EXIT_OBSTRUCTION
        records = []
        for index, hyp in enumerate(problem.hyps):
            try:
                records.append(invariance_cofactor(field, hyp))
            except NotInvariant:
                label = _hyp_label(problem, index, "?")
                return (
                    error_report(
                        "not_invariant",
                        (f"hypersurface {label} (index {index}) is not invariant",),
                    ),
                    EXIT_OBSTRUCTION,
                )
        return report_from_cofactors(problem, field, tuple(records)), EXIT_OK

    if subcommand == "integrate":
        try:
            field = load_plane_field(len(problem.vars), problem.codim, problem.omega)
        except NotLDS as err:
            return error_report("not_lds", (str(err),)), EXIT_OBSTRUCTION
        try:
            result = first_integral(field, list(problem.hyps))
        except NotInvariant as err:
            label = _hyp_label(problem, getattr(err, "hyp_index", None), str(err))
            index = getattr(err, "hyp_index", "?")
            return (
                error_report(
                    "not_invariant",
                    (f"hypersurface {label} (index {index}) is not invariant",),
                ),
                EXIT_OBSTRUCTION,
            )
        except InsufficientHypersurfaces as err:
            return error_report("insufficient", (str(err),)), EXIT_OBSTRUCTION
        return report_from_first_integral(problem, result), EXIT_OK

    raise InputError(f"unknown subcommand {subcommand!r}")


# -- verify -----------------------------------------------------------------------------


def _verify_failure(message: str) -> tuple[Report, int]:
    return error_report("error", (f"certificate failure: {message}",)), EXIT_CERTIFICATE


def run_verify(problem: ProblemFile, emitted: Report) -> tuple[Report, int]:
    """Re-check every certificate an emitted report carries against the problem."""
    try:
        field = load_plane_field(len(problem.vars), problem.codim, problem.omega)
    except NotLDS:
        if emitted.status == "not_lds":
            return (
                Report(status="ok",
                       diagnostics=("report certificates re-verified: not_lds confirmed",)),
                EXIT_OK,
            )
        return _verify_failure("problem form is not decomposable but report says otherwise")
    if emitted.status == "not_lds":
        return _verify_failure("report claims not_lds but the form is decomposable")

    if emitted.lds is not None and emitted.lds is not True:
        return _verify_failure("report carries lds = false for a loadable field")
    if emitted.integrable is not None and emitted.integrable != field.integrable:
        return _verify_failure("integrability flag does not match")
    if emitted.content is not None:
        if emitted.content != format_poly(field.content, problem.vars):
            return _verify_failure("extracted content does not match")

    if emitted.status == "not_invariant":
        for hyp in problem.hyps:
            try:
                invariance_cofactor(field, hyp)
            except NotInvariant:
                return (
                    Report(status="ok",
                           diagnostics=("report certificates re-verified: "
                                        "non-invariance confirmed",)),
                    EXIT_OK,
                )
            except InputError:
                continue
        return _verify_failure("report claims non-invariance but all hypersurfaces pass")

    try:
        hyps = [Hypersurface(h) for h in problem.hyps]
        records = [invariance_cofactor(field, h) for h in hyps]
    except (NotInvariant, InputError) as err:
        return _verify_failure(f"cofactors cannot be recomputed: {err}")

    if emitted.cofactors:
        recomputed = tuple(format_form(r.cofactor, problem.vars) for r in records)
        if recomputed != emitted.cofactors:
            return _verify_failure("cofactor forms do not match")

    matrix = cofactor_matrix(records)
    kernel = flat_kernel(matrix)

    if emitted.status == "insufficient":
        try:
            first_integral(field, hyps)
        except InsufficientHypersurfaces:
            return (
                Report(status="ok",
                       diagnostics=("report certificates re-verified: "
                                    "insufficiency confirmed",)),
                EXIT_OK,
            )
        except DarbouxError as err:
            return _verify_failure(f"pipeline fails differently: {err}")
        return _verify_failure("report claims insufficiency but the pipeline succeeds")

    if emitted.kernel_dim is not None and emitted.kernel_dim != len(kernel):
        return _verify_failure(
            f"kernel dimension {emitted.kernel_dim} != recomputed {len(kernel)}"
        )
    for k, vector in enumerate(emitted.kernel):
        if len(vector) != len(records):
            return _verify_failure(f"kernel vector {k} has the wrong length")
        total = None
        for weight, record in zip(vector, records):
            term = record.cofactor * weight
            total = term if total is None else total + term
        if total is not None and not total.is_zero():
            return _verify_failure(f"kernel vector {k} fails the cofactor identity")
    if emitted.kernel:
        rank_rows = [list(v) for v in emitted.kernel]
        nullity = len(nullspace_basis(rank_rows, len(records)))
        rank = len(records) - nullity
        if rank != len(emitted.kernel):
            return _verify_failure("reported kernel vectors are linearly dependent")

    log_forms = []
    hyp_polys = tuple(h.poly for h in hyps)
    for idx, component in enumerate(emitted.components):
        if len(component.exponents) != len(hyps):
            return _verify_failure(f"component {idx} exponent vector has the wrong length")
        try:
            log_form = build_log_form(component.exponents, hyps, field)
        except (FlatnessViolated, InputError) as err:
            return _verify_failure(f"component {idx} fails its certificate: {err}")
        if not verify_first_integral(field, log_form):
            return _verify_failure(f"component {idx} fails the annihilation identity")
        expected_rational = all(e.is_real() for e in component.exponents)
        if component.rational != expected_rational:
            return _verify_failure(f"component {idx} rationality flag is wrong")
        expected_text = format_component(component.exponents, hyp_polys, problem.vars)
        if component.text != expected_text:
            return _verify_failure(f"component {idx} presentation does not match")
        log_forms.append(log_form)

    if log_forms:
        wedge = cleared_log_derivative(log_forms[0])
        for log_form in log_forms[1:]:
            wedge = wedge.wedge(cleared_log_derivative(log_form))
        if wedge.is_zero():
            return _verify_failure("component wedge vanishes; components are dependent")
        try:
            factor = divide_forms(field, wedge)
        except DarbouxError as err:
            return _verify_failure(f"component wedge is not proportional to the field: {err}")
        if emitted.proportionality is not None:
            expected = format_rational_function(factor, problem.vars)
            if emitted.proportionality != expected:
                return _verify_failure("proportionality factor does not match")

    if emitted.verified is not None and emitted.verified is not True:
        return _verify_failure("report carries verified = false despite valid certificates")

    return (
        Report(status="ok",
               diagnostics=("report certificates re-verified against the problem",)),
        EXIT_OK,
    )


# -- entry point -----------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    mode = "machine" if args.machine else "human"

    def emit(report: Report) -> None:
        if not args.quiet:
            sys.stdout.write(serialize_report(report, mode))

    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        emit(error_report("error", (f"cannot read problem file: {err}",)))
        return EXIT_INVALID_INPUT

    try:
        problem = parse_problem(text)
        problem.options = _option_map(args)
        _enforce_max_degree(problem, args.max_degree)
        if args.subcommand == "verify":
            try:
                with open(args.report, "r", encoding="utf-8") as handle:
                    emitted = parse_report(handle.read())
            except OSError as err:
                emit(error_report("error", (f"cannot read report file: {err}",)))
                return EXIT_INVALID_INPUT
            report, code = run_verify(problem, emitted)
        else:
            report, code = run(args.subcommand, problem)
    except InputError as err:
        emit(error_report("error", (str(err),)))
        return EXIT_INVALID_INPUT
    except CertificateError as err:
        emit(error_report("error", (f"internal certificate failure: {err}",)))
        return EXIT_CERTIFICATE
    except ObstructionError as err:
        emit(error_report("error", (str(err),)))
        return EXIT_OBSTRUCTION

    emit(report)
    return code


def _option_map(args: argparse.Namespace) -> dict[str, str]:
    options: dict[str, str] = {}
    if args.machine:
        options["machine"] = "true"
    if args.quiet:
        options["quiet"] = "true"
    if args.max_degree is not None:
        options["max-degree"] = str(args.max_degree)
    return options


def entry() -> None:
    raise SystemExit(main())
