"""Exception hierarchy shared by all darboux modules.

Three families matter to callers:

* ``InputError`` -- the problem data itself is malformed (bad syntax, wrong
  degrees, non-squarefree hypersurfaces, ...).  CLI exit code 2.
* ``ObstructionError`` -- the data is well formed but the construction is
  obstructed (form not decomposable, hypersurface not invariant, not enough
  independent logarithmic forms, ...).  CLI exit code 1.
* ``CertificateError`` -- an exact identity that the pipeline guarantees has
  failed to re-verify.  This indicates a defect, never a property of the
  input.  CLI exit code 3.
"""


class DarbouxError(Exception):
    """Base class for every error raised by this package."""


class InputError(DarbouxError):
    """Malformed or inconsistent input data."""


class ObstructionError(DarbouxError):
    """Valid input on which the requested construction is impossible."""


class CertificateError(DarbouxError):
    """An internally guaranteed exact identity failed to verify."""


# -- input errors -------------------------------------------------------------

class VariableCountMismatch(InputError):
    """Operands declare different ambient variable counts."""


class DivisionByZero(InputError):
    """Division by the zero polynomial."""


class DegreeMismatch(InputError):
    """A form's degree disagrees with the declared codimension or operand."""


class ZeroForm(InputError):
    """The zero form where a nonzero form is required."""


class ConstantPolynomial(InputError):
    """A constant polynomial where a nonconstant one is required."""


class NotSquarefree(InputError):
    """A hypersurface polynomial with a repeated factor."""


class NotCoprime(InputError):
    """Hypersurface polynomials sharing a common factor."""


class ProblemSyntaxError(InputError):
    """Problem-file syntax error with source position."""

    def __init__(self, message: str, line: int, column: int, expected: str | None = None):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{line}:{column}: {message}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UndeclaredVariable(InputError):
    """An identifier not declared on the ``vars`` line."""

    def __init__(self, name: str, line: int, column: int):
        self.name = name
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: undeclared variable '{name}'")


# -- obstruction errors --------------------------------------------------------

class NotDivisible(ObstructionError):
    """Exact polynomial division left a nonzero remainder."""


class NotLDS(ObstructionError):
    """The form fails the decomposability identities: it is no plane field."""


class NotInvariant(ObstructionError):
    """A candidate hypersurface is not invariant under the plane field."""

    def __init__(self, hypersurface: str):
        self.hypersurface = hypersurface
        super().__init__(f"hypersurface {hypersurface} is not invariant")


class FlatnessViolated(ObstructionError):
    """A weight vector whose cleared logarithmic form does not annihilate the field."""


class InsufficientHypersurfaces(ObstructionError):
    """Fewer independent logarithmic forms than the codimension requires."""


class NotProportional(ObstructionError):
    """Two forms that should be proportional are not."""


class RatioNotFirstIntegral(ObstructionError):
    """A ratio of forms whose differential does not annihilate the field."""
