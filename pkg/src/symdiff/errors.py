"""Exception hierarchy shared by all modules."""


class SymDiffError(Exception):
    """Base class for every error raised by this package."""


class SeriesError(SymDiffError):
    """Structural misuse of the series ring (order mismatch, bad constant term)."""


class NotAUnit(SeriesError):
    pass


class NotASquare(SeriesError):
    """The series has no square root in the exact coefficient ring."""


class NonSquareConstant(NotASquare):
    """The square root exists over C but its constant term lies outside Q(i)."""


class UnsupportedSqrt(SeriesError):
    """The leading form is not a monomial times a unit; squareness is not decided."""


class AnalysisError(SymDiffError):
    """An analytic negative result or failed precondition at a point."""

    verdict = "AnalysisError"


class IdenticallyDegenerate(AnalysisError):
    verdict = "IdenticallyDegenerate"


class NonSplitHere(AnalysisError):
    verdict = "NonSplit"


class FieldExtensionRequired(AnalysisError):
    """The form splits over C, but not with Gaussian rational coefficients."""

    verdict = "FieldExtensionRequired"


class VanishingAtOrigin(AnalysisError):
    verdict = "VanishingAtOrigin"


class DegenerateJacobian(AnalysisError):
    verdict = "DegenerateJacobian"


class DegenerateAtPoint(AnalysisError):
    verdict = "DegenerateAtPoint"


class NotClosedHere(AnalysisError):
    verdict = "NotClosedHere"


class NotSeparable(AnalysisError):
    verdict = "NotSeparable"


class WebDegenerate(AnalysisError):
    verdict = "WebDegenerate"


class ExprError(SymDiffError):
    """Parse or expansion failure for the expression language."""


class ParseError(ExprError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        loc = f"line {line}, col {col}: " if line else ""
        super().__init__(loc + message)


class ExpansionError(ExprError):
    pass


class NonUnitBase(ExpansionError):
    pass


class SymbolicExponentInNumericContext(ExpansionError):
    pass


class IrrationalConstant(ExpansionError):
    """A constant such as 2^(1/2) or e^1 falls outside the Gaussian rationals."""
