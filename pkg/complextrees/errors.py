"""Exception hierarchy shared by every ComplexTrees module."""


class ComplexTreesError(Exception):
    """Base class for all library errors."""


class InputError(ComplexTreesError, ValueError):
    """Malformed words, alphabets, coefficients or command arguments."""


class DomainViolation(ComplexTreesError, ValueError):
    """A parameter z lies outside the admissible region of a family."""

    def __init__(self, message: str, z: complex = None):
        super().__init__(message)
        self.z = z


class ConjugateFamilyUnsupported(ComplexTreesError):
    """Symbolic operation requested on a family with conjugated letters."""


class NoAdmissibleSamples(ComplexTreesError):
    """Rejection sampling found no admissible parameter."""


class UnknownPreset(ComplexTreesError, KeyError):
    """Preset or reference alphabet name not in the catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NonConvergence(ComplexTreesError, ArithmeticError):
    """An iterative solver exhausted its budget above the residual bound."""


class BudgetExceeded(ComplexTreesError):
    """A word, disk, pair or segment count exceeds its configured budget."""


class BracketFailure(ComplexTreesError, ArithmeticError):
    """Bisection bracket does not enclose a sign change."""


class NoSignChange(ComplexTreesError, ArithmeticError):
    """The requested locus does not cross the ray."""


class OutputError(ComplexTreesError, OSError):
    """Writing an image or data file failed; the message names the path."""
