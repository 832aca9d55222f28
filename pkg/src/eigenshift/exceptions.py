"""
eigenshift - skewness-based matrix perturbation bounds
Copyright (C) 2026 eigenshift developers

Exceptions
==========
Every error raised by the package derives from :class:`EigenshiftError`. Errors that signal a
malformed argument also derive from :class:`ValueError`.

:codeauthor:    eigenshift developers
:maturity:      new
:depends:       none
:platform:      All
"""


class EigenshiftError(Exception):
    """
    Base class for all package errors
    """


class InvalidMatrix(EigenshiftError, ValueError):
    """
    Matrix has non-finite entries or the wrong shape
    """


class InvalidSelection(EigenshiftError, ValueError):
    """
    Index set is empty, has duplicates or is out of range
    """


class DimensionError(EigenshiftError, ValueError):
    """
    Operands have mismatching dimensions
    """


class InvalidRadius(EigenshiftError, ValueError):
    """
    Neighbourhood radius or contour margin outside its admissible range
    """


class DegenerateGap(EigenshiftError):
    """
    A gap that appears in a denominator is zero
    """


class IncompleteInput(EigenshiftError, ValueError):
    """
    A required field is missing
    """

    def __init__(self, missing, context=""):
        self.missing = tuple(missing)
        where = f" for {context}" if context else ""
        super().__init__(f"missing field(s){where}: {', '.join(self.missing)}")


class PreconditionFailed(EigenshiftError):
    """
    A precondition inequality of a comparator bound does not hold
    """

    def __init__(self, inequality, lhs, rhs):
        self.inequality = inequality
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"precondition {inequality} failed: {lhs!r} vs {rhs!r}")


class NegativeSpike(EigenshiftError):
    """
    Low-rank variant called with a non-positive spike
    """


class SubcriticalSpike(EigenshiftError):
    """
    Spike below the detection threshold of the limit law
    """


class ShapeError(EigenshiftError, ValueError):
    """
    Lengths of sequences are inconsistent
    """


class UnsupportedAllInside(EigenshiftError):
    """
    Contour integral requested with every pole inside the contour
    """


class NoSeparatingContour(EigenshiftError):
    """
    No rectangle separates the inside poles from the outside poles
    """


class NonConvergent(EigenshiftError):
    """
    Quadrature did not reach the tolerance
    """


class ProfileError(EigenshiftError):
    """
    Variance profile violates the ensemble requirements
    """


class LayoutError(EigenshiftError):
    """
    Clique layout is overlapping or does not fit
    """


class NotPSD(EigenshiftError):
    """
    Covariance matrix is not positive semidefinite
    """


class SingularInput(EigenshiftError):
    """
    Matrix has a zero singular value
    """


class EmptyResult(EigenshiftError):
    """
    Nothing to aggregate
    """


class UsageError(EigenshiftError, ValueError):
    """
    Command line or configuration error
    """
