"""Exception hierarchy shared across the package.

Every error raised on purpose derives from :class:`AEAnalysisError`, so
front ends (CLI, HTTP service) can map failures to exit codes or problem
objects by class name.
"""


class AEAnalysisError(Exception):
    """Base class for all errors raised by this package."""


# --- record / dataset level ------------------------------------------------

class MissingColumn(AEAnalysisError):
    """A bound column name is absent from the input header."""


class BadGrade(AEAnalysisError):
    """Grade outside the CTCAE range 1..5 (or not an integer)."""


class EmptyDataset(AEAnalysisError):
    """No valid records remain after parsing or filtering."""


class SingleGroup(AEAnalysisError):
    """Fewer than two treatment groups; nothing to compare."""


class MissingField(AEAnalysisError):
    """A class level or filter needs a field some records do not carry."""


class RosterMismatch(AEAnalysisError):
    """Roster file is malformed or internally inconsistent."""


# --- table construction ----------------------------------------------------

class OutOfRange(AEAnalysisError):
    """A relative-frequency entry is not a number in [0, 1]."""


class DimensionMismatch(AEAnalysisError):
    """Matrix shape and label lists disagree, or labels collide."""


# --- correspondence analysis -----------------------------------------------

class DegenerateTable(AEAnalysisError):
    """Every class was dropped by the zero-inertia rule; CA is undefined."""


class ZeroWeight(AEAnalysisError):
    """A chi-square distance coordinate has zero weight but unequal profiles."""


class SvdFailure(AEAnalysisError):
    """The singular value decomposition did not converge."""


# --- biplot ------------------------------------------------------------------

class RankTooLow(AEAnalysisError):
    """A requested display dimension exceeds the decomposition rank."""
