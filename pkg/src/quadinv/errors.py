"""Exception hierarchy shared by all quadinv modules.

The CLI maps these onto exit codes: UsageError -> 1, DataError -> 2,
NumericalError -> 3 (file-level problems are raised as DataError).
"""


class QuadinvError(Exception):
    """Base class for all quadinv errors."""


class UsageError(QuadinvError):
    """The caller passed arguments that violate an operation's contract
    (dimension mismatch, empty dataset, unsupported option)."""


class DataError(QuadinvError):
    """Input data is malformed: non-finite entries, asymmetric matrices
    beyond tolerance, unparseable files."""


class NumericalError(QuadinvError):
    """A numerical procedure failed (non-convergence, singular system
    where a solution was required)."""


class SingularMatrixError(NumericalError):
    """A direct solve hit a (numerically) singular matrix.  Callers doing
    active-set enumeration treat this as 'skip this candidate'."""


class NoSolutionError(NumericalError):
    """QP enumeration produced no KKT point passing the tolerances."""


class InternalError(QuadinvError):
    """A built object violated its own invariants; indicates a bug in the
    construction code, not bad user data."""
