"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``); size caps
derive from :class:`ResourceCapError` so callers can tell "bad data" from
"too big for this algorithm".
"""


class EmbedqError(Exception):
    """Base class for every error raised by embedq."""


class InputError(EmbedqError, ValueError):
    pass


class ShapeError(InputError):
    """Two inputs disagree on a dimension."""


class ResourceCapError(EmbedqError):
    def __init__(self, message, n=None, cap=None):
        super().__init__(message)
        self.n = n
        self.cap = cap


class NonFiniteError(InputError):
    def __init__(self, row, col):
        super().__init__(f"non-finite value at row {row}, column {col}")
        self.row = row
        self.col = col


class EmptyInputError(InputError):
    pass


class EmptySubsetError(InputError):
    pass


class DimensionMismatchError(ShapeError):
    pass


class RowCountMismatchError(ShapeError):
    pass


class InconsistentSummaryError(ShapeError):
    pass


class TooFewSamplesError(InputError):
    pass


class InvalidClusterCountError(InputError):
    pass


class InvalidNeighborhoodSizeError(InputError):
    pass


class InvalidCountError(InputError):
    pass


class WrongInputDimensionError(ShapeError):
    pass


class InvalidTargetDimError(InputError):
    pass


class MissingLabelColumnError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SvdNonConvergenceError(EmbedqError):
    pass


class ClusteringTooLargeError(ResourceCapError):
    pass


class TooLargeForRankMetricsError(ResourceCapError):
    pass
