"""Exception hierarchy.

Every domain error carries a stable ``code`` string, which the CLI emits in
its ``{"error": code, "detail": ...}`` payload.
"""


class SchmidtError(Exception):
    code = "SchmidtError"


class ZeroVector(SchmidtError):
    code = "ZeroVector"


class NotNormalized(SchmidtError):
    code = "NotNormalized"


class NonFiniteEntry(SchmidtError):
    code = "NonFiniteEntry"


class SchemaError(SchmidtError):
    code = "SchemaError"


class DimensionError(SchmidtError):
    code = "DimensionError"


class NumericalFailure(SchmidtError):
    code = "NumericalFailure"


class InvalidTolerance(SchmidtError):
    code = "InvalidTolerance"


class InvalidProbe(SchmidtError):
    code = "InvalidProbe"


class InvalidInput(SchmidtError):
    code = "InvalidInput"


class NoConvergence(SchmidtError):
    """Raised when the truncation schedule hits ``n_max`` before converging.

    The partial :class:`~schmidt_dinf.truncation.ConvergenceReport` is kept on
    the ``report`` attribute so callers can inspect the snapshots.
    """

    code = "NoConvergence"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
