"""Exception hierarchy shared across the package.

Everything raised on a bad input or a failed contract derives from
:class:`CdsmError`, so callers (CLI, service) can map domain failures to
exit code 1 / HTTP 4xx in one place. Programming errors (bad indices,
wrong types) stay on the builtin exceptions.
"""


class CdsmError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidWeightsError(CdsmError):
    """Benefit weights are unusable (negative, or summing to zero)."""


class EmptyInputError(CdsmError):
    """An operation that needs at least one element got none."""


class InsufficientDataError(CdsmError):
    """Too few data points for the requested computation."""


class DomainError(CdsmError):
    """An input lies outside the mathematical domain of an operation."""


class FormatError(CdsmError):
    """A file or document could not be parsed or failed validation.

    ``source`` names the file (or logical stream) and ``where`` the
    offending line, cell or field so diagnostics stay actionable.
    """

    def __init__(self, message: str, source: str = "", where: str = ""):
        self.source = source
        self.where = where
        prefix = ": ".join(p for p in (source, where) if p)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class EditError(CdsmError):
    """A what-if edit was rejected; carries the edit index and reason."""

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"edit {index}: {reason}")


class LayoutError(CdsmError):
    """A heatmap grid cannot hold the requested number of tiles."""


class ConflictError(CdsmError):
    """Two inputs claim the same identity (e.g. duplicate TTP ids)."""


class CatalogError(CdsmError):
    """The ATT&CK catalog could not be loaded, fetched or parsed."""


class PipelineError(CdsmError):
    """A sub-module failure surfaced during analysis, tagged with its stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")
