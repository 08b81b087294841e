"""Exception hierarchy shared by all modules."""


class SliceconfError(Exception):
    """Base class for every error raised by the package."""


class InvalidProfileError(SliceconfError, ValueError):
    """A profile has the wrong shape, non-finite samples or a bad grid."""


class GridMismatchError(SliceconfError, ValueError):
    """Two profiles combined in one operation live on different grids."""


class DomainError(SliceconfError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class ExpressionError(SliceconfError, ValueError):
    """A closed-form expression uses syntax outside the accepted grammar."""


class BranchError(SliceconfError, ValueError):
    """A formula with a division by a profile hit a zero of that profile."""


class ConstructionError(SliceconfError, ValueError):
    """A conformal Killing vector construction was given invalid inputs."""


class NotProperError(ConstructionError):
    """The construction would only produce a homothety or an isometry.

    The offending parameter and the diagnostic profiles are attached so
    callers can still report them.
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class CatalogError(SliceconfError, KeyError):
    """Unknown preset name or a preset whose tags contradict its data."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConfigError(SliceconfError, ValueError):
    """A scenario file or command line option is malformed."""
