"""Exception hierarchy shared by all champion_opt modules."""


class ChampionOptError(Exception):
    """Base class for all library errors."""


class InvalidInputError(ChampionOptError, ValueError):
    """An argument violates a documented precondition."""


class SizeLimitError(InvalidInputError):
    """A guarded exhaustive routine was asked to exceed its size limit."""


class SolverFailure(ChampionOptError):
    """A per-path solver raised; carries the index of the offending path."""

    def __init__(self, path_index: int, message: str = "") -> None:
        self.path_index = path_index
        detail = f": {message}" if message else ""
        super().__init__(f"omega-problem solver failed on path {path_index}{detail}")


class SearchBoundaryError(ChampionOptError):
    """A grid search hit its boundary; the bounds must be widened."""


class ConfigError(ChampionOptError, ValueError):
    """An experiment configuration is invalid; names the offending field."""


class InternalInvariantError(ChampionOptError):
    """A cross-check between two internal computations disagreed."""
