"""Exception hierarchy shared by all iptree modules."""


class IPTreeError(Exception):
    """Base class for every error raised by iptree."""


# structural errors (tree building and cuts)
class TreeError(IPTreeError, ValueError):
    pass


class DuplicateId(TreeError):
    pass


class Cycle(TreeError):
    pass


class SingletonMoveSpace(TreeError):
    pass


class Disconnected(TreeError):
    pass


class DepthBoundExceeded(TreeError):
    pass


class UnknownId(IPTreeError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep messages readable
        return str(self.args[0]) if self.args else "unknown situation"


class NotAPartition(IPTreeError, ValueError):
    pass


class TerminalSituation(IPTreeError, ValueError):
    pass


class NotADescendant(IPTreeError, ValueError):
    pass


# gamble errors
class CarrierMismatch(IPTreeError, ValueError):
    pass


class NotMeasurable(IPTreeError, ValueError):
    pass


class InvalidModel(IPTreeError, ValueError):
    pass


class EmptyConditioningEvent(IPTreeError, ValueError):
    pass


# selections, oracle
class EpsilonNegative(IPTreeError, ValueError):
    pass


class InvalidSelection(IPTreeError, ValueError):
    pass


class EnumerationCapExceeded(IPTreeError):
    """The brute-force enumeration would need more assignments than allowed."""

    def __init__(self, required: int, cap: int, description: str | None = None):
        self.required = required
        self.cap = cap
        self.description = description or str(required)
        super().__init__(
            f"credal enumeration requires {self.description} assignments, cap is {cap}"
        )


class SizeCapExceeded(IPTreeError):
    pass


# laws
class InvalidPlan(IPTreeError, ValueError):
    pass


class NonPositiveParameter(IPTreeError, ValueError):
    pass


class EpsilonOutOfRange(IPTreeError, ValueError):
    pass


class RealizedNotInHorizon(IPTreeError, ValueError):
    pass


# markov
class NonPositiveHorizon(IPTreeError, ValueError):
    pass


# documents
class SpecParseError(IPTreeError, ValueError):
    """A document failed to parse or validate; ``where`` names the field or line."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
