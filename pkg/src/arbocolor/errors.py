"""Exception types shared across the package."""


class ArbocolorError(Exception):
    pass


class InvalidArgument(ArbocolorError, ValueError):
    pass


class InvalidConfig(InvalidArgument):
    pass


class InvalidInput(InvalidArgument):
    pass


class DuplicateEdge(ArbocolorError, KeyError):
    pass


class MissingEdge(ArbocolorError, KeyError):
    pass


class DuplicateElement(ArbocolorError, KeyError):
    pass


class MissingElement(ArbocolorError, KeyError):
    pass


class UnsupportedSize(ArbocolorError, ValueError):
    pass


class InternalError(ArbocolorError, RuntimeError):
    """An invariant the algorithms guarantee was found broken."""


class TraceParseError(ArbocolorError, ValueError):
    pass
