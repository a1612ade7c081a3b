"""Exception types raised across the package."""


class RtzSimError(Exception):
    pass


class IllegalCodeword(RtzSimError):
    """A dual-rail pair reached (1, 1)."""


class ArityMismatch(RtzSimError, ValueError):
    pass


class Inconsistent(RtzSimError, ValueError):
    """Delay constraints admit no (positive integer) solution."""


class Underdetermined(RtzSimError, ValueError):
    """Delay constraints mention a gate kind without pinning its value."""

    def __init__(self, kinds, message=None):
        self.kinds = tuple(kinds)
        super().__init__(message or f"underdetermined delay for: {', '.join(self.kinds)}")


class Oscillation(RtzSimError):
    """The step limit was exceeded."""


class ProtocolStall(RtzSimError):
    """The handshake environment waited on an acknowledge that never came."""


class TooManyInputs(RtzSimError, ValueError):
    pass


class UnsupportedKind(RtzSimError, ValueError):
    pass


class DomainError(RtzSimError, ValueError):
    pass


class RangeError(RtzSimError, ValueError):
    pass


class ParseError(RtzSimError, ValueError):
    def __init__(self, message, *, source=None, line=None, field=None):
        self.source, self.line, self.field = source, line, field
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
