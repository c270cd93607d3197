"""Exception hierarchy shared across the toolkit."""


class MutafuzzError(Exception):
    """Base class for all toolkit errors."""


class CSyntaxError(MutafuzzError):
    """Malformed input under the supported C subset."""

    def __init__(self, offset, expected, message=None):
        self.offset = offset
        self.expected = frozenset(expected)
        msg = message or "syntax error at byte %d, expected one of %s" % (
            offset,
            sorted(self.expected),
        )
        super().__init__(msg)


class UnsupportedConstruct(MutafuzzError):
    """A C feature outside the supported subset."""

    def __init__(self, construct, offset=None):
        self.construct = construct
        self.offset = offset
        super().__init__("unsupported construct: %s" % construct)


class SpanMismatch(MutafuzzError):
    """A patch span does not align to an AST node boundary."""


class UnresolvedType(MutafuzzError):
    def __init__(self, type_name):
        self.type_name = type_name
        super().__init__("unresolved type: %s" % type_name)


class DomainError(MutafuzzError):
    """Numeric argument outside its documented domain."""


class LengthMismatch(MutafuzzError):
    """Vectors of unequal length."""


class UnknownStatement(MutafuzzError):
    """Statement key not present in the coverage matrix."""


class MissingLevel(MutafuzzError):
    """A build outcome lacks a configured optimization level."""


class BuildToolMissing(MutafuzzError):
    pass


class WorkspaceDirty(MutafuzzError):
    """Original source on disk differs from the recorded bytes."""


class BuildTimeout(MutafuzzError):
    pass


class TestTimeout(MutafuzzError):
    pass


class CounterFileMissing(MutafuzzError):
    pass


class InputRangeError(MutafuzzError):
    """Value does not fit its declared parameter type."""


class UnsupportedSignature(MutafuzzError):
    """Function signature the driver generator cannot handle."""


class DriverWontRun(MutafuzzError):
    pass


class MissingKey(MutafuzzError):
    def __init__(self, name):
        self.name = name
        super().__init__("missing config key: %s" % name)


class BadValue(MutafuzzError):
    def __init__(self, name, detail=""):
        self.name = name
        super().__init__("bad config value for %s%s" % (name, (": " + detail) if detail else ""))
