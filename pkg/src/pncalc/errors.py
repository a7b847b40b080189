"""Exception hierarchy shared by every module of the package."""


class PNError(Exception):
    """Base class for all errors raised by pncalc."""


class ExprSyntaxError(PNError, ValueError):
    def __init__(self, text, pos, expected):
        self.text = text
        self.pos = pos
        self.expected = tuple(expected)
        got = text[pos] if pos < len(text) else "end of input"
        super().__init__(
            f"syntax error at position {pos} (got {got!r}); expected one of: "
            + ", ".join(self.expected)
        )


class UnknownIdentifier(PNError, ValueError):
    def __init__(self, name, pos=None):
        self.name = name
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"unknown identifier {name!r}{where}")


class DivisionByZero(PNError, ZeroDivisionError):
    pass


class DivisionByZeroConstant(DivisionByZero):
    pass


class PoleAtPoint(PNError, ZeroDivisionError):
    pass


class IndexOutOfRange(PNError, IndexError):
    pass


class ChartMismatch(PNError, ValueError):
    pass


class DegreeMismatch(PNError, ValueError):
    pass


class NotSkew(PNError, ValueError):
    pass


class PreconditionFailed(PNError):
    """A theorem hypothesis does not hold for the given structure."""

    def __init__(self, predicate, message=None):
        self.predicate = predicate
        super().__init__(message or f"precondition failed: {predicate}")


class NotAdmissible(PreconditionFailed):
    def __init__(self, message=None):
        super().__init__("admissible", message or "NP is not skew-symmetric")


class NotCompatible(PreconditionFailed):
    def __init__(self, message=None):
        super().__init__("compatible", message or "P and N are not compatible")


class BadDegree(PNError, ValueError):
    pass


class UnknownFixture(PNError, KeyError):
    pass


class GenerationFailed(PNError, RuntimeError):
    pass


class ValidationError(PNError, ValueError):
    pass


class StructureParseError(PNError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
