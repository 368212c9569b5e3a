"""Exception hierarchy.

Every error raised by the library derives from :class:`ExchangeGEError`, so the
CLI can map the whole family to exit codes in one place.  Input problems derive
from :class:`InputError` (exit code 2); everything else is a mathematical
failure (exit code 1).
"""


class ExchangeGEError(Exception):
    """Base class for all library errors."""


class InputError(ExchangeGEError):
    """Malformed input: ring tables, files, indices, dimensions."""


class BadCoordinates(InputError):
    pass


class AssociativityViolation(InputError):
    def __init__(self, i: int, j: int, k: int):
        self.indices = (i, j, k)
        super().__init__(f"(b{i} b{j}) b{k} != b{i} (b{j} b{k})")


class UnitLawViolation(InputError):
    def __init__(self, i: int):
        self.index = i
        super().__init__(f"one * b{i} or b{i} * one differs from b{i}")


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MixedRings(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class BadIndex(InputError):
    pass


class WrongRing(InputError):
    pass


class CapExceeded(InputError):
    pass


class NotExchange(ExchangeGEError):
    def __init__(self, a):
        self.element = a
        super().__init__(f"no idempotent e with e in aR and 1-e in (1-a)R for a={a!r}")


class NotCovering(ExchangeGEError):
    pass


class NoSystemFound(ExchangeGEError):
    pass


class NoCover(ExchangeGEError):
    pass


class NotFull(ExchangeGEError):
    pass


class NotIdempotentEntry(ExchangeGEError):
    pass


class NotInvertible(ExchangeGEError):
    pass


class NotUnimodular(ExchangeGEError):
    pass


class NoUnit(ExchangeGEError):
    pass


class NotRegularMatrix(ExchangeGEError):
    pass


class BudgetExhausted(ExchangeGEError):
    pass
