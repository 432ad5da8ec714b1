"""Exception hierarchy shared by every layer of the engine."""


class QLevelsError(Exception):
    """Base class for errors raised by qlevels."""


class FieldMismatchError(QLevelsError, ValueError):
    """Operands live in cyclotomic fields of different order."""


class PoleError(QLevelsError, ZeroDivisionError):
    """A denominator factor specializes to the zero series."""


class ConvergenceError(QLevelsError, ArithmeticError):
    """A degree sum failed to become q-adically small before the degree cap."""


class UnmappedSymbolError(QLevelsError, LookupError):
    """A specialization does not assign a value to a symbol that is used."""


class DegreeError(QLevelsError, ValueError):
    """A degree tuple lies outside the model's degree enumeration."""


class SchemaError(QLevelsError, ValueError):
    """A JSON document does not match the expected schema."""
