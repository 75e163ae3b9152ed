"""Exception hierarchy for infinireg."""

from __future__ import annotations


class InfiniregError(Exception):
    """Base error; ``code`` names the failure category."""

    code = "ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class NonUnitError(InfiniregError):
    code = "NON_UNIT"


class DivisionByZeroError(InfiniregError):
    code = "DIVISION_BY_ZERO"


class FlatnessViolation(InfiniregError):
    """An argument of a Bloch generator is not flat (a or 1 - a is not a unit)."""

    code = "FLATNESS_VIOLATION"

    def __init__(self, argument: str, detail: str = ""):
        super().__init__(f"argument {argument} is not flat" + (f": {detail}" if detail else ""))
        self.argument = argument


class DenominatorVanishes(InfiniregError):
    """A substitution sends a denominator to zero."""

    code = "DENOMINATOR_VANISHES"

    def __init__(self, polynomial: str):
        super().__init__(f"denominator {polynomial} vanishes under substitution")
        self.polynomial = polynomial


class NotExact(InfiniregError):
    code = "NOT_EXACT"


class NotExactUpToCap(NotExact):
    """No antiderivative was found inside the bounded ansatz."""

    code = "NOT_EXACT_UP_TO_CAP"

    def __init__(self, cap: int, detail: str = ""):
        super().__init__(f"not exact up to degree cap {cap}" + (f": {detail}" if detail else ""))
        self.cap = cap


class NotInfinitesimal(InfiniregError):
    code = "NOT_INFINITESIMAL"


class InvalidCorrectionDegree(InfiniregError):
    code = "INVALID_CORRECTION_DEGREE"


class GeneratorExhausted(InfiniregError):
    """Rejection sampling hit its retry cap."""

    code = "GENERATOR_EXHAUSTED"


class ScriptError(InfiniregError):
    """An error in a command script, located by line and column."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{self.code} at {line}:{column}: {message}")
        self.line = line
        self.column = column


class NameClash(ScriptError):
    code = "NAME_CLASH"


class UnknownIdent(ScriptError):
    code = "UNKNOWN_IDENT"
