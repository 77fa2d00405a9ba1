"""Exception types shared across the package.

The CLI maps these onto exit codes: input problems exit with 2,
size-guard violations with 3.
"""


class HallforgeError(Exception):
    """Base class for all package errors."""


class InputError(HallforgeError, ValueError):
    """Malformed or inconsistent user input."""


class NonPrime(InputError):
    pass


class FieldMismatch(InputError):
    pass


class QuiverMismatch(InputError):
    pass


class UnknownClassId(InputError, KeyError):
    def __str__(self) -> str:
        return f"unknown class id {self.args[0]!r}" if self.args else "unknown class id"


class LoopVertex(InputError):
    pass


class InsufficientSamples(InputError):
    pass


class DivisionByZero(HallforgeError, ZeroDivisionError):
    pass


class NonIntegerResult(HallforgeError, ArithmeticError):
    """A quantity that must be an integer came out fractional."""


class SizeGuardExceeded(HallforgeError):
    """A computation would enumerate more objects than the configured guard."""

    def __init__(self, what: str, required: int, limit: int):
        self.what = what
        self.required = required
        self.limit = limit
        super().__init__(f"{what}: {required} exceeds guard {limit}")
