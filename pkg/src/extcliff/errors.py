"""Exception hierarchy shared by every engine in the package."""


class ExtCliffError(Exception):
    """Base class for all errors raised by :mod:`extcliff`."""


class DimensionError(ExtCliffError, ValueError):
    """Operands disagree on qubit count or vector length."""


class UnsupportedGateError(ExtCliffError, ValueError):
    """A gate is unknown, or not allowed by the engine it was handed to."""


class NotCliffordError(UnsupportedGateError):
    """A Clifford-only engine received the non-Clifford ``S`` gate."""


class CircuitError(ExtCliffError, ValueError):
    """A circuit violates a structural invariant (line range, outcome ids...)."""


class CircuitSyntaxError(CircuitError):
    """The text circuit format could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class HardClassError(ExtCliffError):
    """The requested simulation lies in a cell with no efficient classical route.

    The message names the hardness result and points at the dense oracle.
    """

    def __init__(self, message: str, theorem: int | None = None):
        self.theorem = theorem
        super().__init__(message)


class InternalConsistencyError(ExtCliffError, RuntimeError):
    """An algebraic invariant that must always hold was violated."""


class WidthCapError(ExtCliffError, ValueError):
    """The dense oracle was asked to simulate beyond its width or branch cap."""


class DimacsError(ExtCliffError, ValueError):
    """A DIMACS CNF file could not be parsed or violates the clause limit."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
