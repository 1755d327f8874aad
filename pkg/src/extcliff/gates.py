"""Gate vocabulary shared by the circuit model, the Pauli engine and the oracle.

Gate names follow the convention of the complexity results this package
implements, which differs from most quantum software for the two phase gates:

======  ========================  ============================  =========
name    matrix                    usual name elsewhere          Clifford
======  ========================  ============================  =========
H       (1/sqrt2)[[1,1],[1,-1]]   H                             yes
T       diag(1, i)                S  (a.k.a. P, sqrt(Z))        yes
S       diag(1, e^{i pi/4})       T  (pi/8 gate)                **no**
X Y Z   Pauli matrices            X Y Z                         yes
CZ      diag(1,1,1,-1)            CZ                            yes
CX      controlled-X              CNOT (first line = control)   yes
SWAP    swap                      SWAP                          yes
======  ========================  ============================  =========

{H, T, CZ} generate the Clifford group; X, Y, Z, CX and SWAP are convenience
gates with their own conjugation rules.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CircuitError, UnsupportedGateError

ARITY: dict[str, int] = {
    "H": 1,
    "T": 1,
    "S": 1,
    "X": 1,
    "Y": 1,
    "Z": 1,
    "CZ": 2,
    "CX": 2,
    "SWAP": 2,
}
CLIFFORD_KINDS = frozenset(k for k in ARITY if k != "S")
SINGLE_QUBIT_CLIFFORDS = ("H", "T", "X", "Y", "Z")
TWO_QUBIT_CLIFFORDS = ("CZ", "CX", "SWAP")

# Opcodes understood by the compiled and pure-Python propagation kernels.
# TDG (inverse of T) only appears in kernel programs, never in circuits.
OP_H, OP_T, OP_TDG, OP_CZ, OP_X, OP_Y, OP_Z, OP_CX, OP_SWAP = range(9)
OPCODES: dict[str, int] = {
    "H": OP_H,
    "T": OP_T,
    "CZ": OP_CZ,
    "X": OP_X,
    "Y": OP_Y,
    "Z": OP_Z,
    "CX": OP_CX,
    "SWAP": OP_SWAP,
}


@dataclass(frozen=True)
class GateInstance:
    """A gate applied to one or two 0-indexed lines.

    For ``CX`` the first line is the control and the second the target.
    """

    kind: str
    lines: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ARITY:
            raise UnsupportedGateError(f"unknown gate {self.kind!r}")
        lines = tuple(int(q) for q in self.lines)
        object.__setattr__(self, "lines", lines)
        if len(lines) != ARITY[self.kind]:
            raise CircuitError(
                f"{self.kind} acts on {ARITY[self.kind]} line(s), got {len(lines)}"
            )
        if any(q < 0 for q in lines):
            raise CircuitError(f"negative line index in {self.kind} {lines}")
        if len(set(lines)) != len(lines):
            raise CircuitError(f"{self.kind} needs distinct lines, got {lines}")

    @property
    def is_clifford(self) -> bool:
        return self.kind in CLIFFORD_KINDS

    def __str__(self) -> str:
        return " ".join([self.kind, *(str(q + 1) for q in self.lines)])


def gate(kind: str, *lines: int) -> GateInstance:
    """Shorthand constructor: ``gate("CX", 0, 2)``."""
    return GateInstance(kind, tuple(lines))
