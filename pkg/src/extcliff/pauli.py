"""Exact arithmetic on n-qubit Pauli operators through their labels.

A Pauli operator is stored as ``i**phase_exp * X(a) Z(b)`` where ``a`` and
``b`` are n-bit strings.  Bit ``q`` of a string refers to line ``q`` (0-indexed),
so ``BitString.from_str("10")`` has line 0 set.  The phase is kept as an
exponent of ``i`` modulo 4; this is one concrete encoding of the two phase bits
of a ``(2n+2)``-bit label, chosen because it makes every update an integer add.

Bit strings are Python integers under the hood, so XOR and inner products run
word-wise over arbitrary widths.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

from .errors import CircuitError, DimensionError, NotCliffordError
from .gates import GateInstance

Direction = Literal["forward", "inverse"]


@dataclass(frozen=True)
class BitString:
    """Fixed-length string of bits, packed into an integer."""

    n: int
    value: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative length")
        if self.value < 0 or self.value >> self.n:
            raise DimensionError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls(n, 0)

    @classmethod
    def from_str(cls, text: str) -> BitString:
        """Parse ``"0110"``; character ``i`` becomes bit ``i``."""
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a bit string: {text!r}")
        value = 0
        for i, ch in enumerate(text):
            if ch == "1":
                value |= 1 << i
        return cls(len(text), value)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitString:
        bits = list(bits)
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ValueError(f"bit {i} is {b!r}")
            if b:
                value |= 1 << i
        return cls(len(bits), value)

    @classmethod
    def unit(cls, n: int, i: int) -> BitString:
        if not 0 <= i < n:
            raise DimensionError(f"index {i} out of range for length {n}")
        return cls(n, 1 << i)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __iter__(self):
        return (self[i] for i in range(self.n))

    def __xor__(self, other: BitString) -> BitString:
        _check_len(self.n, other.n)
        return BitString(self.n, self.value ^ other.value)

    def __and__(self, other: BitString) -> BitString:
        _check_len(self.n, other.n)
        return BitString(self.n, self.value & other.value)

    def dot(self, other: BitString) -> int:
        """Inner product modulo 2."""
        _check_len(self.n, other.n)
        return (self.value & other.value).bit_count() & 1

    def weight(self) -> int:
        return self.value.bit_count()

    def to_list(self) -> list[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join("1" if (self.value >> i) & 1 else "0" for i in range(self.n))

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"


def _check_len(n1: int, n2: int) -> None:
    if n1 != n2:
        raise DimensionError(f"length mismatch: {n1} vs {n2}")


_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliOperator:
    """The operator ``i**phase_exp * X(a) Z(b)`` on ``n`` qubits.

    The decomposition is unique, so two labels are equal exactly when the
    operators are equal.
    """

    n: int
    phase_exp: int
    a: BitString
    b: BitString

    def __post_init__(self):
        if self.phase_exp not in (0, 1, 2, 3):
            raise ValueError(f"phase_exp must be in 0..3, got {self.phase_exp}")
        if self.a.n != self.n or self.b.n != self.n:
            raise DimensionError(
                f"label bit strings have lengths {self.a.n}, {self.b.n}; expected {self.n}"
            )

    @classmethod
    def from_ints(cls, n: int, phase_exp: int, a: int, b: int) -> PauliOperator:
        return cls(n, phase_exp & 3, BitString(n, a), BitString(n, b))

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls.from_ints(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, line: int, name: str) -> PauliOperator:
        """``X``, ``Y`` or ``Z`` on one line, identity elsewhere."""
        if not 0 <= line < n:
            raise DimensionError(f"line {line} out of range for {n} qubits")
        m = 1 << line
        if name == "X":
            return cls.from_ints(n, 0, m, 0)
        if name == "Z":
            return cls.from_ints(n, 0, 0, m)
        if name == "Y":
            return cls.from_ints(n, 1, m, m)
        if name == "I":
            return cls.identity(n)
        raise ValueError(f"unknown Pauli {name!r}")

    @classmethod
    def from_label(cls, text: str) -> PauliOperator:
        """Parse ``"-iXIZY"``: optional sign/``i`` prefix, then one letter per line."""
        text = text.strip()
        phase = 0
        if text.startswith(("+", "-")):
            if text[0] == "-":
                phase = 2
            text = text[1:]
        if text.startswith("i"):
            phase += 1
            text = text[1:]
        n = len(text)
        a = b = 0
        for q, ch in enumerate(text):
            if ch == "X":
                a |= 1 << q
            elif ch == "Z":
                b |= 1 << q
            elif ch == "Y":
                a |= 1 << q
                b |= 1 << q
                phase += 1
            elif ch not in "I_":
                raise ValueError(f"bad Pauli character {ch!r}")
        return cls.from_ints(n, phase, a, b)

    @property
    def letters(self) -> str:
        out = []
        for q in range(self.n):
            x, z = self.a[q], self.b[q]
            out.append("IZXY"[2 * x + z])
        return "".join(out)

    def __str__(self) -> str:
        n_y = (self.a.value & self.b.value).bit_count()
        return _PHASE_PREFIX[(self.phase_exp - n_y) & 3] + self.letters

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return pauli_multiply(self, other)

    def is_hermitian(self) -> bool:
        """True when the operator squares to the identity."""
        return (self.phase_exp + self.a.dot(self.b)) % 2 == 0

    def inverse(self) -> PauliOperator:
        # (X(a)Z(b))^-1 = Z(b)X(a) = (-1)^{a.b} X(a)Z(b)
        return PauliOperator.from_ints(
            self.n, -self.phase_exp + 2 * self.a.dot(self.b), self.a.value, self.b.value
        )

    def coefficient(self) -> complex:
        return 1j**self.phase_exp


def pauli_multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Label of the operator product ``p @ q``.

    Moving ``Z(p.b)`` past ``X(q.a)`` contributes ``(-1)**(p.b . q.a)``.
    """
    if p.n != q.n:
        raise DimensionError(f"cannot multiply {p.n}-qubit and {q.n}-qubit Paulis")
    phase = p.phase_exp + q.phase_exp + 2 * p.b.dot(q.a)
    return PauliOperator.from_ints(
        p.n, phase, p.a.value ^ q.a.value, p.b.value ^ q.b.value
    )


def pauli_apply_basis(p: PauliOperator, x: BitString) -> tuple[int, int, BitString]:
    """Apply ``p`` to ``|x>``.

    Returns ``(scalar, sign_exp, y)`` with
    ``p|x> = i**scalar * (-1)**sign_exp * |y>``.
    """
    if p.n != x.n:
        raise DimensionError(f"{p.n}-qubit Pauli applied to {x.n}-bit state")
    return p.phase_exp, p.b.dot(x), x ^ p.a


def _conjugate_label(
    e: int, a: int, b: int, kind: str, lines: Sequence[int], inverse: bool
) -> tuple[int, int, int]:
    """Rule table for ``G P G^dag`` (or ``G^dag P G``) on raw integer labels."""
    q0 = lines[0]
    m0 = 1 << q0
    if kind == "H":
        x = (a >> q0) & 1
        z = (b >> q0) & 1
        if x != z:
            a ^= m0
            b ^= m0
        if x & z:
            e += 2
    elif kind == "T":
        if a & m0:
            b ^= m0
            e += 3 if inverse else 1
    elif kind == "X":
        if b & m0:
            e += 2
    elif kind == "Z":
        if a & m0:
            e += 2
    elif kind == "Y":
        if (a ^ b) & m0:
            e += 2
    elif kind == "CZ":
        m1 = 1 << lines[1]
        x0 = (a >> q0) & 1
        x1 = (a >> lines[1]) & 1
        if x1:
            b ^= m0
        if x0:
            b ^= m1
        if x0 & x1:
            e += 2
    elif kind == "CX":
        m1 = 1 << lines[1]
        if a & m0:
            a ^= m1
        if b & m1:
            b ^= m0
    elif kind == "SWAP":
        q1 = lines[1]
        if ((a >> q0) ^ (a >> q1)) & 1:
            a ^= m0 | (1 << q1)
        if ((b >> q0) ^ (b >> q1)) & 1:
            b ^= m0 | (1 << q1)
    elif kind == "S":
        raise NotCliffordError("S = diag(1, e^{i pi/4}) does not map Paulis to Paulis")
    else:  # pragma: no cover - GateInstance validates kinds
        raise NotCliffordError(f"no conjugation rule for {kind}")
    return e & 3, a, b


def conjugate_by_gate(
    p: PauliOperator, g: GateInstance, inverse: bool = False
) -> PauliOperator:
    """Label of ``g p g^dag``, or of ``g^dag p g`` when ``inverse`` is set."""
    for q in g.lines:
        if q >= p.n:
            raise DimensionError(f"gate {g} touches line {q} of a {p.n}-qubit Pauli")
    e, a, b = _conjugate_label(
        p.phase_exp, p.a.value, p.b.value, g.kind, g.lines, inverse
    )
    return PauliOperator.from_ints(p.n, e, a, b)


def _gate_list(c) -> list[GateInstance]:
    ops = getattr(c, "ops", c)
    gates = []
    for op in ops:
        if not isinstance(op, GateInstance):
            raise CircuitError(
                f"conjugation needs a unitary circuit; found {type(op).__name__}"
            )
        gates.append(op)
    return gates


def conjugate_through_circuit(
    c, p: PauliOperator, direction: Direction = "inverse"
) -> PauliOperator:
    """Conjugate ``p`` through a unitary Clifford circuit ``C``.

    ``direction="inverse"`` gives ``C^dag p C``; ``"forward"`` gives ``C p C^dag``.
    ``c`` is a :class:`~extcliff.circuit.CircuitProgram` or a sequence of gates
    in application order.
    """
    gates = _gate_list(c)
    e, a, b = p.phase_exp, p.a.value, p.b.value
    for g in gates:
        if max(g.lines) >= p.n:
            raise DimensionError(f"gate {g} outside {p.n}-qubit Pauli")
    if direction == "inverse":
        for g in reversed(gates):
            e, a, b = _conjugate_label(e, a, b, g.kind, g.lines, True)
    elif direction == "forward":
        for g in gates:
            e, a, b = _conjugate_label(e, a, b, g.kind, g.lines, False)
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', not {direction!r}")
    return PauliOperator.from_ints(p.n, e, a, b)


NORM_TOL = 1e-12


@dataclass(frozen=True)
class SingleQubitState:
    """Normalized single-qubit state ``alpha|0> + beta|1>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha, beta = complex(self.alpha), complex(self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm!r})")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> SingleQubitState:
        """Bloch-sphere parametrisation ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``."""
        return cls(math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2))

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        return (self.alpha, self.beta)


_R2 = 1 / math.sqrt(2)
ZERO = SingleQubitState(1, 0)
ONE = SingleQubitState(0, 1)
PLUS = SingleQubitState(_R2, _R2)
MINUS = SingleQubitState(_R2, -_R2)
PI4 = SingleQubitState(_R2, cmath.exp(1j * math.pi / 4) * _R2)

NAMED_STATES: dict[str, SingleQubitState] = {
    "0": ZERO,
    "1": ONE,
    "+": PLUS,
    "-": MINUS,
    "pi/4": PI4,
}


def _single_expectation(x: int, z: int, s: SingleQubitState) -> complex:
    u, v = s.alpha, s.beta
    if not x and not z:
        return abs(u) ** 2 + abs(v) ** 2
    if x and not z:
        return u.conjugate() * v + v.conjugate() * u
    if z and not x:
        return abs(u) ** 2 - abs(v) ** 2
    # XZ = [[0, -1], [1, 0]]
    return -u.conjugate() * v + v.conjugate() * u


def expectation_product_state(
    p: PauliOperator, states: Sequence[SingleQubitState]
) -> complex:
    """``<alpha| p |alpha>`` for the product state with one factor per line."""
    if len(states) != p.n:
        raise DimensionError(f"{p.n}-qubit Pauli but {len(states)} states")
    value = p.coefficient()
    a, b = p.a.value, p.b.value
    for q, s in enumerate(states):
        if not isinstance(s, SingleQubitState):
            raise TypeError(f"state {q} is {type(s).__name__}, not SingleQubitState")
        value *= _single_expectation((a >> q) & 1, (b >> q) & 1, s)
        if value == 0:
            return 0j
    return value
