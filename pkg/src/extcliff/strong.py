"""Efficient strong simulation.

Two engines live here.

:func:`strong_out1_prod` handles non-adaptive circuits on product inputs with a
single output line.  The probability follows from the expectation of
``C^dag Z C`` in the input product state, which is a product of 2x2 expectation
values once the conjugated Pauli label is known.

:func:`strong_bits_marginal` handles non-adaptive circuits on basis inputs and
returns exact marginals over any set of output lines.  After standardizing the
query to "all-zero input, read ``0^m`` on the first ``m`` lines", each output
projector ``(I + Z_i)/2`` is conjugated through the circuit, giving generators
``G_i = i^e_i X(a_i) Z(b_i)``.  The probability is the average over ``t`` in
``{0,1}^m`` of ``<0|G(t)|0>`` where ``G(t)`` is the ordered product of the
selected generators.  Only ``t`` with ``a(t) = 0`` contribute, those form the
kernel of the ``n x m`` matrix with columns ``a_i``, and on that kernel the
value is a character ``(-1)^{u(t)}`` with ``u`` linear.  Evaluating ``u`` on a
kernel basis gives ``p = 2^(l-m)`` when ``u`` vanishes and ``p = 0``
otherwise.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import get_backend
from .circuit import CircuitProgram, ProductInput, standardize_for_marginal, unitarize
from .complexity import TaskClass, refusal
from .errors import (
    CircuitError,
    DimensionError,
    InternalConsistencyError,
    NotCliffordError,
)
from .gates import OP_TDG, OPCODES, GateInstance
from .gf2 import transpose_packed, words_for
from .pauli import BitString, PauliOperator, conjugate_through_circuit, expectation_product_state

CLAMP_SLACK = 1e-12


@dataclass(frozen=True, order=False)
class DyadicProbability:
    """Exactly ``0`` or ``2^-neg_log2``."""

    is_zero: bool
    neg_log2: int = 0

    def __post_init__(self):
        if self.neg_log2 < 0:
            raise ValueError("a probability cannot exceed 1")
        if self.is_zero and self.neg_log2:
            object.__setattr__(self, "neg_log2", 0)

    @classmethod
    def zero(cls) -> DyadicProbability:
        return cls(True, 0)

    @classmethod
    def power(cls, k: int) -> DyadicProbability:
        return cls(False, k)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> DyadicProbability:
        value = Fraction(value)
        if value == 0:
            return cls.zero()
        k = value.denominator.bit_length() - 1
        if value.numerator != 1 or value.denominator != 1 << k:
            raise ValueError(f"{value} is not 0 or a power of 1/2")
        return cls.power(k)

    def as_fraction(self) -> Fraction:
        return Fraction(0) if self.is_zero else Fraction(1, 1 << self.neg_log2)

    def __float__(self) -> float:
        return 0.0 if self.is_zero else 2.0**-self.neg_log2

    def decimal(self) -> str:
        """Exact decimal expansion for ``k <= 64``; ``2^-k`` notation beyond."""
        if self.is_zero:
            return "0"
        k = self.neg_log2
        if k == 0:
            return "1"
        if k > 64:
            return f"2^-{k}"
        digits = str(5**k).rjust(k, "0")
        return "0." + digits

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.neg_log2 == 0:
            return "1"
        return f"2^-{self.neg_log2}"


def _as_bits(value, n: int, what: str) -> BitString:
    if isinstance(value, BitString):
        bits = value
    elif isinstance(value, str):
        bits = BitString.from_str(value)
    else:
        bits = BitString.from_bits(value)
    if bits.n != n:
        raise DimensionError(f"{what} has {bits.n} bits, expected {n}")
    return bits


def _check_nonadaptive_clifford(c: CircuitProgram, many: bool) -> None:
    if not c.is_nonadaptive:
        raise refusal(
            TaskClass(True, isinstance(c.input, ProductInput), many), "strong"
        )
    if not c.is_clifford_only:
        raise NotCliffordError("circuit contains the non-Clifford S gate")


def strong_out1_prod(c: CircuitProgram, output_line: int, y: int) -> float:
    """Probability that ``output_line`` reads ``y`` (product or basis input).

    Raises:
        HardClassError: for adaptive circuits.
        NotCliffordError: if an S gate is present.
    """
    _check_nonadaptive_clifford(c, many=False)
    if y not in (0, 1):
        raise ValueError(f"y must be 0 or 1, not {y!r}")
    if not 0 <= output_line < c.n:
        raise CircuitError(f"output line {output_line} not in a {c.n}-line circuit")
    u = unitarize(c)
    z = PauliOperator.single(u.n, output_line, "Z")
    g = conjugate_through_circuit(u, z, "inverse")
    bias = expectation_product_state(g, u.input_states())
    if abs(bias.imag) > CLAMP_SLACK:
        raise InternalConsistencyError(f"non-real expectation {bias!r}")
    p = (1 + (-1) ** y * bias.real) / 2
    if p < -CLAMP_SLACK or p > 1 + CLAMP_SLACK:
        raise InternalConsistencyError(f"probability {p!r} outside [0, 1]")
    return min(1.0, max(0.0, p))


def compile_inverse(ops: Sequence[GateInstance]) -> np.ndarray:
    """Opcode array for conjugating by ``C^dag . C``: reversed, with T inverted."""
    out = np.zeros((len(ops), 3), dtype=np.int64)
    for k, g in enumerate(reversed(ops)):
        if not isinstance(g, GateInstance):
            raise CircuitError("expected a unitary circuit")
        code = OPCODES.get(g.kind)
        if code is None:
            raise NotCliffordError(f"no propagation rule for {g.kind}")
        if g.kind == "T":
            code = OP_TDG
        out[k, 0] = code
        out[k, 1] = g.lines[0]
        out[k, 2] = g.lines[1] if len(g.lines) == 2 else g.lines[0]
    return out


def _parity_rows(rows: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(rows & mask).sum(axis=1) & 1).astype(np.uint8)


@dataclass(frozen=True)
class MarginalData:
    """Kernel basis and the bits ``k_i = u(c_i)`` behind a marginal."""

    m: int
    kernel: np.ndarray  # (l, words(m)) packed kernel vectors
    k: np.ndarray  # (l,) uint8

    @property
    def probability(self) -> DyadicProbability:
        if np.any(self.k):
            return DyadicProbability.zero()
        return DyadicProbability.power(self.m - self.kernel.shape[0])


def marginal_from_planes(
    xs: np.ndarray,
    zs: np.ndarray,
    ph: np.ndarray,
    m: int,
    x: int = 0,
    y: int = 0,
    backend: str | None = None,
) -> MarginalData:
    """Marginal core over bit-sliced generator images.

    ``xs[q]``/``zs[q]`` carry bit ``j`` of generator ``j`` on line ``q`` and
    ``ph`` holds the two phase planes.  ``x`` is the basis input and ``y`` the
    queried outcome, both as integers.
    """
    kb = get_backend(backend)
    n = xs.shape[0]
    kernel = kb.kernel_basis_rows(xs, m)
    l = kernel.shape[0]
    if l == 0:
        return MarginalData(m, kernel, np.zeros(0, dtype=np.uint8))
    a_rows = transpose_packed(xs, n, m)
    b_rows = transpose_packed(zs, n, m)
    bits = np.unpackbits(
        np.ascontiguousarray(ph, dtype="<u8").view(np.uint8).reshape(2, -1),
        axis=1,
        bitorder="little",
    )[:, :m]
    e = (bits[0] + 2 * bits[1]).astype(np.uint8)
    phases, x_zero = kb.product_phases(a_rows, b_rows, e, kernel)
    if not np.all(x_zero):
        raise InternalConsistencyError("kernel vector with nonzero X part")
    if np.any(phases & 1):
        raise InternalConsistencyError("kernel product has an imaginary sign")
    beta = np.zeros(words_for(m), dtype=np.uint64)
    for q in range(n):
        if (x >> q) & 1:
            beta ^= zs[q]
    yrow = np.frombuffer(y.to_bytes(8 * words_for(m), "little"), dtype="<u8").astype(np.uint64)
    k = ((phases >> 1).astype(np.uint8) ^ _parity_rows(kernel, beta) ^ _parity_rows(kernel, yrow)) & 1
    return MarginalData(m, kernel, k.astype(np.uint8))


def _zero_query_planes(u: CircuitProgram, m: int, backend: str | None):
    """Images of ``Z_0..Z_{m-1}`` under ``P -> C^dag P C``, bit-sliced."""
    W = words_for(m)
    xs = np.zeros((u.n, W), dtype=np.uint64)
    zs = np.zeros((u.n, W), dtype=np.uint64)
    ph = np.zeros((2, W), dtype=np.uint64)
    for i in range(m):
        zs[i, i // 64] |= np.uint64(1) << np.uint64(i % 64)
    get_backend(backend).propagate(xs, zs, ph, compile_inverse(u.ops))
    return xs, zs, ph


def _standardized(c, x, out_lines, y):
    if not c.has_basis_input:
        many = out_lines is None and len(c.output_lines) > 1 or (
            out_lines is not None and len(out_lines) > 1
        )
        if many:
            raise refusal(TaskClass(not c.is_nonadaptive, True, True), "strong")
        raise CircuitError(
            "product input with one output line: use strong_out1_prod"
        )
    out_lines = list(c.output_lines if out_lines is None else out_lines)
    _check_nonadaptive_clifford(c, many=len(out_lines) > 1)
    x = c.input.bits if x is None else _as_bits(x, c.n, "input")
    y = BitString.zeros(len(out_lines)) if y is None else _as_bits(y, len(out_lines), "outcome")
    return standardize_for_marginal(c, x, y, out_lines), len(out_lines)


def marginal_data(
    c: CircuitProgram,
    x: BitString | str | None = None,
    out_lines: Sequence[int] | None = None,
    y: BitString | str | None = None,
    backend: str | None = None,
) -> MarginalData:
    """Kernel basis and ``u`` values for a marginal query (see :func:`strong_bits_marginal`)."""
    u, m = _standardized(c, x, out_lines, y)
    xs, zs, ph = _zero_query_planes(u, m, backend)
    return marginal_from_planes(xs, zs, ph, m, 0, 0, backend)


def strong_bits_marginal(
    c: CircuitProgram,
    x: BitString | str | None = None,
    out_lines: Sequence[int] | None = None,
    y: BitString | str | None = None,
    backend: str | None = None,
) -> DyadicProbability:
    """Exact probability that ``out_lines`` read ``y`` on basis input ``x``.

    Args:
        c: Non-adaptive Clifford circuit with a basis input; intermediate
            measurements are allowed.
        x: Input bits; defaults to the circuit's own input.
        out_lines: Lines to read (any subset, in any order); defaults to
            ``c.output_lines``.
        y: Queried bits, one per entry of ``out_lines``; defaults to zeros.
        backend: Kernel backend name, ``None`` for the import-time default.

    Returns:
        ``0`` or ``2^-k`` exactly.

    Raises:
        HardClassError: adaptive circuit, or product input with several lines.
        NotCliffordError: S gate present.
        InternalConsistencyError: a kernel product had a non-real sign.
    """
    return marginal_data(c, x, out_lines, y, backend).probability


def marginal_generators(
    c: CircuitProgram,
    x: BitString | str | None = None,
    out_lines: Sequence[int] | None = None,
    y: BitString | str | None = None,
) -> list[PauliOperator]:
    """Labels ``C^dag Z_i C`` of the standardized query, one per output line."""
    u, m = _standardized(c, x, out_lines, y)
    return [
        conjugate_through_circuit(u, PauliOperator.single(u.n, i, "Z"), "inverse")
        for i in range(m)
    ]


def u_value(generators: Sequence[PauliOperator], t: BitString) -> int:
    """``u(t)`` from the ordered product of the selected generators.

    ``t`` must select a product with vanishing X part, whose label is then
    ``(-1)^u(t) Z(b)``; on the all-zero input that sign is ``<0|G(t)|0>``.
    """
    if t.n != len(generators):
        raise DimensionError("selector length differs from the generator count")
    n = generators[0].n
    acc = PauliOperator.identity(n)
    for j in range(t.n):
        if t[j]:
            acc = acc * generators[j]
    if acc.a.value:
        raise ValueError("selector is not in the kernel")
    if acc.phase_exp & 1:
        raise InternalConsistencyError("kernel product has an imaginary sign")
    return acc.phase_exp >> 1


def full_distribution(
    c: CircuitProgram,
    x: BitString | str | None = None,
    out_lines: Sequence[int] | None = None,
    backend: str | None = None,
) -> dict[str, DyadicProbability]:
    """All ``2^m`` marginals on ``out_lines`` (keys in ``out_lines`` order)."""
    lines = list(c.output_lines if out_lines is None else out_lines)
    m = len(lines)
    return {
        format(v, f"0{m}b"): strong_bits_marginal(
            c, x, lines, BitString.from_str(format(v, f"0{m}b")), backend
        )
        for v in range(2**m)
    }
