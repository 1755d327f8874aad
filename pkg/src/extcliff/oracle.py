"""Brute-force state-vector reference simulator.

Supports every gate (including the non-Clifford ``S``), non-destructive
measurements, affine conditions, :class:`~extcliff.circuit.AdaptiveController`
and postselection.  Measurements are handled by expanding the full outcome
tree, so every returned distribution is exact up to double rounding.

Amplitude index ``k`` has bit ``q`` equal to the value of line ``q``, so the
basis state ``|x>`` of a :class:`~extcliff.pauli.BitString` sits at index
``x.value``.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .circuit import (
    AdaptiveController,
    CircuitProgram,
    ConditionalGate,
    Measure,
    Operation,
    iter_controller_ops,
)
from .errors import CircuitError, DimensionError, ExtCliffError, WidthCapError
from .gates import GateInstance
from .pauli import PauliOperator, SingleQubitState

MAX_QUBITS = 16
MAX_BRANCHES = 2**12
NORM_TOL = 1e-9
PRUNE = 1e-14

_R2 = 1 / math.sqrt(2)
_W = cmath.exp(1j * math.pi / 4)
_I2 = np.eye(2, dtype=complex)
SINGLE_QUBIT = {
    "H": np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex),
    "T": np.array([[1, 0], [0, 1j]], dtype=complex),
    "S": np.array([[1, 0], [0, _W]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# Two-qubit matrices in the basis |l0 l1> with the gate's first line as the high bit.
TWO_QUBIT = {
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


class OracleError(ExtCliffError, RuntimeError):
    """Numerical invariant of the oracle violated (e.g. norm drift)."""


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n > MAX_QUBITS:
            raise WidthCapError(f"{self.n} qubits exceeds the oracle cap of {MAX_QUBITS}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(2**self.n)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> StateVector:
        if n > MAX_QUBITS:
            raise WidthCapError(f"{n} qubits exceeds the oracle cap of {MAX_QUBITS}")
        v = np.zeros(2**n, dtype=complex)
        v[index] = 1
        return cls(n, v)

    @classmethod
    def product(cls, states: Sequence[SingleQubitState]) -> StateVector:
        n = len(states)
        if n > MAX_QUBITS:
            raise WidthCapError(f"{n} qubits exceeds the oracle cap of {MAX_QUBITS}")
        v = np.ones(1, dtype=complex)
        for s in states:  # line 0 ends up as the least significant bit
            v = np.kron(np.array(s.amplitudes, dtype=complex), v)
        return cls(n, v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> StateVector:
        return StateVector(self.n, self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _tensor(v: np.ndarray, n: int) -> np.ndarray:
    return v.reshape((2,) * n)


def _axis(n: int, q: int) -> int:
    return n - 1 - q


def _split(v: np.ndarray, n: int, q: int) -> np.ndarray:
    """View with axes (higher lines, line q, lower lines)."""
    return v.reshape(1 << (n - 1 - q), 2, 1 << q)


def apply_gate(psi: StateVector, g: GateInstance) -> None:
    """Apply ``g`` to ``psi`` in place."""
    n = psi.n
    if max(g.lines) >= n:
        raise DimensionError(f"{g} outside a {n}-qubit state")
    v = psi.amplitudes
    if len(g.lines) == 1:
        u = SINGLE_QUBIT[g.kind]
        t = _split(v, n, g.lines[0])
        lo, hi = t[:, 0, :].copy(), t[:, 1, :].copy()
        t[:, 0, :] = u[0, 0] * lo + u[0, 1] * hi
        t[:, 1, :] = u[1, 0] * lo + u[1, 1] * hi
        return
    q0, q1 = g.lines
    idx = np.arange(1 << n)
    b0 = (idx >> q0) & 1
    b1 = (idx >> q1) & 1
    if g.kind == "CZ":
        v[(b0 & b1).astype(bool)] *= -1
    elif g.kind == "CX":
        psi.amplitudes = v[idx ^ (b0 << q1)]
    elif g.kind == "SWAP":
        psi.amplitudes = v[idx ^ ((b0 ^ b1) * ((1 << q0) | (1 << q1)))]
    else:  # pragma: no cover - GateInstance validates kinds
        raise ValueError(f"no dense rule for {g.kind}")


def _project(psi: StateVector, line: int, bit: int) -> tuple[float, StateVector | None]:
    t = _split(psi.amplitudes, psi.n, line)
    part = t[:, bit, :]
    p = float(np.vdot(part, part).real)
    if p <= PRUNE:
        return p, None
    out = np.zeros_like(t)
    out[:, bit, :] = part / math.sqrt(p)
    return p, StateVector(psi.n, out.reshape(-1))


@dataclass
class Branch:
    """One leaf of the outcome tree: probability, post-run state and outcomes."""

    probability: float
    state: StateVector
    outcomes: dict[str, int] = field(default_factory=dict)
    history: tuple[int, ...] = ()
    consulted: int = -1  # history length when the controller was last asked


def _initial_state(c: CircuitProgram) -> StateVector:
    if c.n > MAX_QUBITS:
        raise WidthCapError(f"{c.n} lines exceeds the oracle cap of {MAX_QUBITS}")
    if c.has_basis_input:
        return StateVector.basis(c.n, c.input.bits.value)
    return StateVector.product(c.input.states)


def run_branches(
    c: CircuitProgram,
    controller: AdaptiveController | None = None,
    initial: StateVector | None = None,
) -> list[Branch]:
    """Expand every measurement outcome; returns the leaves with nonzero weight."""
    psi0 = _initial_state(c) if initial is None else initial.copy()
    if psi0.n != c.n:
        raise DimensionError("initial state width differs from the circuit")
    leaves: list[Branch] = []
    live = [0]

    def run_ops(ops: Sequence[Operation], start: int, br: Branch, after, emitted: int) -> None:
        psi = br.state
        for k in range(start, len(ops)):
            op = ops[k]
            if isinstance(op, GateInstance):
                apply_gate(psi, op)
            elif isinstance(op, ConditionalGate):
                try:
                    fire = op.condition.evaluate(br.outcomes)
                except KeyError as exc:
                    raise CircuitError(f"condition references unknown outcome {exc}") from None
                if fire:
                    apply_gate(psi, op.gate)
            elif isinstance(op, Measure):
                if op.outcome in br.outcomes:
                    raise CircuitError(f"outcome id {op.outcome!r} bound twice")
                children = []
                for bit in (0, 1):
                    p, post = _project(psi, op.line, bit)
                    if post is not None:
                        children.append((bit, p, post))
                live[0] += len(children) - 1
                if live[0] > MAX_BRANCHES:
                    raise WidthCapError(
                        f"more than {MAX_BRANCHES} live measurement branches"
                    )
                for bit, p, post in children:
                    child = Branch(
                        br.probability * p,
                        post,
                        {**br.outcomes, op.outcome: bit},
                        br.history + (bit,),
                        br.consulted,
                    )
                    run_ops(ops, k + 1, child, after, emitted)
                return
            else:
                raise CircuitError(f"not an operation: {op!r}")
            norm2 = np.vdot(psi.amplitudes, psi.amplitudes).real
            if abs(norm2 - 1.0) > NORM_TOL:
                raise OracleError(f"norm drifted to {math.sqrt(norm2)!r}")
        after(br, emitted)

    def after_block(br: Branch, emitted: int) -> None:
        if controller is None or br.consulted == len(br.history):
            leaves.append(br)
            return
        br.consulted = len(br.history)
        block, emitted = iter_controller_ops(controller, br.history, emitted)
        if block is None:
            leaves.append(br)
            return
        for op in block:
            lines = op.gate.lines if isinstance(op, ConditionalGate) else (
                (op.line,) if isinstance(op, Measure) else op.lines
            )
            if max(lines) >= c.n:
                raise CircuitError(f"controller op {op} outside the {c.n}-line register")
        run_ops(block, 0, br, after_block, emitted)

    run_ops(c.ops, 0, Branch(1.0, psi0), after_block, 0)
    return leaves


def _line_marginals(psi: StateVector, lines: Sequence[int]) -> np.ndarray:
    """Joint probabilities of ``lines``; index bit j (MSB first) = value of lines[j]."""
    n = psi.n
    probs = _tensor(psi.probabilities(), n)
    axes = [_axis(n, q) for q in lines]
    others = tuple(ax for ax in range(n) if ax not in axes)
    marg = probs.sum(axis=others) if others else probs
    # remaining axes are in increasing axis order; permute to the requested order
    remaining = sorted(axes)
    marg = np.transpose(marg, [remaining.index(ax) for ax in axes])
    return marg.reshape(-1)


def run_distribution(
    c: CircuitProgram,
    input_state: StateVector | None = None,
    controller: AdaptiveController | None = None,
    lines: Sequence[int] | None = None,
) -> dict[str, float]:
    """Exact joint distribution of the output lines (or ``lines``).

    Keys are bit strings in output-line order; zero-probability outcomes are
    omitted.
    """
    lines = list(c.output_lines if lines is None else lines)
    if len(set(lines)) != len(lines) or any(not 0 <= q < c.n for q in lines):
        raise CircuitError(f"bad line list {lines}")
    m = len(lines)
    total = np.zeros(2**m)
    for br in run_branches(c, controller, input_state):
        total += br.probability * _line_marginals(br.state, lines)
    s = total.sum()
    if abs(s - 1.0) > NORM_TOL:
        raise OracleError(f"distribution sums to {s!r}")
    return {
        format(k, f"0{m}b"): float(p) for k, p in enumerate(total) if p > PRUNE
    }


def marginal(dist: Mapping[str, float], positions: Sequence[int], values: str) -> float:
    """Sum of ``dist`` over keys whose characters at ``positions`` equal ``values``."""
    return sum(
        p for key, p in dist.items() if all(key[i] == v for i, v in zip(positions, values))
    )


def run_postselected(
    c: CircuitProgram,
    postselect: Mapping[int, int],
    target_line: int,
    target_value: int = 1,
    controller: AdaptiveController | None = None,
) -> float:
    """``Prob(target_line = target_value | postselect)`` as a quotient of marginals."""
    post_lines = sorted(postselect)
    if target_line in postselect:
        raise CircuitError("target line is also postselected")
    lines = post_lines + [target_line]
    dist = run_distribution(c, controller=controller, lines=lines)
    idx = list(range(len(post_lines)))
    cond = "".join(str(postselect[q]) for q in post_lines)
    denom = marginal(dist, idx, cond)
    if denom <= 1e-12:
        raise CircuitError(f"postselected event has probability {denom!r}")
    numer = marginal(dist, idx + [len(post_lines)], cond + str(target_value))
    return numer / denom


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of the labelled operator."""
    if p.n > MAX_QUBITS:
        raise WidthCapError("too many qubits for a dense matrix")
    dim = 2**p.n
    cols = np.arange(dim)
    rows = cols ^ p.a.value
    signs = np.array(
        [(-1) ** ((k & p.b.value).bit_count() & 1) for k in range(dim)], dtype=complex
    )
    mat = np.zeros((dim, dim), dtype=complex)
    mat[rows, cols] = signs * p.coefficient()
    return mat


def apply_pauli_dense(p: PauliOperator, v: StateVector) -> StateVector:
    """Apply the labelled Pauli to a state vector by index permutation and signs."""
    if p.n != v.n:
        raise DimensionError(f"{p.n}-qubit Pauli on a {v.n}-qubit state")
    dim = 2**v.n
    k = np.arange(dim)
    parity = np.bitwise_count(k & p.b.value) & 1
    out = np.zeros(dim, dtype=complex)
    out[k ^ p.a.value] = v.amplitudes * np.where(parity, -1.0, 1.0)
    return StateVector(v.n, out * p.coefficient())


def circuit_unitary(c: CircuitProgram | Sequence[GateInstance], n: int | None = None) -> np.ndarray:
    """Dense unitary of a gate-only circuit."""
    ops = c.ops if isinstance(c, CircuitProgram) else tuple(c)
    if n is None:
        n = c.n
    dim = 2**n
    cols = []
    for k in range(dim):
        psi = StateVector.basis(n, k)
        for g in ops:
            if not isinstance(g, GateInstance):
                raise CircuitError("circuit_unitary needs a gate-only circuit")
            apply_gate(psi, g)
        cols.append(psi.amplitudes)
    return np.stack(cols, axis=1)


def fidelity(u: StateVector, v: StateVector) -> float:
    return float(abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2)
