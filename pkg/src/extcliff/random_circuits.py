"""Random circuit generators used by the tests and the benchmark."""

from __future__ import annotations

import numpy as np

from .circuit import (
    BasisInput,
    CircuitProgram,
    Condition,
    ConditionalGate,
    Measure,
    Operation,
    ProductInput,
)
from .gates import OPCODES, SINGLE_QUBIT_CLIFFORDS, TWO_QUBIT_CLIFFORDS, GateInstance
from .pauli import BitString, PauliOperator, SingleQubitState


def random_gate(n: int, rng: np.random.Generator, allow_s: bool = False) -> GateInstance:
    singles = SINGLE_QUBIT_CLIFFORDS + (("S",) if allow_s else ())
    if n >= 2 and rng.random() < 0.4:
        kind = TWO_QUBIT_CLIFFORDS[rng.integers(len(TWO_QUBIT_CLIFFORDS))]
        a, b = rng.choice(n, size=2, replace=False)
        return GateInstance(kind, (int(a), int(b)))
    kind = singles[rng.integers(len(singles))]
    return GateInstance(kind, (int(rng.integers(n)),))


def random_gates(n: int, count: int, rng: np.random.Generator, allow_s: bool = False) -> list[GateInstance]:
    return [random_gate(n, rng, allow_s) for _ in range(count)]


def random_state(rng: np.random.Generator) -> SingleQubitState:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return SingleQubitState(complex(v[0]), complex(v[1]))


def random_bits(n: int, rng: np.random.Generator) -> BitString:
    return BitString.from_bits(int(b) for b in rng.integers(0, 2, size=n))


def random_pauli(n: int, rng: np.random.Generator) -> PauliOperator:
    a = int(rng.integers(0, 2**n))
    b = int(rng.integers(0, 2**n))
    return PauliOperator.from_ints(n, int(rng.integers(4)), a, b)


def random_output_lines(n: int, rng: np.random.Generator, k: int | None = None) -> tuple[int, ...]:
    if k is None:
        k = int(rng.integers(1, n + 1))
    return tuple(sorted(int(q) for q in rng.choice(n, size=k, replace=False)))


def random_ops(
    n: int,
    count: int,
    rng: np.random.Generator,
    measure_prob: float = 0.0,
    cond_prob: float = 0.0,
    allow_s: bool = False,
) -> list[Operation]:
    """Gates mixed with measurements (ids ``m1, m2, ...``) and affine conditions."""
    ops: list[Operation] = []
    ids: list[str] = []
    for _ in range(count):
        r = rng.random()
        if r < measure_prob:
            ids.append(f"m{len(ids) + 1}")
            ops.append(Measure(int(rng.integers(n)), ids[-1]))
        elif r < measure_prob + cond_prob and ids:
            k = int(rng.integers(1, len(ids) + 1))
            names = tuple(str(x) for x in rng.choice(ids, size=k, replace=False))
            ops.append(
                ConditionalGate(random_gate(n, rng, allow_s), Condition(names, int(rng.integers(2))))
            )
        else:
            ops.append(random_gate(n, rng, allow_s))
    return ops


def random_basis_circuit(
    n: int,
    count: int,
    rng: np.random.Generator,
    measure_prob: float = 0.0,
    cond_prob: float = 0.0,
    out: tuple[int, ...] | None = None,
) -> CircuitProgram:
    ops = random_ops(n, count, rng, measure_prob, cond_prob)
    out = random_output_lines(n, rng) if out is None else out
    return CircuitProgram(n, tuple(ops), BasisInput(random_bits(n, rng)), out)


def random_product_circuit(
    n: int,
    count: int,
    rng: np.random.Generator,
    measure_prob: float = 0.0,
    cond_prob: float = 0.0,
    out: tuple[int, ...] | None = None,
    allow_s: bool = False,
) -> CircuitProgram:
    ops = random_ops(n, count, rng, measure_prob, cond_prob, allow_s)
    out = random_output_lines(n, rng) if out is None else out
    states = tuple(random_state(rng) for _ in range(n))
    return CircuitProgram(n, tuple(ops), ProductInput(states), out)


_KINDS = tuple(OPCODES)


def bench_circuit(n: int, num_gates: int, m: int, seed: int = 0) -> CircuitProgram:
    """Random unitary Clifford circuit on ``n`` lines reading the first ``m`` lines."""
    rng = np.random.default_rng(seed)
    kinds = rng.integers(len(_KINDS), size=num_gates)
    first = rng.integers(n, size=num_gates)
    shift = rng.integers(1, n, size=num_gates) if n > 1 else np.zeros(num_gates, dtype=int)
    ops = []
    for k, a, s in zip(kinds.tolist(), first.tolist(), shift.tolist()):
        kind = _KINDS[k]
        if kind in TWO_QUBIT_CLIFFORDS:
            if n < 2:
                kind = "H"
            else:
                ops.append(GateInstance(kind, (a, (a + s) % n)))
                continue
        ops.append(GateInstance(kind, (a,)))
    x = random_bits(n, rng)
    return CircuitProgram(n, tuple(ops), BasisInput(x), tuple(range(m)))
