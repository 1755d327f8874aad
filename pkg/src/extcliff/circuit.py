"""Circuit representation for unitary, non-adaptive and adaptive Clifford tasks.

A :class:`CircuitProgram` is an ordered tuple of operations together with an
input specification and the lines measured at the end.  Operations are

* :class:`~extcliff.gates.GateInstance` -- an unconditional gate,
* :class:`Measure` -- a non-destructive computational-basis measurement that
  binds its outcome to an identifier; the line keeps the post-measurement state,
* :class:`ConditionalGate` -- a gate applied iff an affine function (XOR of some
  earlier outcomes, plus a constant bit) evaluates to 1.

Lines are 0-indexed in the API and 1-indexed in the text format.

Adaptivity beyond affine conditions is available programmatically through
:class:`AdaptiveController`.  The text format cannot express a controller, and
in particular cannot make the *number* of measurements depend on outcomes.
"""

from __future__ import annotations

import abc
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import CircuitError, DimensionError, NotCliffordError
from .gates import GateInstance, gate
from .pauli import ZERO, ONE, BitString, SingleQubitState


@dataclass(frozen=True)
class Measure:
    line: int
    outcome: str

    def __post_init__(self):
        if self.line < 0:
            raise CircuitError(f"negative line {self.line}")
        if not self.outcome:
            raise CircuitError("empty outcome id")


@dataclass(frozen=True)
class Condition:
    """``XOR(outcomes) ^ constant``; the guarded gate fires when this is 1."""

    outcomes: tuple[str, ...] = ()
    constant: int = 0

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if self.constant not in (0, 1):
            raise CircuitError(f"condition constant must be 0 or 1, not {self.constant}")

    def evaluate(self, values: Mapping[str, int]) -> int:
        bit = self.constant
        for name in self.outcomes:
            bit ^= values[name]
        return bit


@dataclass(frozen=True)
class ConditionalGate:
    gate: GateInstance
    condition: Condition


Operation = GateInstance | Measure | ConditionalGate


@dataclass(frozen=True)
class BasisInput:
    bits: BitString


@dataclass(frozen=True)
class ProductInput:
    states: tuple[SingleQubitState, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))


InputSpec = BasisInput | ProductInput


def _op_lines(op: Operation) -> tuple[int, ...]:
    if isinstance(op, GateInstance):
        return op.lines
    if isinstance(op, Measure):
        return (op.line,)
    if isinstance(op, ConditionalGate):
        return op.gate.lines
    raise CircuitError(f"not an operation: {op!r}")


@dataclass(frozen=True)
class CircuitProgram:
    """A Clifford computational task: circuit, input state and output lines."""

    n: int
    ops: tuple[Operation, ...]
    input: InputSpec
    output_lines: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "output_lines", tuple(int(q) for q in self.output_lines))
        n = self.n
        if n < 1:
            raise CircuitError("a circuit needs at least one line")
        seen: set[str] = set()
        for k, op in enumerate(self.ops):
            for q in _op_lines(op):
                if q >= n:
                    raise CircuitError(f"op {k} ({op}) uses line {q} of a {n}-line circuit")
            if isinstance(op, Measure):
                if op.outcome in seen:
                    raise CircuitError(f"outcome id {op.outcome!r} bound twice")
                seen.add(op.outcome)
            elif isinstance(op, ConditionalGate):
                for name in op.condition.outcomes:
                    if name not in seen:
                        raise CircuitError(
                            f"op {k} conditions on {name!r} before it is measured"
                        )
        if isinstance(self.input, BasisInput):
            if self.input.bits.n != n:
                raise DimensionError(f"input has {self.input.bits.n} bits for {n} lines")
        elif isinstance(self.input, ProductInput):
            if len(self.input.states) != n:
                raise DimensionError(f"input has {len(self.input.states)} states for {n} lines")
        else:
            raise CircuitError(f"bad input spec {self.input!r}")
        out = self.output_lines
        if not out:
            raise CircuitError("output_lines must be nonempty")
        if list(out) != sorted(set(out)):
            raise CircuitError(f"output_lines must be sorted and distinct: {out}")
        if out[-1] >= n or out[0] < 0:
            raise CircuitError(f"output line out of range: {out}")

    # -- class predicates -------------------------------------------------
    @property
    def is_unitary(self) -> bool:
        return all(isinstance(op, GateInstance) for op in self.ops)

    @property
    def is_nonadaptive(self) -> bool:
        return not any(isinstance(op, ConditionalGate) for op in self.ops)

    @property
    def is_clifford_only(self) -> bool:
        for op in self.ops:
            g = op.gate if isinstance(op, ConditionalGate) else op
            if isinstance(g, GateInstance) and not g.is_clifford:
                return False
        return True

    @property
    def has_basis_input(self) -> bool:
        return isinstance(self.input, BasisInput)

    @property
    def num_measurements(self) -> int:
        return sum(isinstance(op, Measure) for op in self.ops)

    def measurements(self) -> list[Measure]:
        return [op for op in self.ops if isinstance(op, Measure)]

    def input_states(self) -> tuple[SingleQubitState, ...]:
        """Input as a product of single-qubit states (basis inputs converted)."""
        if isinstance(self.input, ProductInput):
            return self.input.states
        return tuple(ONE if b else ZERO for b in self.input.bits)

    def replace(self, **changes) -> CircuitProgram:
        fields = dict(n=self.n, ops=self.ops, input=self.input, output_lines=self.output_lines)
        fields.update(changes)
        return CircuitProgram(**fields)


def basis_program(
    n: int, ops: Iterable[Operation], output_lines: Iterable[int], x: BitString | str | None = None
) -> CircuitProgram:
    """Convenience constructor for a computational-basis input task."""
    if x is None:
        x = BitString.zeros(n)
    elif isinstance(x, str):
        x = BitString.from_str(x)
    return CircuitProgram(n, tuple(ops), BasisInput(x), tuple(output_lines))


def product_program(
    ops: Iterable[Operation], states: Sequence[SingleQubitState], output_lines: Iterable[int]
) -> CircuitProgram:
    return CircuitProgram(len(states), tuple(ops), ProductInput(tuple(states)), tuple(output_lines))


class AdaptiveController(abc.ABC):
    """Classical decision procedure driving an adaptive circuit.

    After the program's own ops have run, engines call :meth:`next_block` with
    the tuple of all measurement outcomes so far (in measurement order).  It
    returns the next operations to run, or ``None`` to stop.  The controller is
    consulted again only once the returned block has added new outcomes; a
    block without measurements is the last one.  Implementations must be
    deterministic functions of the history; engines may call them many times
    with the same history and from independent runs.
    """

    #: Upper bound on the number of operations emitted for any history.
    max_ops: int = 10_000

    @abc.abstractmethod
    def next_block(self, outcomes: tuple[int, ...]) -> Sequence[Operation] | None:
        ...


@dataclass
class FunctionController(AdaptiveController):
    """Wrap a plain function ``outcomes -> ops | None`` as a controller."""

    fn: Callable[[tuple[int, ...]], Sequence[Operation] | None]
    max_ops: int = 10_000

    def next_block(self, outcomes):
        return self.fn(outcomes)


def iter_controller_ops(
    controller: AdaptiveController, outcomes: Sequence[int], emitted: int
) -> tuple[Sequence[Operation] | None, int]:
    """Fetch the next block, enforcing the controller's operation budget."""
    block = controller.next_block(tuple(outcomes))
    if block is None:
        return None, emitted
    block = tuple(block)
    emitted += len(block)
    if emitted > controller.max_ops:
        raise CircuitError(
            f"controller emitted {emitted} ops, above its declared maximum {controller.max_ops}"
        )
    return block, emitted


# -- rewrites ------------------------------------------------------------


def _extend_input(inp: InputSpec, extra: int) -> InputSpec:
    if extra == 0:
        return inp
    if isinstance(inp, BasisInput):
        return BasisInput(BitString(inp.bits.n + extra, inp.bits.value))
    return ProductInput(inp.states + (ZERO,) * extra)


def unitarize(c: CircuitProgram) -> CircuitProgram:
    """Replace the k-th measurement (on line i) by ``CX(i, n+k)`` into a fresh |0> line.

    The output distribution on ``c.output_lines`` is unchanged.
    """
    if not c.is_nonadaptive:
        raise CircuitError("unitarize needs a non-adaptive circuit")
    K = c.num_measurements
    if K == 0:
        return c
    ops = []
    k = 0
    for op in c.ops:
        if isinstance(op, Measure):
            ops.append(gate("CX", op.line, c.n + k))
            k += 1
        else:
            ops.append(op)
    return CircuitProgram(c.n + K, tuple(ops), _extend_input(c.input, K), c.output_lines)


def defer_measurements(c: CircuitProgram) -> CircuitProgram:
    """Move every measurement onto a fresh ancilla that is never touched again.

    The k-th measurement on line i becomes ``CX(i, n+k)`` followed by a measurement
    of line ``n+k`` bound to the same outcome id, so conditions keep working.
    Measured lines are then disjoint from the output lines and fixed in advance.
    """
    K = c.num_measurements
    if K == 0:
        return c
    ops: list[Operation] = []
    k = 0
    for op in c.ops:
        if isinstance(op, Measure):
            anc = c.n + k
            ops.append(gate("CX", op.line, anc))
            ops.append(Measure(anc, op.outcome))
            k += 1
        else:
            ops.append(op)
    return CircuitProgram(c.n + K, tuple(ops), _extend_input(c.input, K), c.output_lines)


def move_to_front_swaps(lines: Sequence[int], n: int) -> list[GateInstance]:
    """SWAPs carrying ``lines[j]`` to position ``j`` for every j."""
    pos = list(range(n))  # pos[original line] = current position
    at = list(range(n))  # at[position] = original line
    swaps = []
    for j, line in enumerate(lines):
        src = pos[line]
        if src != j:
            swaps.append(gate("SWAP", j, src))
            other = at[j]
            at[j], at[src] = line, other
            pos[line], pos[other] = j, src
    return swaps


def standardize_for_marginal(
    c: CircuitProgram, x: BitString, y: BitString, out_lines: Sequence[int]
) -> CircuitProgram:
    """Rewrite a marginal query into the all-zero form.

    The result is a unitary circuit with all-zero basis input whose probability
    of reading ``0^m`` on lines ``0..m-1`` equals the probability that ``c`` on
    input ``x`` reads ``y`` on ``out_lines``.  X gates are prepended where
    ``x`` is 1 and appended on output lines where ``y`` is 1, SWAPs move the
    output lines to the front, and measurements are unitarized.
    """
    if not c.is_nonadaptive:
        raise CircuitError("marginal standardization needs a non-adaptive circuit")
    if not c.is_clifford_only:
        raise NotCliffordError("circuit contains the non-Clifford S gate")
    out_lines = list(out_lines)
    if not out_lines:
        raise CircuitError("at least one output line is required")
    if y.n != len(out_lines):
        raise DimensionError(f"{y.n} target bits for {len(out_lines)} output lines")
    if x.n != c.n:
        raise DimensionError(f"{x.n}-bit input for a {c.n}-line circuit")
    if len(set(out_lines)) != len(out_lines) or any(not 0 <= q < c.n for q in out_lines):
        raise CircuitError(f"bad output line list {out_lines}")
    pre = [gate("X", q) for q in range(c.n) if x[q]]
    post = [gate("X", q) for j, q in enumerate(out_lines) if y[j]]
    swaps = move_to_front_swaps(out_lines, c.n)
    m = len(out_lines)
    prog = CircuitProgram(
        c.n,
        tuple(pre) + c.ops + tuple(post) + tuple(swaps),
        BasisInput(BitString.zeros(c.n)),
        tuple(range(m)),
    )
    return unitarize(prog)


@dataclass
class _Counter:
    value: int = 0
    used: set = field(default_factory=set)

    def fresh(self, prefix: str = "m") -> str:
        while True:
            self.value += 1
            name = f"{prefix}{self.value}"
            if name not in self.used:
                self.used.add(name)
                return name


def outcome_namer(existing: Iterable[str] = ()) -> Callable[[], str]:
    """Generator of fresh outcome ids ``m1, m2, ...`` avoiding ``existing``."""
    counter = _Counter(used=set(existing))
    return counter.fresh
