"""Weak simulation: exact chain-rule sampling.

Adaptive Clifford circuits on basis inputs are sampled one bit at a time.
Every measurement is deferred onto a fresh ancilla, so once the outcomes
``y_1..y_{j-1}`` are fixed the prefix up to the j-th measurement is an
ordinary non-adaptive circuit and ``p(y_1..y_j)`` is an exact dyadic marginal.
The conditional ``p(y_j | y_1..y_{j-1})`` is therefore ``k / 2^r`` and is drawn
from exactly ``r`` fair bits.  The final output bits are sampled the same way.

Random bits come from a counter-based generator: draw ``d`` of sample ``s``
under seed ``seed`` reads the first bits of
``SHAKE-256("extcliff/<seed>/<s>/<d>")``.  Samples are therefore reproducible
and independent of batching, ordering or caching.

The sampler keeps a backward tableau (the images of every ``X_q`` and ``Z_q``
under ``P -> C^dag P C`` for the prefix ``C`` run so far) and extends it gate
by gate, so no prefix is propagated twice.  Tableau states, kernel
eliminations and marginals are cached per outcome history and shared across
the samples of a batch.
"""

from __future__ import annotations

import hashlib
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .circuit import (
    AdaptiveController,
    CircuitProgram,
    ConditionalGate,
    Measure,
    iter_controller_ops,
)
from .complexity import TaskClass, refusal
from .errors import CircuitError, DimensionError, InternalConsistencyError, NotCliffordError
from .gates import GateInstance, gate
from .pauli import BitString, _conjugate_label
from .strong import DyadicProbability, strong_out1_prod

Probability = DyadicProbability | Fraction | int


# -- random source ---------------------------------------------------------


def random_bits(seed: int, sample_index: int, draw_index: int, nbits: int) -> int:
    """``nbits`` uniform bits for one draw, as an integer in ``[0, 2^nbits)``."""
    if nbits <= 0:
        return 0
    key = f"extcliff/{seed}/{sample_index}/{draw_index}".encode()
    digest = hashlib.shake_256(key).digest((nbits + 7) // 8)
    return int.from_bytes(digest, "little") & ((1 << nbits) - 1)


def uniform53(seed: int, sample_index: int, draw_index: int = 0) -> float:
    """Uniform float in ``[0, 1)`` on the 53-bit grid."""
    return random_bits(seed, sample_index, draw_index, 53) / 2.0**53


def _fraction(p: Probability) -> Fraction:
    if isinstance(p, DyadicProbability):
        return p.as_fraction()
    return Fraction(p)


LAZY_BITS = 256


def draw_bernoulli(p_zero: Fraction, seed: int, sample_index: int, draw_index: int) -> int:
    """Return 0 with probability ``p_zero``, else 1.

    For ``p_zero = k / 2^r`` exactly ``r`` bits are consumed.  Other rationals
    compare against the first 256 bits of a uniform real.
    """
    if p_zero <= 0:
        return 1
    if p_zero >= 1:
        return 0
    den = p_zero.denominator
    r = den.bit_length() - 1
    if den == 1 << r:
        return 0 if random_bits(seed, sample_index, draw_index, r) < p_zero.numerator else 1
    u = random_bits(seed, sample_index, draw_index, LAZY_BITS)
    return 0 if Fraction(u, 1 << LAZY_BITS) < p_zero else 1


# -- generic chain rule ----------------------------------------------------


def chain_rule_sample(
    marginal_fn: Callable[[tuple[int, ...]], Probability],
    num_vars: int,
    seed: int,
    sample_index: int = 0,
) -> BitString:
    """Sample ``num_vars`` bits given exact prefix marginals.

    Args:
        marginal_fn: ``prefix -> p(prefix)``; must return 1 for the empty prefix.
        num_vars: Number of bits to draw.
        seed: Generator seed.
        sample_index: Which sample of the seeded stream to produce.

    Raises:
        InternalConsistencyError: if ``p(prefix, 0) + p(prefix, 1) != p(prefix)``
            or the empty prefix does not have probability 1.
    """
    prefix: tuple[int, ...] = ()
    p = _fraction(marginal_fn(prefix))
    if p != 1:
        raise InternalConsistencyError(f"empty prefix has probability {p}")
    for j in range(num_vars):
        p0 = _fraction(marginal_fn(prefix + (0,)))
        p1 = _fraction(marginal_fn(prefix + (1,)))
        if p0 < 0 or p1 < 0 or p0 + p1 != p:
            raise InternalConsistencyError(
                f"marginals {p0} + {p1} != {p} after prefix {prefix}"
            )
        bit = draw_bernoulli(p0 / p, seed, sample_index, j)
        prefix += (bit,)
        p = p1 if bit else p0
    return BitString.from_bits(prefix)


# -- backward tableau ------------------------------------------------------

Label = tuple[int, int, int]  # (phase exponent mod 4, X part, Z part)


def _mul(p: Label, q: Label) -> Label:
    return ((p[0] + q[0] + 2 * (p[2] & q[1]).bit_count()) & 3, p[1] ^ q[1], p[2] ^ q[2])


class _Tableau:
    """Images of ``X_q`` and ``Z_q`` under ``P -> C^dag P C``."""

    __slots__ = ("xs", "zs")

    def __init__(self, n: int = 0):
        self.xs: list[Label] = [(0, 1 << q, 0) for q in range(n)]
        self.zs: list[Label] = [(0, 0, 1 << q) for q in range(n)]

    @property
    def n(self) -> int:
        return len(self.xs)

    def copy(self) -> _Tableau:
        t = _Tableau()
        t.xs = list(self.xs)
        t.zs = list(self.zs)
        return t

    def add_line(self) -> int:
        q = self.n
        self.xs.append((0, 1 << q, 0))
        self.zs.append((0, 0, 1 << q))
        return q

    def image(self, e: int, a: int, b: int) -> Label:
        acc: Label = (e & 3, 0, 0)
        q = 0
        while a:
            if a & 1:
                acc = _mul(acc, self.xs[q])
            a >>= 1
            q += 1
        q = 0
        while b:
            if b & 1:
                acc = _mul(acc, self.zs[q])
            b >>= 1
            q += 1
        return acc

    def apply(self, g: GateInstance) -> None:
        """Append ``g`` to the prefix: ``map'(P) = map(g^dag P g)``."""
        new = {}
        for q in g.lines:
            for which, a, b in (("x", 1 << q, 0), ("z", 0, 1 << q)):
                e2, a2, b2 = _conjugate_label(0, a, b, g.kind, g.lines, True)
                new[which, q] = self.image(e2, a2, b2)
        for (which, q), lab in new.items():
            (self.xs if which == "x" else self.zs)[q] = lab


# -- incremental marginals -------------------------------------------------


@dataclass
class _Elimination:
    """Kernel of ``{t : sum t_i a_i = 0}`` maintained as generators arrive."""

    basis: dict[int, tuple[int, int]] = field(default_factory=dict)
    kernel: list[int] = field(default_factory=list)
    count: int = 0

    def copy(self) -> _Elimination:
        return _Elimination(dict(self.basis), list(self.kernel), self.count)

    def add(self, a: int) -> None:
        tag = 1 << self.count
        self.count += 1
        while a:
            low = a & -a
            hit = self.basis.get(low)
            if hit is None:
                self.basis[low] = (a, tag)
                return
            a ^= hit[0]
            tag ^= hit[1]
        self.kernel.append(tag)


def _product(gens: Sequence[Label], t: int) -> Label:
    acc: Label = (0, 0, 0)
    while t:
        low = t & -t
        acc = _mul(acc, gens[low.bit_length() - 1])
        t ^= low
    return acc


@dataclass
class _Node:
    """Sampler state after an outcome history, just before the next bit."""

    tab: _Tableau
    gens: list[Label]
    elim: _Elimination
    values: dict[str, int]
    history: tuple[int, ...]
    block: tuple
    pos: int
    emitted: int
    done: bool  # all operations processed; remaining bits are output lines
    meas_id: str | None = None
    probs: tuple[Fraction, Fraction] | None = None
    signs: dict[int, tuple[int, int]] = field(default_factory=dict)
    consulted: int = -1  # history length when the controller was last asked


@dataclass(frozen=True)
class SampleRecord:
    """One sample: output bits plus the intermediate outcomes, by id."""

    output: BitString
    intermediate: dict[str, int]


class AdaptiveSampler:
    """Exact sampler for adaptive Clifford circuits on basis inputs.

    Args:
        c: Circuit whose own ops run first; ``Measure`` and ``ConditionalGate``
            express affine adaptivity.
        controller: Optional decision procedure supplying further blocks of
            ops after ``c.ops``.  It sees the tuple of all measurement outcomes.
        x: Input bits; defaults to the circuit's basis input.

    Raises:
        HardClassError: product input (adaptive or with several output lines).
    """

    def __init__(
        self,
        c: CircuitProgram,
        controller: AdaptiveController | None = None,
        x: BitString | str | None = None,
    ):
        adaptive = controller is not None or not c.is_nonadaptive
        if not c.has_basis_input:
            many = len(c.output_lines) > 1
            if adaptive or many:
                raise refusal(TaskClass(adaptive, True, many), "weak")
            raise CircuitError("product input with one output line: use sample_out1_prod")
        if not c.is_clifford_only:
            raise NotCliffordError("circuit contains the non-Clifford S gate")
        if x is None:
            x = c.input.bits
        elif isinstance(x, str):
            x = BitString.from_str(x)
        if x.n != c.n:
            raise DimensionError(f"{x.n}-bit input for a {c.n}-line circuit")
        self.c = c
        self.controller = controller
        self.x = x.value
        self.nodes: dict[tuple[int, ...], _Node] = {}
        root = _Node(_Tableau(c.n), [], _Elimination(), {}, (), c.ops, 0, 0, False)
        self._run_to_next(root)
        self.nodes[()] = root
        self._probability: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}

    # -- walking the circuit ---------------------------------------------

    def _check_op(self, op) -> None:
        g = op.gate if isinstance(op, ConditionalGate) else op
        lines = (op.line,) if isinstance(op, Measure) else g.lines
        if max(lines) >= self.c.n:
            raise CircuitError(f"{op} outside the {self.c.n}-line register")
        if isinstance(g, GateInstance) and not g.is_clifford:
            raise NotCliffordError("controller emitted the non-Clifford S gate")

    def _run_to_next(self, node: _Node) -> None:
        """Advance ``node`` to its next measurement, or to the end."""
        while True:
            if node.pos == len(node.block):
                if self.controller is None or node.consulted == len(node.history):
                    node.done = True
                    break
                node.consulted = len(node.history)
                outcomes = tuple(node.history)
                block, emitted = iter_controller_ops(self.controller, outcomes, node.emitted)
                if block is None:
                    node.done = True
                    break
                node.block, node.pos, node.emitted = block, 0, emitted
                for op in block:
                    self._check_op(op)
                continue
            op = node.block[node.pos]
            node.pos += 1
            if isinstance(op, GateInstance):
                node.tab.apply(op)
            elif isinstance(op, ConditionalGate):
                try:
                    fire = op.condition.evaluate(node.values)
                except KeyError as exc:
                    raise CircuitError(f"condition references unknown outcome {exc}") from None
                if fire:
                    node.tab.apply(op.gate)
            elif isinstance(op, Measure):
                if op.outcome in node.values:
                    raise CircuitError(f"outcome id {op.outcome!r} bound twice")
                anc = node.tab.add_line()
                node.tab.apply(gate("CX", op.line, anc))
                node.meas_id = op.outcome
                self._push(node, node.tab.zs[anc])
                return
            else:
                raise CircuitError(f"not an operation: {op!r}")
        self._push_output(node)

    def _push(self, node: _Node, gen: Label) -> None:
        node.gens.append(gen)
        node.elim.add(gen[1])

    def _push_output(self, node: _Node) -> None:
        k = len(node.history) - len(node.values)
        if k < len(self.c.output_lines):
            self._push(node, node.tab.zs[self.c.output_lines[k]])

    def _kernel_sign(self, node: _Node, t: int) -> tuple[int, int]:
        """``(sign bit, parity of b(t).x)`` of the product selected by ``t``."""
        hit = node.signs.get(t)
        if hit is None:
            e, a, b = _product(node.gens, t)
            if a:
                raise InternalConsistencyError("kernel vector with nonzero X part")
            if e & 1:
                raise InternalConsistencyError("kernel product has an imaginary sign")
            hit = (e >> 1, (b & self.x).bit_count() & 1)
            node.signs[t] = hit
        return hit

    def _children_probs(self, node: _Node) -> tuple[Fraction, Fraction]:
        if node.probs is None:
            m = len(node.gens)
            elim = node.elim
            yh = 0
            for i, bit in enumerate(node.history):
                yh |= bit << i
            probs = []
            for bit in (0, 1):
                y = yh | (bit << (m - 1))
                zero = False
                for t in elim.kernel:
                    s, bx = self._kernel_sign(node, t)
                    if s ^ bx ^ ((t & y).bit_count() & 1):
                        zero = True
                        break
                probs.append(Fraction(0) if zero else Fraction(1, 1 << (m - len(elim.kernel))))
            node.probs = (probs[0], probs[1])
            p = self._probability[node.history]
            if probs[0] + probs[1] != p:
                raise InternalConsistencyError(
                    f"marginals {probs[0]} + {probs[1]} != {p} after {node.history}"
                )
        return node.probs

    def _child(self, node: _Node, bit: int) -> _Node:
        h = node.history + (bit,)
        hit = self.nodes.get(h)
        if hit is not None:
            return hit
        child = _Node(
            node.tab if node.done else node.tab.copy(),
            list(node.gens),
            node.elim.copy(),
            dict(node.values),
            h,
            node.block,
            node.pos,
            node.emitted,
            node.done,
            signs=dict(node.signs),
            consulted=node.consulted,
        )
        self._probability[h] = node.probs[bit]
        if node.done:
            self._push_output(child)
        else:
            child.values[node.meas_id] = bit
            self._run_to_next(child)
        self.nodes[h] = child
        return child

    def total_bits(self, node: _Node) -> int:
        return len(node.values) + len(self.c.output_lines)

    def sample(self, seed: int, sample_index: int = 0, debug: bool = False):
        """One sample of the output lines (a :class:`SampleRecord` if ``debug``)."""
        node = self.nodes[()]
        draw = 0
        while not (node.done and len(node.history) == self.total_bits(node)):
            p0, p1 = self._children_probs(node)
            p = p0 + p1
            bit = draw_bernoulli(p0 / p, seed, sample_index, draw)
            draw += 1
            node = self._child(node, bit)
        out = BitString.from_bits(node.history[len(node.values):])
        if debug:
            return SampleRecord(out, dict(node.values))
        return out

    def distribution(self) -> dict[str, Fraction]:
        """Exact output distribution by walking every positive-probability history.

        Exponential in the number of measurements; meant for cross-checks.
        """
        dist: dict[str, Fraction] = {}
        stack = [self.nodes[()]]
        while stack:
            node = stack.pop()
            if node.done and len(node.history) == self.total_bits(node):
                key = "".join(map(str, node.history[len(node.values):]))
                dist[key] = dist.get(key, Fraction(0)) + self._probability[node.history]
                continue
            probs = self._children_probs(node)
            for bit in (0, 1):
                if probs[bit]:
                    stack.append(self._child(node, bit))
        return dist

    def probability(self, history: Sequence[int]) -> Fraction:
        """Exact probability of an outcome history already visited."""
        return self._probability[tuple(history)]


def _split_task(task) -> tuple[CircuitProgram, AdaptiveController | None]:
    if isinstance(task, CircuitProgram):
        return task, None
    c, controller = task
    return c, controller


def sample_adaptive_bits(
    task: CircuitProgram | tuple[CircuitProgram, AdaptiveController],
    x: BitString | str | None = None,
    seed: int = 0,
    sample_index: int = 0,
    debug: bool = False,
):
    """One sample of the output distribution of an adaptive basis-input task.

    Args:
        task: A circuit, or a ``(circuit, controller)`` pair.
        x: Input bits; defaults to the circuit's input.
        seed: Generator seed.
        sample_index: Index into the seeded stream; the same
            ``(task, x, seed, sample_index)`` always gives the same sample.
        debug: Also return the intermediate outcomes.

    Returns:
        The output bits in ``output_lines`` order, or a :class:`SampleRecord`.
    """
    c, controller = _split_task(task)
    return AdaptiveSampler(c, controller, x).sample(seed, sample_index, debug)


def sample_batch(
    task: CircuitProgram | tuple[CircuitProgram, AdaptiveController],
    shots: int,
    seed: int = 0,
    x: BitString | str | None = None,
    debug: bool = False,
) -> list:
    """``shots`` samples sharing one cache; sample ``i`` uses index ``i``."""
    c, controller = _split_task(task)
    sampler = AdaptiveSampler(c, controller, x)
    return [sampler.sample(seed, i, debug) for i in range(shots)]


def sample_out1_prod(c: CircuitProgram, output_line: int, seed: int, sample_index: int = 0) -> int:
    """One output bit of a non-adaptive product-input task with one output line."""
    p1 = strong_out1_prod(c, output_line, 1)
    return int(uniform53(seed, sample_index) < p1)
