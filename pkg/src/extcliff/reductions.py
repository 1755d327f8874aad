"""Constructions behind the hardness results.

* :func:`s_gadget_rewrite` replaces every non-Clifford ``S`` gate by a
  ``|pi/4>`` ancilla, a CX and a measurement.  In ``adaptive`` mode a
  conditional ``T`` corrects the outcome-1 branch, giving an adaptive Clifford
  circuit equivalent to the original.  In ``postselect`` mode the ancillas are
  added to the output lines instead, and conditioning them on 0 recovers the
  original distribution.
* :func:`toffoli_block` realizes a Toffoli gate on basis states with one
  measurement and one conditional CX.
* :func:`sharp_sat_circuit` turns a CNF formula ``f`` on ``n`` variables into an
  adaptive basis-input Clifford task whose single output bit is 1 with
  probability ``#f / 2^n``.

The reversible synthesis of ``f`` is one standard choice: each clause is an OR
computed as ``NOT(AND of negated literals)`` with Toffoli blocks, and the clause
bits are combined by a balanced tree of Toffoli blocks.  Ancillas are not
uncomputed since only the output line is read.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .circuit import (
    BasisInput,
    CircuitProgram,
    Condition,
    ConditionalGate,
    Measure,
    Operation,
    ProductInput,
    outcome_namer,
)
from .errors import CircuitError, DimacsError, UnsupportedGateError
from .gates import GateInstance, gate
from .pauli import ONE, PI4, ZERO, BitString

MAX_LITERALS = 3
MAX_BRUTEFORCE_VARS = 24


# -- CNF formulas ---------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses; literal ``+k`` is variable k, ``-k`` its negation."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(cl) for cl in self.clauses))
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        for cl in self.clauses:
            if not cl:
                raise ValueError("empty clause")
            if len(cl) > MAX_LITERALS:
                raise ValueError(f"clause {cl} has more than {MAX_LITERALS} literals")
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")

    def evaluate(self, assignment: Sequence[int]) -> bool:
        """Truth value under ``assignment[k-1]`` for variable k."""
        return all(
            any(bool(assignment[abs(l) - 1]) == (l > 0) for l in cl) for cl in self.clauses
        )


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF (``c`` comments, ``p cnf V C`` header, 0-terminated clauses)."""
    num_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise DimacsError("second problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad problem line {line!r}", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"bad problem line {line!r}", lineno) from None
            continue
        if num_vars is None:
            raise DimacsError("clause before the problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause", lineno)
                if len(current) > MAX_LITERALS:
                    raise DimacsError(
                        f"clause with {len(current)} literals; at most {MAX_LITERALS} supported",
                        lineno,
                    )
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(f"literal {lit} exceeds {num_vars} variables", lineno)
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing problem line")
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if declared != len(clauses):
        raise DimacsError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def render_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, cl)) + " 0" for cl in f.clauses]
    return "\n".join(lines) + "\n"


def count_sat_bruteforce(f: CnfFormula) -> int:
    """``#f`` by evaluating every assignment at once (``num_vars <= 24``)."""
    n = f.num_vars
    if n > MAX_BRUTEFORCE_VARS:
        raise ValueError(f"{n} variables exceeds the brute-force limit {MAX_BRUTEFORCE_VARS}")
    idx = np.arange(1 << n, dtype=np.uint32)
    sat = np.ones(1 << n, dtype=bool)
    for cl in f.clauses:
        clause = np.zeros(1 << n, dtype=bool)
        for lit in cl:
            bit = ((idx >> np.uint32(abs(lit) - 1)) & 1).astype(bool)
            clause |= bit if lit > 0 else ~bit
        sat &= clause
    return int(sat.sum())


def all_clauses(num_vars: int, max_literals: int = MAX_LITERALS) -> list[tuple[int, ...]]:
    """Every clause over distinct variables, literals sorted by variable."""
    out = []
    for k in range(1, min(max_literals, num_vars) + 1):
        for vars_ in itertools.combinations(range(1, num_vars + 1), k):
            for signs in itertools.product((1, -1), repeat=k):
                out.append(tuple(s * v for s, v in zip(signs, vars_)))
    return out


def cnf_family(num_vars: int, max_clauses: int) -> Iterator[CnfFormula]:
    """All formulas made of at most ``max_clauses`` distinct clauses."""
    pool = all_clauses(num_vars)
    for k in range(max_clauses + 1):
        for combo in itertools.combinations(pool, k):
            yield CnfFormula(num_vars, combo)


def random_cnf(num_vars: int, num_clauses: int, rng: np.random.Generator, width: int = 3) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        k = min(width, num_vars)
        vars_ = rng.choice(np.arange(1, num_vars + 1), size=k, replace=False)
        signs = rng.choice([1, -1], size=k)
        clauses.append(tuple(int(s * v) for s, v in zip(signs, vars_)))
    return CnfFormula(num_vars, tuple(clauses))


# -- Toffoli via adaptation -----------------------------------------------


def toffoli_block(control_a: int, control_b: int, target: int, outcome: str) -> list[Operation]:
    """``(a, b, t) -> (a, b, t XOR ab)`` on basis states.

    Measures ``control_a`` into ``outcome`` and applies ``CX(control_b, target)``
    when it read 1.  Valid only when the three lines hold basis states.
    """
    if len({control_a, control_b, target}) != 3:
        raise CircuitError("toffoli_block needs three distinct lines")
    return [
        Measure(control_a, outcome),
        ConditionalGate(gate("CX", control_b, target), Condition((outcome,), 0)),
    ]


def _normalize_clause(cl: Iterable[int]) -> tuple[int, ...] | None:
    """Drop duplicate literals; ``None`` for a tautology."""
    seen: dict[int, int] = {}
    for lit in cl:
        v = abs(lit)
        if v in seen and seen[v] != lit:
            return None
        seen[v] = lit
    return tuple(seen.values())


def sharp_sat_circuit(f: CnfFormula) -> CircuitProgram:
    """Adaptive basis-input task with ``Prob(output = 1) = #f / 2^n``.

    Lines ``0..n-1`` hold the variables, each put through H and measured so it
    carries a uniformly random bit.  Every remaining line starts in 0.
    """
    n = f.num_vars
    fresh = outcome_namer()
    ops: list[Operation] = []
    width = n

    def new_line() -> int:
        nonlocal width
        width += 1
        return width - 1

    for v in range(n):
        ops += [gate("H", v), Measure(v, fresh())]

    clause_lines: list[int] = []
    for cl in f.clauses:
        cl = _normalize_clause(cl)
        if cl is None:
            continue
        vars_ = [abs(l) - 1 for l in cl]
        flips = [gate("X", abs(l) - 1) for l in cl if l > 0]
        out = new_line()
        ops += flips  # variable lines now hold the negated literals
        if len(vars_) == 1:
            ops.append(gate("CX", vars_[0], out))
        elif len(vars_) == 2:
            ops += toffoli_block(vars_[0], vars_[1], out, fresh())
        else:
            mid = new_line()
            ops += toffoli_block(vars_[0], vars_[1], mid, fresh())
            ops += toffoli_block(mid, vars_[2], out, fresh())
        ops.append(gate("X", out))
        ops += flips
        clause_lines.append(out)

    if not clause_lines:
        out = new_line()
        ops.append(gate("X", out))
        clause_lines = [out]
    layer = clause_lines
    while len(layer) > 1:
        nxt = []
        for i in range(0, len(layer) - 1, 2):
            t = new_line()
            ops += toffoli_block(layer[i], layer[i + 1], t, fresh())
            nxt.append(t)
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return CircuitProgram(width, tuple(ops), BasisInput(BitString.zeros(width)), (layer[0],))


# -- S-gate gadget ----------------------------------------------------------


@dataclass(frozen=True)
class GadgetRewriteReport:
    rewritten: CircuitProgram
    ancilla_lines: tuple[int, ...]
    outcome_ids: tuple[str, ...]
    mode: str


def s_gadget_rewrite(c: CircuitProgram, mode: str) -> GadgetRewriteReport:
    """Replace every S gate by a ``|pi/4>`` ancilla gadget.

    S on line i becomes: fresh ancilla a in ``|pi/4>``, ``CX(i, a)``, then
    ``Measure(a)``.  Outcome 0 leaves ``S|psi>``; outcome 1 leaves
    ``S^-1|psi>`` up to a global phase, which a conditional ``T = S^2`` fixes in
    ``adaptive`` mode.  In ``postselect`` mode no correction is added and the
    ancillas join the output lines.

    Args:
        c: Circuit with a basis or product input; S gates must be unconditional.
        mode: ``"adaptive"`` or ``"postselect"``.

    Raises:
        UnsupportedGateError: a conditional S gate.
        ValueError: unknown mode.
    """
    if mode not in ("adaptive", "postselect"):
        raise ValueError(f"mode must be 'adaptive' or 'postselect', not {mode!r}")
    existing = [m.outcome for m in c.measurements()]
    fresh = outcome_namer(existing)
    ops: list[Operation] = []
    ancillas: list[int] = []
    ids: list[str] = []
    for op in c.ops:
        if isinstance(op, ConditionalGate) and op.gate.kind == "S":
            raise UnsupportedGateError("conditional S gates cannot be rewritten")
        if isinstance(op, GateInstance) and op.kind == "S":
            i = op.lines[0]
            a = c.n + len(ancillas)
            name = fresh("s")
            ops += [gate("CX", i, a), Measure(a, name)]
            if mode == "adaptive":
                ops.append(ConditionalGate(gate("T", i), Condition((name,), 0)))
            ancillas.append(a)
            ids.append(name)
        else:
            ops.append(op)
    if not ancillas:
        return GadgetRewriteReport(c, (), (), mode)
    states = c.input.states if isinstance(c.input, ProductInput) else tuple(
        ONE if b else ZERO for b in c.input.bits
    )
    new_input = ProductInput(states + (PI4,) * len(ancillas))
    out = c.output_lines
    if mode == "postselect":
        out = tuple(out) + tuple(ancillas)
    rewritten = CircuitProgram(c.n + len(ancillas), tuple(ops), new_input, out)
    return GadgetRewriteReport(rewritten, tuple(ancillas), tuple(ids), mode)
