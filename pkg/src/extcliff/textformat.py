"""Line-oriented text format for circuits.

Example::

    # Toffoli on basis states through one measurement
    qubits 3
    input 110
    M 1 -> m1
    COND m1 : CX 2 3
    out 3

Statements (lines are 1-indexed, ``#`` starts a comment):

``qubits <n>``
    width; must come first.
``input <bits>``
    basis input, character ``i`` for line ``i``.  Defaults to all zeros.
``input prod <state> ...``
    product input, one state per line: ``|0>``, ``|1>``, ``|+>``, ``|->``,
    ``|pi/4>`` or explicit amplitudes ``re,im;re,im``.
``H i``, ``T i``, ``S i``, ``X i``, ``Y i``, ``Z i``, ``CZ i j``, ``CX i j``, ``SWAP i j``
    gates; ``CX`` takes control then target.
``M i -> <id>``
    measure line ``i`` and bind the outcome to ``<id>`` (e.g. ``m1``).
``COND <id>^<id>^1 : <gate>``
    apply the gate iff the XOR of the listed outcomes (and the optional
    constant ``1``) is 1.
``out i j ...``
    output lines.

The format expresses affine adaptivity only.  Controllers, and hence a
number of measurements that depends on earlier outcomes, exist only in the
Python API.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .circuit import (
    BasisInput,
    CircuitProgram,
    Condition,
    ConditionalGate,
    Measure,
    ProductInput,
)
from .errors import CircuitError, CircuitSyntaxError
from .gates import ARITY, GateInstance
from .pauli import NAMED_STATES, BitString, SingleQubitState

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NAMED_RE = re.compile(r"\|(.+)>\Z")


def _parse_state(tok: str, lineno: int) -> SingleQubitState:
    m = _NAMED_RE.match(tok)
    if m:
        name = m.group(1)
        if name not in NAMED_STATES:
            raise CircuitSyntaxError(f"unknown named state {tok!r}", lineno)
        return NAMED_STATES[name]
    try:
        first, second = tok.split(";")
        a_re, a_im = first.split(",")
        b_re, b_im = second.split(",")
        alpha = complex(float(a_re), float(a_im))
        beta = complex(float(b_re), float(b_im))
    except ValueError:
        raise CircuitSyntaxError(f"bad state {tok!r}; expected re,im;re,im or |name>", lineno) from None
    try:
        return SingleQubitState(alpha, beta)
    except ValueError as exc:
        raise CircuitSyntaxError(str(exc), lineno) from None


def _line_index(tok: str, n: int, lineno: int) -> int:
    if not tok.isdigit():
        raise CircuitSyntaxError(f"bad line index {tok!r}", lineno)
    q = int(tok)
    if not 1 <= q <= n:
        raise CircuitSyntaxError(f"line {q} outside 1..{n}", lineno)
    return q - 1


def _parse_gate(tokens: list[str], n: int, lineno: int) -> GateInstance:
    kind = tokens[0]
    if kind not in ARITY:
        raise CircuitSyntaxError(f"unknown statement {kind!r}", lineno)
    if len(tokens) != 1 + ARITY[kind]:
        raise CircuitSyntaxError(f"{kind} takes {ARITY[kind]} line(s)", lineno)
    lines = [_line_index(t, n, lineno) for t in tokens[1:]]
    try:
        return GateInstance(kind, tuple(lines))
    except ValueError as exc:
        raise CircuitSyntaxError(str(exc), lineno) from None


def _parse_condition(text: str, seen: set[str], lineno: int) -> Condition:
    names = []
    const = 0
    for part in text.split("^"):
        part = part.strip()
        if part in ("0", "1"):
            const ^= int(part)
        elif _IDENT.match(part):
            if part not in seen:
                raise CircuitSyntaxError(f"condition uses unknown outcome {part!r}", lineno)
            names.append(part)
        else:
            raise CircuitSyntaxError(f"bad condition term {part!r}", lineno)
    return Condition(tuple(names), const)


def parse_circuit(text: str) -> CircuitProgram:
    """Parse the text format.

    Raises:
        CircuitSyntaxError: with the offending line number.
    """
    n = None
    inp = None
    out = None
    ops = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "qubits":
            if n is not None:
                raise CircuitSyntaxError("width declared twice", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise CircuitSyntaxError("expected 'qubits <n>' with n >= 1", lineno)
            n = int(tokens[1])
            continue
        if n is None:
            raise CircuitSyntaxError("'qubits <n>' must come first", lineno)
        if head == "input":
            if inp is not None:
                raise CircuitSyntaxError("input declared twice", lineno)
            if len(tokens) >= 2 and tokens[1] == "prod":
                states = tuple(_parse_state(t, lineno) for t in tokens[2:])
                if len(states) != n:
                    raise CircuitSyntaxError(f"{len(states)} states for {n} lines", lineno)
                inp = ProductInput(states)
            else:
                if len(tokens) != 2 or set(tokens[1]) - {"0", "1"} or len(tokens[1]) != n:
                    raise CircuitSyntaxError(f"expected 'input' with {n} bits", lineno)
                inp = BasisInput(BitString.from_str(tokens[1]))
        elif head == "out":
            if out is not None:
                raise CircuitSyntaxError("output lines declared twice", lineno)
            lines = [_line_index(t, n, lineno) for t in tokens[1:]]
            if not lines or len(set(lines)) != len(lines):
                raise CircuitSyntaxError("'out' needs distinct lines", lineno)
            out = tuple(sorted(lines))
        elif head == "M":
            if len(tokens) != 4 or tokens[2] != "->" or not _IDENT.match(tokens[3]):
                raise CircuitSyntaxError("expected 'M <line> -> <id>'", lineno)
            if tokens[3] in seen:
                raise CircuitSyntaxError(f"outcome id {tokens[3]!r} bound twice", lineno)
            seen.add(tokens[3])
            ops.append(Measure(_line_index(tokens[1], n, lineno), tokens[3]))
        elif head == "COND":
            body = line[len("COND"):]
            if ":" not in body:
                raise CircuitSyntaxError("expected 'COND <condition> : <gate>'", lineno)
            cond_text, gate_text = body.split(":", 1)
            cond = _parse_condition(cond_text, seen, lineno)
            ops.append(ConditionalGate(_parse_gate(gate_text.split(), n, lineno), cond))
        else:
            ops.append(_parse_gate(tokens, n, lineno))
    if n is None:
        raise CircuitSyntaxError("missing 'qubits <n>'")
    if out is None:
        raise CircuitSyntaxError("missing 'out' statement")
    if inp is None:
        inp = BasisInput(BitString.zeros(n))
    try:
        return CircuitProgram(n, tuple(ops), inp, out)
    except CircuitError as exc:
        raise CircuitSyntaxError(str(exc)) from None


def _render_state(s: SingleQubitState) -> str:
    for name, named in NAMED_STATES.items():
        if s == named:
            return f"|{name}>"
    a, b = s.alpha, s.beta
    return f"{a.real!r},{a.imag!r};{b.real!r},{b.imag!r}"


def _render_gate(g: GateInstance) -> str:
    return " ".join([g.kind] + [str(q + 1) for q in g.lines])


def render_circuit(c: CircuitProgram) -> str:
    """Text form of ``c``; ``parse_circuit(render_circuit(c)) == c``."""
    out = [f"qubits {c.n}"]
    if isinstance(c.input, BasisInput):
        out.append(f"input {c.input.bits}")
    else:
        out.append("input prod " + " ".join(_render_state(s) for s in c.input.states))
    for op in c.ops:
        if isinstance(op, GateInstance):
            out.append(_render_gate(op))
        elif isinstance(op, Measure):
            out.append(f"M {op.line + 1} -> {op.outcome}")
        else:
            terms = list(op.condition.outcomes)
            if op.condition.constant or not terms:
                terms.append(str(op.condition.constant))
            out.append(f"COND {'^'.join(terms)} : {_render_gate(op.gate)}")
    out.append("out " + " ".join(str(q + 1) for q in c.output_lines))
    return "\n".join(out) + "\n"


def format_probability(p) -> str:
    """``0``, ``1`` or ``2^-k`` when dyadic, else a decimal.

    Fractions are exact and print with 17 significant digits.  Floats come
    from double arithmetic and are rounded to 12 significant digits first, so
    ``0.49999999999999989`` prints as ``2^-1``.
    """
    if hasattr(p, "neg_log2"):
        return str(p)
    if isinstance(p, Fraction):
        if p == 0:
            return "0"
        if p.numerator == 1 and p.denominator & (p.denominator - 1) == 0:
            k = p.denominator.bit_length() - 1
            return "1" if k == 0 else f"2^-{k}"
        return f"{float(p):.17g}"
    p = float(f"{float(p):.12g}")
    if p == 0:
        return "0"
    mant, exp = math.frexp(p)
    if mant == 0.5 and exp <= 1:
        k = 1 - exp
        return "1" if k == 0 else f"2^-{k}"
    return f"{p:.12g}"
