from fractions import Fraction

import numpy as np
import pytest

from extcliff.errors import CircuitSyntaxError
from extcliff.random_circuits import random_basis_circuit, random_product_circuit
from extcliff.strong import DyadicProbability
from extcliff.textformat import format_probability, parse_circuit, render_circuit

SAMPLE = """\
# Toffoli through one measurement
qubits 3
input 110
M 1 -> m1
COND m1 : CX 2 3
out 3
"""


def test_parse_sample():
    c = parse_circuit(SAMPLE)
    assert c.n == 3
    assert str(c.input.bits) == "110"
    assert c.output_lines == (2,)
    assert c.ops[0].line == 0 and c.ops[0].outcome == "m1"
    assert c.ops[1].gate.lines == (1, 2)
    assert parse_circuit(render_circuit(c)) == c


def test_round_trip_random(rng):
    for k in range(100):
        n = int(rng.integers(1, 7))
        if k % 2:
            c = random_basis_circuit(n, 25, rng, measure_prob=0.15, cond_prob=0.25)
        else:
            c = random_product_circuit(n, 25, rng, measure_prob=0.15, cond_prob=0.25, allow_s=True)
        assert parse_circuit(render_circuit(c)) == c


def test_named_states_and_default_input():
    c = parse_circuit("qubits 2\ninput prod |+> |pi/4>\nS 1\nout 1 2\n")
    assert "|pi/4>" in render_circuit(c)
    d = parse_circuit("qubits 2\nH 1\nout 2 1\n")
    assert str(d.input.bits) == "00"
    assert d.output_lines == (0, 1)


def test_condition_constant_renders():
    c = parse_circuit("qubits 2\nM 1 -> a\nM 2 -> b\nCOND a^b^1 : X 1\nCOND 1 : Z 2\nout 1\n")
    text = render_circuit(c)
    assert "COND a^b^1 : X 1" in text
    assert "COND 1 : Z 2" in text
    assert parse_circuit(text) == c


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("qubits 2\nCZ 1 1\nout 1\n", 2),
        ("qubits 2\nCOND m1 : X 1\nout 1\n", 2),
        ("qubits 2\nH 3\nout 1\n", 2),
        ("H 1\nqubits 2\n", 1),
        ("qubits 2\nFOO 1\nout 1\n", 2),
        ("qubits 2\ninput 1\nout 1\n", 2),
        ("qubits 2\ninput prod |0>\nout 1\n", 2),
        ("qubits 1\ninput prod |q>\nout 1\n", 2),
        ("qubits 1\nM 1 -> a\nM 1 -> a\nout 1\n", 3),
        ("qubits 1\nM 1 a\nout 1\n", 2),
        ("qubits 2\nout 1 1\n", 2),
        ("qubits 2\nCX 1\nout 1\n", 2),
    ],
)
def test_syntax_errors_carry_line_numbers(text, lineno):
    with pytest.raises(CircuitSyntaxError) as info:
        parse_circuit(text)
    assert info.value.lineno == lineno


def test_missing_out_and_width():
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qubits 1\nH 1\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("# nothing\n")


def test_explicit_amplitudes_round_trip(rng):
    c = random_product_circuit(2, 3, rng)
    again = parse_circuit(render_circuit(c))
    for s, t in zip(c.input.states, again.input.states):
        assert s.alpha == t.alpha and s.beta == t.beta


@pytest.mark.parametrize(
    "value,text",
    [
        (0, "0"),
        (1.0, "1"),
        (0.25, "2^-2"),
        (Fraction(1, 8), "2^-3"),
        (Fraction(3, 8), "0.375"),
        (Fraction(1, 3), "0.33333333333333331"),
        (Fraction(0), "0"),
        (DyadicProbability.power(5), "2^-5"),
        (DyadicProbability.zero(), "0"),
        (1 / 3, "0.333333333333"),
        (0.49999999999999989, "2^-1"),
        (1e-20, "1e-20"),
    ],
)
def test_format_probability(value, text):
    assert format_probability(value) == text
