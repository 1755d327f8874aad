"""Classical simulation of extended Clifford circuits.

Engines by task class (non-adaptive/adaptive, basis/product input, one/many
output lines):

* :func:`strong_out1_prod` -- exact probability, product input, one output;
* :func:`strong_bits_marginal` -- exact dyadic marginals, basis input;
* :func:`sample_adaptive_bits` -- exact sampling of adaptive basis-input circuits;
* :mod:`extcliff.oracle` -- dense state vectors for anything up to 16 lines.

Requests in a hard cell raise :class:`HardClassError` naming the result.
"""

from ._kernels import BACKEND, available_backends
from .circuit import (
    AdaptiveController,
    BasisInput,
    CircuitProgram,
    Condition,
    ConditionalGate,
    FunctionController,
    Measure,
    ProductInput,
    basis_program,
    defer_measurements,
    product_program,
    standardize_for_marginal,
    unitarize,
)
from .complexity import TaskClass, classification_report, task_class, verdict
from .errors import (
    CircuitError,
    CircuitSyntaxError,
    DimacsError,
    DimensionError,
    ExtCliffError,
    HardClassError,
    InternalConsistencyError,
    NotCliffordError,
    UnsupportedGateError,
    WidthCapError,
)
from .gates import GateInstance, gate
from .gf2 import BitMatrix, kernel_basis, matvec, rank
from .pauli import (
    BitString,
    PauliOperator,
    SingleQubitState,
    conjugate_by_gate,
    conjugate_through_circuit,
    expectation_product_state,
    pauli_apply_basis,
    pauli_multiply,
)
from .reductions import (
    CnfFormula,
    GadgetRewriteReport,
    count_sat_bruteforce,
    parse_dimacs,
    s_gadget_rewrite,
    sharp_sat_circuit,
    toffoli_block,
)
from .strong import DyadicProbability, strong_bits_marginal, strong_out1_prod
from .textformat import format_probability, parse_circuit, render_circuit
from .weak import (
    AdaptiveSampler,
    chain_rule_sample,
    sample_adaptive_bits,
    sample_batch,
    sample_out1_prod,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AdaptiveController",
    "AdaptiveSampler",
    "BasisInput",
    "BitMatrix",
    "BitString",
    "CircuitError",
    "CircuitProgram",
    "CircuitSyntaxError",
    "CnfFormula",
    "Condition",
    "ConditionalGate",
    "DimacsError",
    "DimensionError",
    "DyadicProbability",
    "ExtCliffError",
    "FunctionController",
    "GadgetRewriteReport",
    "GateInstance",
    "HardClassError",
    "InternalConsistencyError",
    "Measure",
    "NotCliffordError",
    "PauliOperator",
    "ProductInput",
    "SingleQubitState",
    "TaskClass",
    "UnsupportedGateError",
    "WidthCapError",
    "available_backends",
    "basis_program",
    "chain_rule_sample",
    "classification_report",
    "conjugate_by_gate",
    "conjugate_through_circuit",
    "count_sat_bruteforce",
    "defer_measurements",
    "expectation_product_state",
    "format_probability",
    "gate",
    "kernel_basis",
    "matvec",
    "parse_circuit",
    "parse_dimacs",
    "pauli_apply_basis",
    "pauli_multiply",
    "product_program",
    "rank",
    "render_circuit",
    "s_gadget_rewrite",
    "sample_adaptive_bits",
    "sample_batch",
    "sample_out1_prod",
    "sharp_sat_circuit",
    "standardize_for_marginal",
    "strong_bits_marginal",
    "strong_out1_prod",
    "task_class",
    "toffoli_block",
    "unitarize",
    "verdict",
]
