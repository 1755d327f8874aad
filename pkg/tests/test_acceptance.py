"""Exit criteria, one test per criterion.

Each test prints ``criterion N: PASS|FAIL  <detail>``; the lines are repeated
in the terminal summary under "acceptance criteria".  Run alone with
``pytest -m acceptance -s``.
"""

import io
import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from extcliff import oracle
from extcliff.bench import DEFAULT_SIZES, run_point, scaling_series
from extcliff.circuit import (
    CircuitProgram,
    Condition,
    ConditionalGate,
    Measure,
    basis_program,
    defer_measurements,
    product_program,
    unitarize,
)
from extcliff.cli import main as cli_main
from extcliff.complexity import TaskClass, task_class, verdict
from extcliff.gates import gate
from extcliff.random_circuits import (
    random_basis_circuit,
    random_gates,
    random_ops,
    random_product_circuit,
    random_state,
)
from extcliff.reductions import (
    cnf_family,
    count_sat_bruteforce,
    random_cnf,
    s_gadget_rewrite,
    sharp_sat_circuit,
    toffoli_block,
)
from extcliff.strong import DyadicProbability, strong_bits_marginal, strong_out1_prod
from extcliff.textformat import render_circuit
from extcliff.weak import AdaptiveSampler, sample_batch

pytestmark = pytest.mark.acceptance


def test_criterion_1_product_input_single_line(report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 9))
        q = int(rng.integers(n))
        c = random_product_circuit(n, int(rng.integers(0, 61)), rng, out=(q,))
        dist = oracle.run_distribution(c)
        for y in (0, 1):
            worst = max(worst, abs(strong_out1_prod(c, q, y) - dist.get(str(y), 0.0)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 60
    report(1, ok, f"500 circuits, max |err| {worst:.2e}, {elapsed:.1f}s")
    assert ok


def _subsets(lines):
    for k in range(1, len(lines) + 1):
        yield from itertools.combinations(lines, k)


def test_criterion_2_basis_input_marginals(report):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    queries = 0
    problems = []
    for idx in range(500):
        n = int(rng.integers(1, 9))
        c = random_basis_circuit(n, int(rng.integers(0, 61)), rng, measure_prob=0.1)
        full = oracle.run_distribution(c)
        out = c.output_lines
        for sub in _subsets(out):
            pos = [out.index(q) for q in sub]
            total = Fraction(0)
            for v in range(2 ** len(sub)):
                y = format(v, f"0{len(sub)}b")
                p = strong_bits_marginal(c, out_lines=sub, y=y)
                queries += 1
                if not isinstance(p, DyadicProbability):
                    problems.append((idx, sub, y, "not dyadic"))
                total += p.as_fraction()
                worst = max(worst, abs(float(p) - oracle.marginal(full, pos, y)))
            if total != 1:
                problems.append((idx, sub, "sum", total))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and not problems and elapsed < 120
    report(
        2,
        ok,
        f"500 circuits, {queries} marginals, max |err| {worst:.2e}, "
        f"{len(problems)} exactness failures, {elapsed:.1f}s",
    )
    assert ok


def _uniform_bit() -> CircuitProgram:
    return basis_program(1, [gate("H", 0), Measure(0, "m1")], [0])


def _toffoli_gadget() -> CircuitProgram:
    ops = [gate("H", 0), gate("H", 1)] + toffoli_block(0, 1, 2, "m1")
    return basis_program(3, ops, [0, 1, 2])


def _mixed_conditional() -> CircuitProgram:
    ops = [
        gate("H", 0),
        Measure(0, "a"),
        gate("H", 1),
        gate("CX", 1, 2),
        Measure(2, "b"),
        ConditionalGate(gate("X", 3), Condition(("a", "b"))),
        ConditionalGate(gate("H", 1), Condition(("a",), 1)),
        gate("T", 4),
        gate("H", 4),
        ConditionalGate(gate("CZ", 1, 4), Condition(("b",))),
        gate("H", 4),
        gate("CX", 3, 5),
        Measure(4, "c"),
        ConditionalGate(gate("Y", 5), Condition(("c", "a"), 1)),
    ]
    return basis_program(6, ops, [1, 3, 4, 5], "000100")


def test_criterion_3_adaptive_sampler(report):
    t0 = time.perf_counter()
    details = []
    ok = True
    for name, c in (
        ("uniform-bit", _uniform_bit()),
        ("toffoli-gadget", _toffoli_gadget()),
        ("mixed-conditional", _mixed_conditional()),
    ):
        exact = oracle.run_distribution(c)
        samples = sample_batch(c, 100_000, seed=2024)
        counts: dict[str, int] = {}
        for s in samples:
            key = str(s)
            counts[key] = counts.get(key, 0) + 1
        keys = set(exact) | set(counts)
        tv = 0.5 * sum(abs(counts.get(k, 0) / len(samples) - exact.get(k, 0.0)) for k in keys)
        ok &= tv <= 0.01
        details.append(f"{name} TV {tv:.4f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    report(3, ok, ", ".join(details) + f", {elapsed:.1f}s")
    assert ok


def _data_amplitudes(branch, n_data):
    amps = branch.state.amplitudes
    k = int(np.argmax(np.abs(amps)))
    high = k >> n_data << n_data
    return oracle.StateVector(n_data, amps[high : high + 2**n_data])


def test_criterion_4_gadget_identities(report):
    rng = np.random.default_rng(4)
    # single-S gadget, both measurement branches
    min_fid = 1.0
    branches_seen = set()
    for _ in range(50):
        psi = random_state(rng)
        c = product_program([gate("S", 0)], [psi], [0])
        target = oracle.run_branches(c)[0].state
        for br in oracle.run_branches(s_gadget_rewrite(c, "adaptive").rewritten):
            branches_seen.add(br.history)
            min_fid = min(min_fid, oracle.fidelity(_data_amplitudes(br, 1), target))
    fid_ok = min_fid >= 1 - 1e-9 and branches_seen == {(0,), (1,)}

    # postselection quotient: Prob_D(y) * Prob_D'(anc = 0) = Prob_D'(y, anc = 0)
    quotient_err = 0.0
    for _ in range(60):
        n = int(rng.integers(1, 4))
        K = int(rng.integers(1, 4))
        ops = random_gates(n, 10, rng)
        for _ in range(K):
            ops.insert(int(rng.integers(len(ops) + 1)), gate("S", int(rng.integers(n))))
        out = tuple(range(n))
        c = product_program(ops, [random_state(rng) for _ in range(n)], out)
        rep = s_gadget_rewrite(c, "postselect")
        d = oracle.run_distribution(c)
        d2 = oracle.run_distribution(rep.rewritten)
        zeros = "0" * K
        p_anc = sum(p for key, p in d2.items() if key[n:] == zeros)
        for v in range(2**n):
            y = format(v, f"0{n}b")
            lhs = d.get(y, 0.0) * p_anc
            rhs = d2.get(y + zeros, 0.0)
            quotient_err = max(quotient_err, abs(lhs - rhs))

    # adaptive-mode rewrite is distribution-equivalent
    adaptive_err = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        K = int(rng.integers(0, 4))
        ops = random_gates(n, 15, rng)
        for _ in range(K):
            ops.insert(int(rng.integers(len(ops) + 1)), gate("S", int(rng.integers(n))))
        out = tuple(sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist()))
        c = product_program(ops, [random_state(rng) for _ in range(n)], out)
        d1 = oracle.run_distribution(c)
        d2 = oracle.run_distribution(s_gadget_rewrite(c, "adaptive").rewritten)
        for key in set(d1) | set(d2):
            adaptive_err = max(adaptive_err, abs(d1.get(key, 0.0) - d2.get(key, 0.0)))

    ok = fid_ok and quotient_err <= 1e-9 and adaptive_err <= 1e-9
    report(
        4,
        ok,
        f"min fidelity {min_fid:.12f}, quotient err {quotient_err:.1e}, "
        f"adaptive err {adaptive_err:.1e}",
    )
    assert ok


def test_criterion_5_sharp_sat(report):
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    formulas = [f for n in (1, 2, 3) for f in cnf_family(n, 3)]
    rng = np.random.default_rng(5)
    formulas += [random_cnf(4, int(rng.integers(1, 5)), rng) for _ in range(50)]
    for f in formulas:
        p = oracle.run_distribution(sharp_sat_circuit(f)).get("1", 0.0)
        worst = max(worst, abs(p - count_sat_bruteforce(f) / 2**f.num_vars))
        count += 1
    ok = worst <= 1e-12
    report(5, ok, f"{count} formulas, max |err| {worst:.1e}, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_criterion_6_rewrites(report):
    rng = np.random.default_rng(6)
    worst = 0.0
    max_width = 0
    checked = 0
    while checked < 200:
        n = int(rng.integers(1, 7))
        adaptive = checked % 2 == 1
        ops = random_ops(n, 25, rng, measure_prob=0.15, cond_prob=0.2 if adaptive else 0.0)
        K = sum(isinstance(op, Measure) for op in ops)
        if n + K > 12:
            continue
        out = tuple(sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist()))
        if rng.random() < 0.5:
            c = product_program(ops, [random_state(rng) for _ in range(n)], out)
        else:
            c = basis_program(n, ops, out, "".join(str(int(b)) for b in rng.integers(0, 2, n)))
        ref = oracle.run_distribution(c)
        rewrites = [defer_measurements] if not c.is_nonadaptive else [unitarize, defer_measurements]
        for rw in rewrites:
            r = rw(c)
            max_width = max(max_width, r.n)
            got = oracle.run_distribution(r)
            for key in set(ref) | set(got):
                worst = max(worst, abs(ref.get(key, 0.0) - got.get(key, 0.0)))
        checked += 1
    ok = worst <= 1e-9 and max_width <= 12
    report(6, ok, f"200 circuits, max |err| {worst:.1e}, max width {max_width}")
    assert ok


def test_criterion_7_performance(report):
    point = run_point(1024, 100_000, 1024, repeats=1)
    points, summary = scaling_series(DEFAULT_SIZES, repeats=3)
    slope = summary["loglog_slope"]
    ok = point["seconds"] <= 5.0 and slope <= 3.2 and summary["monotone"]
    secs = ", ".join(f"{p['n']}:{p['seconds']:.3f}s" for p in points)
    report(
        7,
        ok,
        f"[{point['backend']}] n=1024 N=1e5 m=1024 in {point['seconds']:.2f}s; "
        f"series {secs}; slope {slope:.2f}; monotone {summary['monotone']}",
    )
    assert ok


EXPECTED_CELLS = {
    # (adaptive, product input, many outputs, mode): (complexity, theorem or None if implied)
    (False, False, False, "strong"): ("Cl-P", None),
    (False, False, False, "weak"): ("Cl-P", None),
    (False, False, True, "strong"): ("Cl-P", 4),
    (False, False, True, "weak"): ("Cl-P", None),
    (False, True, False, "strong"): ("Cl-P", 1),
    (False, True, False, "weak"): ("Cl-P", None),
    (False, True, True, "strong"): ("#P-hard", 6),
    (False, True, True, "weak"): ("not Cl-P unless PH collapses", 7),
    (True, False, False, "strong"): ("#P-hard", 2),
    (True, False, False, "weak"): ("Cl-P", None),
    (True, False, True, "strong"): ("#P-hard", None),
    (True, False, True, "weak"): ("Cl-P", 5),
    (True, True, False, "strong"): ("#P-hard", None),
    (True, True, False, "weak"): ("QC-hard", 3),
    (True, True, True, "strong"): ("#P-hard", None),
    (True, True, True, "weak"): ("QC-hard", None),
}


def _cell_circuit(adaptive: bool, product: bool, many: bool) -> CircuitProgram:
    ops = [gate("H", 0), Measure(0, "m1")]
    if adaptive:
        ops.append(ConditionalGate(gate("X", 1), Condition(("m1",))))
    else:
        ops.append(gate("CX", 0, 1))
    out = (0, 1) if many else (1,)
    if product:
        from extcliff.pauli import NAMED_STATES

        return product_program(ops, [NAMED_STATES["0"], NAMED_STATES["+"]], out)
    return basis_program(2, ops, out)


def _cli(argv):
    import contextlib

    err = io.StringIO()
    with contextlib.redirect_stderr(err):
        code = cli_main(argv, out=io.StringIO())
    return code, err.getvalue()


def test_criterion_8_classification_and_refusals(report, tmp_path):
    mismatches = []
    refusal_problems = []
    for (adaptive, product, many, mode), (want, theorem) in EXPECTED_CELLS.items():
        c = _cell_circuit(adaptive, product, many)
        tc = task_class(c)
        if tc != TaskClass(adaptive, product, many):
            mismatches.append((adaptive, product, many, "class"))
        v = verdict(tc, mode)
        if v.complexity != want or (theorem is not None and (v.theorem != theorem or not v.direct)):
            mismatches.append((adaptive, product, many, mode, str(v)))
        if want == "Cl-P":
            continue
        path = tmp_path / f"cell_{int(adaptive)}{int(product)}{int(many)}.txt"
        path.write_text(render_circuit(c))
        code, err = _cli(["simulate", mode if mode == "strong" else "sample", str(path)])
        if code != 1 or f"Theorem {v.theorem}" not in err:
            refusal_problems.append((adaptive, product, many, mode, code, err.strip()))
    ok = not mismatches and not refusal_problems
    hard = sum(w != "Cl-P" for w, _ in EXPECTED_CELLS.values())
    report(
        8,
        ok,
        f"16 cells classified ({len(mismatches)} mismatches), "
        f"{hard} hard-cell CLI requests ({len(refusal_problems)} without exit 1 + theorem)",
    )
    assert ok
