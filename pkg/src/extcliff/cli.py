"""Command-line interface.

Exit codes: 0 on success, 1 when a request is refused (hard simulation cell,
non-Clifford gate, oracle cap) and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from collections.abc import Sequence
from pathlib import Path

from . import bench as bench_mod
from .circuit import CircuitProgram
from .complexity import classification_report, refusal, task_class, verdict
from .errors import CircuitSyntaxError, DimacsError, ExtCliffError, NotCliffordError
from .oracle import MAX_QUBITS, run_distribution
from .pauli import BitString
from .reductions import parse_dimacs, s_gadget_rewrite, sharp_sat_circuit
from .strong import full_distribution, strong_bits_marginal, strong_out1_prod
from .textformat import format_probability, parse_circuit, render_circuit
from .weak import AdaptiveSampler, sample_out1_prod, uniform53

EXIT_OK, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2
MAX_LISTED_LINES = 20


class UsageError(Exception):
    pass


def _read_circuit(path: str) -> CircuitProgram:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_circuit(text)


def _parse_lines(text: str | None, n: int) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        lines = sorted({int(t) - 1 for t in text.replace(",", " ").split()})
    except ValueError:
        raise UsageError(f"bad line list {text!r}") from None
    if not lines or lines[0] < 0 or lines[-1] >= n:
        raise UsageError(f"line list {text!r} outside 1..{n}")
    return tuple(lines)


def _parse_postselect(text: str, n: int) -> dict[int, int]:
    out = {}
    for part in text.split(","):
        try:
            line, bit = part.split("=")
            q, b = int(line) - 1, int(bit)
        except ValueError:
            raise UsageError(f"bad postselection {part!r}; expected line=bit") from None
        if not 0 <= q < n or b not in (0, 1):
            raise UsageError(f"bad postselection {part!r}")
        out[q] = b
    return out


def _with_lines(c: CircuitProgram, lines) -> CircuitProgram:
    return c if lines is None else c.replace(output_lines=lines)


def _oracle_refusal_hint(c: CircuitProgram) -> None:
    if c.n > MAX_QUBITS:
        print(f"note: the oracle is capped at {MAX_QUBITS} lines", file=sys.stderr)


def _print_distribution(dist: dict, out) -> None:
    for key in sorted(dist):
        print(f"{key} {format_probability(dist[key])}", file=out)


# -- subcommands -----------------------------------------------------------


def cmd_classify(args, out) -> int:
    c = _read_circuit(args.circuit)
    c = _with_lines(c, _parse_lines(args.lines, c.n))
    print(classification_report(c), file=out)
    if not c.is_clifford_only:
        print("note: the circuit contains the non-Clifford S gate; engines: oracle only", file=out)
    return EXIT_OK


def _require_clifford(c: CircuitProgram) -> None:
    if not c.is_clifford_only:
        raise NotCliffordError(
            "the circuit contains the non-Clifford S gate; only the dense oracle "
            f"(--force-oracle, at most {MAX_QUBITS} lines) applies"
        )


def cmd_strong(args, out) -> int:
    c = _read_circuit(args.circuit)
    c = _with_lines(c, _parse_lines(args.lines, c.n))
    tc = task_class(c)
    m = len(c.output_lines)
    if args.force_oracle:
        _print_distribution(run_distribution(c), out)
        return EXIT_OK
    if not verdict(tc, "strong").efficient:
        raise refusal(tc, "strong")
    _require_clifford(c)
    if args.y is not None:
        y = args.y.strip()
        if len(y) != m or set(y) - {"0", "1"}:
            raise UsageError(f"--y needs {m} bits")
        if c.has_basis_input:
            p = strong_bits_marginal(c, y=BitString.from_str(y), backend=args.backend)
        else:
            p = strong_out1_prod(c, c.output_lines[0], int(y))
        print(f"{y} {format_probability(p)}", file=out)
        return EXIT_OK
    if c.has_basis_input:
        if m > MAX_LISTED_LINES:
            raise UsageError(f"{m} output lines; pass --y to query one outcome")
        dist = full_distribution(c, backend=args.backend)
    else:
        q = c.output_lines[0]
        dist = {str(b): strong_out1_prod(c, q, b) for b in (0, 1)}
    _print_distribution(dist, out)
    return EXIT_OK


def _summary(samples: list[str], out) -> None:
    counts = Counter(samples)
    total = len(samples)
    print("# frequencies", file=out)
    for key in sorted(counts):
        print(f"# {key} {counts[key]} {counts[key] / total:.6f}", file=out)


def cmd_sample(args, out) -> int:
    c = _read_circuit(args.circuit)
    c = _with_lines(c, _parse_lines(args.lines, c.n))
    if args.shots < 0:
        raise UsageError("--shots must be nonnegative")
    tc = task_class(c)
    samples: list[str] = []
    if args.force_oracle:
        dist = run_distribution(c)
        keys = sorted(dist)
        for i in range(args.shots):
            u = uniform53(args.seed, i)
            acc = 0.0
            pick = keys[-1]
            for k in keys:
                acc += dist[k]
                if u < acc:
                    pick = k
                    break
            samples.append(pick)
            print(pick, file=out)
    elif not verdict(tc, "weak").efficient:
        raise refusal(tc, "weak")
    elif c.has_basis_input:
        _require_clifford(c)
        sampler = AdaptiveSampler(c)
        for i in range(args.shots):
            rec = sampler.sample(args.seed, i, debug=True)
            bits = str(rec.output)
            samples.append(bits)
            if args.debug:
                mids = " ".join(f"{k}={v}" for k, v in rec.intermediate.items())
                print(f"{bits}  [{mids}]", file=out)
            else:
                print(bits, file=out)
    else:
        _require_clifford(c)
        q = c.output_lines[0]
        for i in range(args.shots):
            bit = str(sample_out1_prod(c, q, args.seed, i))
            samples.append(bit)
            print(bit, file=out)
    _summary(samples, out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    c = _read_circuit(args.circuit)
    c = _with_lines(c, _parse_lines(args.lines, c.n))
    _oracle_refusal_hint(c)
    if not args.postselect:
        _print_distribution(run_distribution(c), out)
        return EXIT_OK
    post = _parse_postselect(args.postselect, c.n)
    free = [q for q in c.output_lines if q not in post]
    if not free:
        raise UsageError("every output line is postselected")
    post_lines = sorted(post)
    dist = run_distribution(c, lines=post_lines + free)
    want = "".join(str(post[q]) for q in post_lines)
    k = len(post_lines)
    denom = sum(p for key, p in dist.items() if key[:k] == want)
    if denom <= 1e-12:
        raise ExtCliffError(f"postselected event has probability {denom!r}")
    cond: dict[str, float] = {}
    for key, p in dist.items():
        if key[:k] == want:
            cond[key[k:]] = cond.get(key[k:], 0.0) + p / denom
    print(f"# postselected probability {format_probability(denom)}", file=out)
    _print_distribution(cond, out)
    return EXIT_OK


def cmd_cnf2circuit(args, out) -> int:
    try:
        text = Path(args.dimacs).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.dimacs}: {exc.strerror}") from None
    c = sharp_sat_circuit(parse_dimacs(text))
    _write(render_circuit(c), args.output, out)
    return EXIT_OK


def _write(text: str, path: str | None, out) -> None:
    if path is None:
        out.write(text)
    else:
        Path(path).write_text(text)


def cmd_inject_s(args, out) -> int:
    c = _read_circuit(args.circuit)
    report = s_gadget_rewrite(c, args.mode)
    text = render_circuit(report.rewritten)
    if args.in_place:
        if args.circuit == "-":
            raise UsageError("--in-place needs a file")
        _write(text, args.circuit, out)
    else:
        _write(text, args.output, out)
    print(
        f"replaced {len(report.ancilla_lines)} S gate(s); ancilla lines "
        f"{' '.join(str(q + 1) for q in report.ancilla_lines) or '-'}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_bench(args, out) -> int:
    backends = ["auto"] if args.backend == "auto" else (
        bench_mod.available_backends() if args.backend == "both" else [args.backend]
    )
    for name in backends:
        be = None if name == "auto" else name
        if args.n is not None:
            n = args.n
            N = args.gates if args.gates is not None else bench_mod.GATES_PER_LINE * n
            m = args.m if args.m is not None else n
            rec = bench_mod.run_point(n, N, m, be, args.seed, args.repeats)
            out.write(bench_mod.to_json_lines([rec]))
        else:
            sizes = [int(s) for s in args.sizes.split(",")]
            points, summary = bench_mod.scaling_series(
                sizes, args.gates_per_line, be, args.seed, args.repeats
            )
            out.write(bench_mod.to_json_lines(points + [summary]))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="extcliff",
        description="Classify and simulate extended Clifford circuits.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def circuit_arg(sp):
        sp.add_argument("circuit", help="circuit file ('-' for stdin)")
        sp.add_argument("--lines", help="output lines to use instead of 'out' (1-indexed, comma separated)")

    sp = sub.add_parser("classify", help="report the task class and its simulation complexity")
    circuit_arg(sp)
    sp.set_defaults(func=cmd_classify)

    sim = sub.add_parser("simulate", help="run an engine")
    simsub = sim.add_subparsers(dest="engine", required=True)

    sp = simsub.add_parser("strong", help="exact output probabilities")
    circuit_arg(sp)
    sp.add_argument("--y", help="query one outcome (bits in output-line order)")
    sp.add_argument("--backend", choices=bench_mod.available_backends(), default=None)
    sp.add_argument("--force-oracle", action="store_true", help="use the dense oracle regardless of class")
    sp.set_defaults(func=cmd_strong)

    sp = simsub.add_parser("sample", help="draw samples")
    circuit_arg(sp)
    sp.add_argument("--shots", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--debug", action="store_true", help="also print intermediate outcomes")
    sp.add_argument("--force-oracle", action="store_true", help="use the dense oracle regardless of class")
    sp.set_defaults(func=cmd_sample)

    sp = simsub.add_parser("oracle", help="dense state-vector reference")
    circuit_arg(sp)
    sp.add_argument("--distribution", action="store_true", help="print the full distribution (default)")
    sp.add_argument("--postselect", help="condition on line=bit,... before reading the outputs")
    sp.set_defaults(func=cmd_oracle)

    red = sub.add_parser("reduce", help="hardness reductions")
    redsub = red.add_subparsers(dest="reduction", required=True)
    sp = redsub.add_parser("cnf2circuit", help="DIMACS CNF to a counting circuit")
    sp.add_argument("--dimacs", required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_cnf2circuit)

    gad = sub.add_parser("gadget", help="gate gadgets")
    gadsub = gad.add_subparsers(dest="gadget", required=True)
    sp = gadsub.add_parser("inject-s", help="replace S gates by |pi/4> ancilla gadgets")
    sp.add_argument("circuit")
    sp.add_argument("--mode", choices=["adaptive", "postselect"], required=True)
    dest = sp.add_mutually_exclusive_group()
    dest.add_argument("-o", "--output")
    dest.add_argument("--in-place", action="store_true")
    sp.set_defaults(func=cmd_inject_s)

    sp = sub.add_parser("bench", help="time the exact-marginal engine (JSON lines)")
    sp.add_argument("--sizes", default=",".join(map(str, bench_mod.DEFAULT_SIZES)))
    sp.add_argument("--gates-per-line", type=int, default=bench_mod.GATES_PER_LINE)
    sp.add_argument("--n", type=int, help="single point: number of lines")
    sp.add_argument("--gates", type=int, help="single point: number of gates")
    sp.add_argument("--m", type=int, help="single point: number of output lines")
    sp.add_argument("--backend", choices=["auto", "both", *bench_mod.available_backends()], default="auto")
    sp.add_argument("--repeats", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, CircuitSyntaxError, DimacsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExtCliffError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
