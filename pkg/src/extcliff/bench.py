"""Timing harness for the exact-marginal engine.

Each measurement builds a random unitary Clifford circuit, then times only
:func:`~extcliff.strong.strong_bits_marginal` (best of ``repeats``).  Results
are plain dicts, printed as JSON lines by the CLI.
"""

from __future__ import annotations

import json
import math
import time
from collections.abc import Iterable, Sequence

import numpy as np

from ._kernels import BACKEND, available_backends
from .random_circuits import bench_circuit
from .strong import strong_bits_marginal

DEFAULT_SIZES = (128, 256, 512, 1024)
GATES_PER_LINE = 100


def bit_ops(n: int, num_gates: int, m: int) -> int:
    """Rough bit-operation count: propagation plus elimination."""
    return num_gates * m + n * m * min(n, m)


def run_point(
    n: int,
    num_gates: int,
    m: int,
    backend: str | None = None,
    seed: int = 0,
    repeats: int = 1,
) -> dict:
    """Time one ``(n, N, m)`` instance."""
    backend = backend or BACKEND
    c = bench_circuit(n, num_gates, m, seed)
    best = math.inf
    result = None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        result = strong_bits_marginal(c, backend=backend)
        best = min(best, time.perf_counter() - t0)
    ops = bit_ops(n, num_gates, m)
    return {
        "suite": "marginal",
        "backend": backend,
        "n": n,
        "N": num_gates,
        "m": m,
        "seconds": best,
        "bit_ops": ops,
        "bit_ops_per_s": ops / best if best > 0 else math.inf,
        "probability": str(result),
    }


def loglog_slope(ns: Sequence[int], seconds: Sequence[float]) -> float:
    """Least-squares slope of ``log t`` against ``log n``."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(seconds, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def scaling_series(
    sizes: Iterable[int] = DEFAULT_SIZES,
    gates_per_line: int = GATES_PER_LINE,
    backend: str | None = None,
    seed: int = 0,
    repeats: int = 3,
) -> tuple[list[dict], dict]:
    """Run ``n in sizes`` with ``N = gates_per_line * n`` and ``m = n``.

    Returns the per-point records and a summary with the log-log slope.
    """
    points = [
        run_point(n, gates_per_line * n, n, backend, seed, repeats) for n in sizes
    ]
    ns = [p["n"] for p in points]
    secs = [p["seconds"] for p in points]
    summary = {
        "suite": "marginal-scaling",
        "backend": points[0]["backend"] if points else backend,
        "sizes": ns,
        "seconds": secs,
        "loglog_slope": loglog_slope(ns, secs) if len(ns) > 1 else None,
        "monotone": all(a <= b for a, b in zip(secs, secs[1:])),
    }
    return points, summary


def compare_backends(
    n: int, num_gates: int, m: int, seed: int = 0, repeats: int = 3
) -> list[dict]:
    """Same instance on every available backend."""
    return [run_point(n, num_gates, m, b, seed, repeats) for b in available_backends()]


def to_json_lines(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
