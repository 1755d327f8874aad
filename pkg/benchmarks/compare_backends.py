"""Compiled vs pure-Python kernels on the exact-marginal engine.

Prints JSON lines: one record per (instance, backend), then a scaling summary
per backend.  Usage::

    python benchmarks/compare_backends.py [--sizes 128,256,512,1024] [--repeats 3]
"""

import argparse
import sys

from extcliff._kernels import available_backends
from extcliff.bench import DEFAULT_SIZES, GATES_PER_LINE, compare_backends, scaling_series, to_json_lines


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default=",".join(map(str, DEFAULT_SIZES)))
    p.add_argument("--gates-per-line", type=int, default=GATES_PER_LINE)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]

    records = []
    for n in sizes:
        records += compare_backends(n, args.gates_per_line * n, n, args.seed, args.repeats)
    by_n = {}
    for r in records:
        by_n.setdefault(r["n"], {})[r["backend"]] = r["seconds"]
    for n, t in by_n.items():
        if "python" in t and "cython" in t:
            records.append({"suite": "speedup", "n": n, "python_over_cython": t["python"] / t["cython"]})
    for b in available_backends():
        records.append(scaling_series(sizes, args.gates_per_line, b, args.seed, args.repeats)[1])
    sys.stdout.write(to_json_lines(records))
    return 0


if __name__ == "__main__":
    sys.exit(main())
