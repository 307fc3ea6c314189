"""Compiled kernels vs the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 50,200,800]

Both backends are imported side by side, so the fallback is timed even when
the extension is built. Outputs are compared before timing.
"""

import argparse
import sys
import timeit

import numpy as np

from cablejones import kernels
from cablejones.jones import IteratedCableParams, cable_jones
from cablejones.laurent import quantum_int

KNOT = (2, 13, 2, 3)


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="50,200,800", help="comma-separated colors N")
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
        return 1
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'kernel':<16}{'N':>6}{'cython [s]':>14}{'numpy [s]':>14}{'speedup':>10}")
    for N in sizes:
        a = (*KNOT, N)
        wc, cc = kernels.compiled.kappa_residues(*a)
        wp, cp = kernels.py.kappa_residues(*a)
        assert np.array_equal(wc, wp) and np.array_equal(cc, cp), "backends disagree"
        tc = bench(lambda: kernels.compiled.kappa_residues(*a), args.repeat)
        tp = bench(lambda: kernels.py.kappa_residues(*a), args.repeat)
        print(f"{'kappa_residues':<16}{N:>6}{tc:>14.4g}{tp:>14.4g}{tp / tc:>10.1f}")
    for N in sizes:
        if N > 200:
            # the fallback division is quadratic in the span; larger N takes minutes
            continue
        _, f = cable_jones(IteratedCableParams(*KNOT), N).to_dense()
        _, g = quantum_int(N + 1).to_dense()
        qc = kernels.compiled.divexact_dense(f, g)
        qp = kernels.py.divexact_dense(f, g)
        assert np.array_equal(np.asarray(qc), np.asarray(qp)), "backends disagree"
        tc = bench(lambda: kernels.compiled.divexact_dense(f, g), args.repeat)
        tp = bench(lambda: kernels.py.divexact_dense(f, g), args.repeat)
        print(f"{'divexact_dense':<16}{N:>6}{tc:>14.4g}{tp:>14.4g}{tp / tc:>10.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
