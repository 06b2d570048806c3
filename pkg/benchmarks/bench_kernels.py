"""Compare the compiled and pure-Python product kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Micro benchmarks call both kernels directly on the same inputs.  The
end-to-end numbers run one inversion workload in a subprocess per backend,
selected with KELLERMAP_BACKEND.
"""

import argparse
import os
import subprocess
import sys
import timeit

from kellermap import _pykernel
from kellermap.poly import Polynomial, parse_polynomial

try:
    from kellermap import _ckernel
except ImportError:
    _ckernel = None

WORKLOAD = """
import time
from kellermap.kernel import BACKEND
from kellermap.suite import check_inversion, check_conjugation, keller_corpus
start = time.perf_counter()
check_inversion(keller_corpus(0, 60))
check_conjugation(0, 20)
print(BACKEND, time.perf_counter() - start)
"""


def cases():
    n = 4
    dense = parse_polynomial(" + ".join(f"{i + 1}*x1^{i}*x2^{(i * 3) % 5}*x3^{i % 3}*x4" for i in range(12)), n)
    lin = parse_polynomial("x1 + 2*x2 - 3*x3 + x4 + 1", n)
    frac = parse_polynomial("1/3*x1^2 + 5/7*x2*x3 - 2/9*x4^3 + 1/11", n)
    yield "dense 12x12 terms", dense.terms, dense.terms, -1
    yield "(linear form)^8 x (linear form)", lin.pow(8).terms, lin.terms, -1
    yield "rational coefficients, power 4 x 4", frac.pow(4).terms, frac.pow(4).terms, -1
    yield "same, truncated at degree 10", frac.pow(4).terms, frac.pow(4).terms, 10
    big = Polynomial(n, {m: c * 10 ** 30 for m, c in lin.pow(6).terms.items()})
    yield "huge coefficients (falls back)", big.terms, big.terms, -1


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernel is None:
        print("compiled kernel not built; only the Python kernel is available")
        return
    print(f"{'case':40s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, a, b, trunc in cases():
        assert _pykernel.mul_terms(a, b, 4, trunc) == _ckernel.mul_terms(a, b, 4, trunc)
        tp = min(timeit.repeat(lambda: _pykernel.mul_terms(a, b, 4, trunc), number=3, repeat=args.repeat)) / 3
        tc = min(timeit.repeat(lambda: _ckernel.mul_terms(a, b, 4, trunc), number=3, repeat=args.repeat)) / 3
        print(f"{name:40s} {tp * 1e3:10.2f} {tc * 1e3:10.2f} {tp / tc:7.1f}x")

    print("\nend to end (120 corpus inversions + 20 conjugation checks)")
    for backend in ("python", "cython"):
        env = dict(os.environ, KELLERMAP_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        name, secs = out.stdout.split()
        print(f"  {name:8s} {float(secs):6.2f} s")


if __name__ == "__main__":
    main()
