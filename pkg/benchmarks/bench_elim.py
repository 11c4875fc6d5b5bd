"""Compare the compiled and pure-Python elimination kernels on boundary matrices."""
import argparse
import time

from cactikit import _elim, _elim_py
from cactikit.cacti import based_complex, unbased_complex
from cactikit.moduli import primal_complex


def cases(max_arity: int):
    for n in range(3, max_arity + 1):
        for name, cx in (("based", based_complex(n)), ("unbased", unbased_complex(n)),
                         ("moduli", primal_complex(n))):
            for k in cx.degrees:
                mat = cx.d(k)
                if mat.nnz:
                    yield f"{name}({n}) d{k}", mat


def timed(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if _elim._invariant_factors_c is None:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'matrix':24} {'shape':>12} {'nnz':>7} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, mat in cases(args.max_arity):
        entries = list(mat.entries)
        tp, fp = timed(lambda: _elim_py.invariant_factors(mat.rows, mat.cols, entries), repeat=args.repeat)
        if _elim._invariant_factors_c is None:
            print(f"{label:24} {f'{mat.rows}x{mat.cols}':>12} {mat.nnz:>7} {tp:>10.4f}")
            continue
        tc, fc = timed(lambda: _elim.invariant_factors(mat.rows, mat.cols, entries), repeat=args.repeat)
        assert sorted(fp) == sorted(fc), label
        print(f"{label:24} {f'{mat.rows}x{mat.cols}':>12} {mat.nnz:>7} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
