"""Compare the compiled and pure-Python kernel backends.

Times the all-pairs SemSim matrix (maximum assignment per pair) and the
directed Haase matrix on a synthetic corpus, checks that both backends give
bit-identical results, and prints one line per (kernel, backend).

    python benchmarks/bench_kernels.py --resources 300 --concepts 500
"""

import argparse
import time

import numpy as np

from semsimp.baselines import haase_table
from semsimp.kernels import NORM_GAV, available_backends
from semsimp.semsim import CorpusLayout, consim_table, run_upper_triangle
from semsimp.synthetic import random_corpus, random_taxonomy
from semsimp.weighting import weigh


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resources", type=int, default=300)
    ap.add_argument("--concepts", type=int, default=500)
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    t = random_taxonomy(args.concepts, rng)
    corpus = random_corpus(t, args.resources, rng, max_len=args.max_len)
    lay = CorpusLayout(corpus)
    S = consim_table(weigh(t, "AF", corpus), lay.concepts, lay.concepts)
    H = haase_table(t, lay.concepts, lay.concepts)
    ones = np.ones(len(lay.concepts))
    pairs = args.resources * (args.resources + 1) // 2
    print(f"{args.resources} resources, {pairs} pairs, {len(lay.concepts)} concepts in use")

    results = {}
    for name, be in sorted(available_backends().items()):
        def assignment():
            return run_upper_triangle(
                lambda a, b, out: be.assignment_block(S, lay.indptr, lay.indices, lay.rank, NORM_GAV, a, b, out),
                lay.size)

        def directed():
            return run_upper_triangle(lambda a, b, out: be.directed_block(H, ones, lay.indptr, lay.indices, a, b, out),
                                      lay.size)

        for kernel, fn in [("assignment", assignment), ("directed", directed)]:
            secs, out = timed(fn, args.repeat)
            results[kernel, name] = (secs, out)
            print(f"{kernel:<11} {name:<7} {secs:9.4f} s  {1e6 * secs / pairs:8.2f} us/pair")

    names = sorted(available_backends())
    if len(names) == 2:
        for kernel in ("assignment", "directed"):
            (a, va), (b, vb) = results[kernel, names[0]], results[kernel, names[1]]
            same = np.array_equal(va, vb)
            print(f"{kernel:<11} speed-up {max(a, b) / min(a, b):6.1f}x  bit-identical: {same}")


if __name__ == "__main__":
    main()
