"""Compare the compiled and pure-Python tensor kernels.

    python benchmarks/bench_kernels.py [--repeat 200] [--seed 0]

Times ``apply_axis`` and ``partial_contraction`` per call on a few shapes, then
a full block search and a full ``decide_lu_equivalence`` run under each
backend. The compiled backend is skipped if the extension was not built.
"""
import argparse
import timeit

import numpy as np

from luequiv import (
    BlockStructure,
    OptimizerConfig,
    apply_tuple,
    block_overlap_maximize,
    canonicalize,
    decide_lu_equivalence,
    ghz_state,
    random_haar_state,
    random_local_tuple,
)
from luequiv import kernels

SHAPES = [(2, 2, 2), (3, 3, 3), (4, 4, 4), (2, 2, 2, 2, 2, 2)]


def time_call(fn, repeat):
    # best of 5 batches, per call
    return min(timeit.repeat(fn, number=repeat, repeat=5)) / repeat


def bench_kernels(repeat, rng):
    rows = []
    for dims in SHAPES:
        psi = random_haar_state(dims, rng).amplitudes
        phi = random_haar_state(dims, rng).amplitudes
        k = len(dims) // 2
        u = random_local_tuple(dims, rng)[k]
        for name, fn in [("apply_axis", lambda: kernels.apply_axis(psi, dims, k, u)),
                         ("partial_contraction",
                          lambda: kernels.partial_contraction(psi, phi, dims, k))]:
            times = {}
            for backend in kernels.available_backends():
                kernels.set_backend(backend)
                times[backend] = time_call(fn, repeat)
            rows.append((name, dims, times))
    return rows


def bench_end_to_end(rng):
    # an unmatched pair with full blocks runs every restart to convergence
    a = canonicalize(ghz_state((2, 2, 2, 2)))
    others = [random_haar_state(a.state.dims, rng) for _ in range(10)]
    blocks = BlockStructure(((2,),) * 4)
    cfg = OptimizerConfig(restarts=4)
    pairs = []
    for _ in range(10):
        v = random_haar_state((3, 3, 3), rng)
        pairs.append((v, apply_tuple(v, random_local_tuple(v.dims, rng))))

    def search():
        for b in others:
            block_overlap_maximize(a, b, blocks, cfg)

    def pipeline():
        for v, w in pairs:
            decide_lu_equivalence(v, w)

    out = {}
    for backend in kernels.available_backends():
        kernels.set_backend(backend)
        out[backend] = (min(timeit.repeat(search, number=1, repeat=3)),
                        min(timeit.repeat(pipeline, number=1, repeat=3)))
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    backends = kernels.available_backends()
    previous = kernels.get_backend()
    print(f"backends: {', '.join(backends)}  (default {previous})")
    try:
        print(f"\n{'kernel':22s} {'dims':20s} " + " ".join(f"{b + ' [us]':>14s}" for b in backends)
              + ("   speedup" if len(backends) > 1 else ""))
        for name, dims, times in bench_kernels(args.repeat, rng):
            line = f"{name:22s} {str(dims):20s} " + " ".join(f"{times[b] * 1e6:14.2f}" for b in backends)
            if "cython" in times:
                line += f"   {times['python'] / times['cython']:7.2f}x"
            print(line)
        res = bench_end_to_end(rng)
        print(f"\n{'workload':46s} " + " ".join(f"{b + ' [s]':>14s}" for b in backends))
        print(f"{'block search, 4 qubits unmatched, 40 runs':46s} "
              + " ".join(f"{res[b][0]:14.3f}" for b in backends))
        print(f"{'decide_lu_equivalence, 10 qutrit pairs':46s} "
              + " ".join(f"{res[b][1]:14.3f}" for b in backends))
    finally:
        kernels.set_backend(previous)


if __name__ == "__main__":
    main()
