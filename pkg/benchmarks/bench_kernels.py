"""Time the compiled kernels against the NumPy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one CSV row per kernel with best-of-repeat seconds and the speedup,
after checking that both backends produce identical results.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from shufflelab import _backend, _pure_kernels
from shufflelab.shuffles import ShuffleSpec, make_rng, support


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_convolve(mod, repeat: int):
    spec = ShuffleSpec("RT", 7)
    group = spec.group()
    supp = support(spec)
    table = np.ascontiguousarray(np.array(group.left_table([g for g, _ in supp]), dtype=np.int64))
    probs = np.array([float(p) for _, p in supp])
    values = make_rng(1).random(group.size)
    values /= values.sum()

    def run():
        v = values
        for _ in range(20):
            v = mod.convolve_float(v, table, probs)
        return v

    return _best(run, repeat), run()


def bench_swaps(mod, repeat: int):
    rng = make_rng(2)
    R, n, T = 4096, 52, 256
    rights = rng.integers(0, n, size=(R, T), dtype=np.int64)
    lefts = np.minimum(np.floor(rng.random((R, T)) * (rights + 1)).astype(np.int64), rights)
    flips = (rng.random((R, T)) < 0.5).astype(np.uint8)
    state = {}

    def run():
        decks = np.tile(np.arange(1, n + 1, dtype=np.int64), (R, 1))
        faces = np.ones((R, n), dtype=np.int8)
        mod.apply_swaps(decks, faces, rights, lefts, flips)
        state["out"] = (decks, faces)

    t = _best(run, repeat)
    return t, state["out"]


def bench_cover(mod, repeat: int):
    rng = make_rng(3)
    R, n, C = 8192, 200, 2048
    draws = rng.integers(0, n, size=(R, C), dtype=np.int64)
    state = {}

    def run():
        seen = np.zeros((R, n), dtype=np.uint8)
        remaining = np.full(R, n, dtype=np.int64)
        hit = np.zeros(R, dtype=np.int64)
        mod.cover_update(seen, remaining, hit, draws, 0)
        state["out"] = (remaining, hit)

    t = _best(run, repeat)
    return t, state["out"]


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if a.dtype.kind == "f":
        return bool(np.allclose(a, b, rtol=1e-12, atol=1e-15))
    return bool(np.array_equal(a, b))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _backend.compiled is None:
        print("compiled kernels are not built; run `python3 setup.py build_ext --inplace`", file=sys.stderr)
        return 1
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["kernel", "compiled_s", "numpy_s", "speedup", "identical"])
    ok = True
    for name, bench in (("convolve_float", bench_convolve), ("apply_swaps", bench_swaps),
                        ("cover_update", bench_cover)):
        tc, outc = bench(_backend.compiled, args.repeat)
        tp, outp = bench(_pure_kernels, args.repeat)
        same = _same(outc, outp)
        ok = ok and same
        w.writerow([name, f"{tc:.4f}", f"{tp:.4f}", f"{tp / tc:.1f}", same])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
