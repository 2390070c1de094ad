"""Time the numba kernels against the pure-numpy fallback on the hot loops.

Run with ``python3 benchmarks/bench_kernels.py`` (add ``--quick`` for a short pass).
Compilation happens in a warm-up call that is not timed.  Each case also
checks that both backends return the same answer.
"""

import argparse
import time

import numpy as np

from mathieusub import kernels, laurent
from mathieusub.ff import make_field
from mathieusub.group import AbelianGroup, builtin_group


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(quick):
    rng = np.random.default_rng(0)
    F, G = make_field(3), builtin_group("D4")
    u, v = rng.integers(0, 3, (2, G.order))
    yield "convolve GF(3)[D4] x2000", lambda: [kernels.convolve(F, G, u, v) for _ in range(2000)]

    F, G = make_field(3), AbelianGroup([2, 2, 2] if quick else [3, 3])
    free = np.arange(1, G.order, dtype=np.int64)
    total = F.order ** (G.order - 1)
    yield f"idempotent scan GF(3)[{G.name}] {total} candidates", \
        lambda: kernels.idempotent_scan(F, G, 0, total, free)

    F, G = make_field(2), AbelianGroup([7] if quick else [2, 5])
    total = F.order ** G.order
    yield f"radical sweep GF(2)[{G.name}] {total} elements", lambda: kernels.radical_sweep(F, G, 0, total)

    M = 500 if quick else 2000
    yield f"trace of powers p=7 m<={M}", lambda: laurent.traces_of_powers(7, M)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    kernels.warm_up()
    print(f"{'case':<48}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for name, fn in cases(args.quick):
        with kernels.use_backend("numba"):
            fn()
            t_nb, a = _time(fn, args.repeat)
        with kernels.use_backend("numpy"):
            t_np, b = _time(fn, args.repeat)
        if not _same(a, b):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<48}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
