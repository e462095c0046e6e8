"""Compare the numba kernels with their numpy twins.

    python3 benchmarks/bench_kernels.py [--q 3^2 2^4 5^2] [--repeat 3]

Both kernel modules are imported directly, so one run times both backends
on identical inputs and checks that their outputs agree.
"""

import argparse
import time

import numpy as np

from pgl2atlas import _kernels_numba as nb
from pgl2atlas import _kernels_numpy as npk
from pgl2atlas.gf import parse_field
from pgl2atlas.pgl2 import pgl2


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads(q_text):
    G = pgl2(parse_field(q_text))
    t = G.field.dense
    q = G.q
    codes = G.all_codes
    rng = np.random.default_rng(0)
    x = rng.choice(codes, 200_000)
    y = rng.choice(codes, 200_000)
    gens = codes[[1, len(codes) // 3]]
    members = codes[: max(2, len(codes) // 10)]
    return {
        "mat_mul": lambda k: k.mat_mul(x, y, q, t.add, t.mul, t.inv),
        "mat_inv": lambda k: k.mat_inv(x, q, t.neg, t.mul, t.inv),
        "element_orders": lambda k: k.element_orders(codes, q + 1, q, t.add, t.mul, t.inv),
        "closure(full)": lambda k: k.closure(gens, G.order_of_group, q, t.add, t.mul, t.inv),
        "conj_member": lambda k: k.conj_member(codes, gens, members, q, t.add, t.mul, t.neg, t.inv),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", nargs="+", default=["3^2", "2^4", "5^2"])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"{'q':>4} {'kernel':<16} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for q_text in args.q:
        for name, run in workloads(q_text).items():
            run(nb)  # compile
            t_nb, out_nb = _best(lambda: run(nb), args.repeat)
            t_np, out_np = _best(lambda: run(npk), args.repeat)
            assert np.array_equal(out_nb, out_np), f"{name} disagrees at q={q_text}"
            print(f"{q_text:>4} {name:<16} {t_nb * 1e3:10.2f} {t_np * 1e3:10.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
