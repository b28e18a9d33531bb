"""Compare the compiled and pure-Python dense kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import random
import time

from fthresh.algebra import parse_poly
from fthresh.frobenius import MonomialIdeal, nu_sequence
from fthresh.kernels import available_backends, make_box


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def raw_products(backend, p, side, steps, seed=0):
    rng = random.Random(seed)
    factors = [[((rng.randrange(4), rng.randrange(4)), rng.randrange(1, p)) for _ in range(4)]
               for _ in range(steps)]

    # dense start: promotion only happens once a residue fills its box
    fill = [((i, j), rng.randrange(p)) for i in range(side) for j in range(side)]

    def go():
        box = make_box(p, [side] * side, backend)
        box.set_terms(fill)
        for g in factors:
            box.mul_terms(g)
    return go


def nu_sweep(backend, e_max):
    vars = ["x", "y"]
    P = lambda s: parse_poly(s, 2, vars)
    f = P("y+x") * P("y+x^2") ** 2 * P("y+x^4")
    m = MonomialIdeal.maximal(vars)
    return lambda: nu_sequence(f, m, e_max, backend=backend)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = available_backends()
    cases = [(f"box mul p={p} {side}x{side}", lambda be, p=p, side=side: raw_products(be, p, side, 20))
             for p, side in ((2, 2048), (3, 512), (7, 512), (251, 256))]
    cases += [(f"nu sweep e={e}", lambda be, e=e: nu_sweep(be, e)) for e in (12, 13, 14)]
    print(f"{'case':<28}" + "".join(f"{be:>12}" for be in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, make in cases:
        times = [best_of(make(be), args.repeat) for be in backends]
        row = f"{label:<28}" + "".join(f"{t:>11.3f}s" for t in times)
        if len(times) > 1:
            row += f"{times[1] / times[0]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
