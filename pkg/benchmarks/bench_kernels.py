"""Compare the compiled kernels with the numpy fallback, and the closed form with the oracle.

    python3 benchmarks/bench_kernels.py [--sizes 10,50,200] [--repeats 5]

Each figure is the best of ``--repeats`` rounds, reported per call.
"""
import argparse
import timeit

import numpy as np

from eprgame import closedform as cf
from eprgame import kernels
from eprgame.cli import random_frame
from eprgame.oracle import oracle_distribution


def per_call(fn, repeats):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeats, number=number)) / number


def bench_backends(sizes, repeats, rng):
    backends = kernels.available_backends()
    names = [b.BACKEND for b in backends]
    print(f"kernel timings per call (us); backends: {', '.join(names)}")
    print(f"{'kernel':<10}{'N':>6}" + "".join(f"{n:>14}" for n in names) + f"{'ratio':>10}")
    for n in sizes:
        k = rng.uniform(-1, 1, n)
        x1 = rng.uniform(-1, 1, n)
        x2 = rng.uniform(-1, 1, n)
        bits = "".join(rng.choice(["0", "1"], n)).encode()
        cases = {
            "sym_sums": lambda m: m.sym_sums(k),
            "omega": lambda m: m.omega(x1, x2),
            "ghz_prob": lambda m: m.ghz_prob(bits, k, 0.3, 0.1),
            "w_prob": lambda m: m.w_prob(bits, k, x1, x2),
        }
        if n <= 14:
            cases["ghz_dense"] = lambda m: m.ghz_dense(k, 0.3, 0.1)
            cases["w_dense"] = lambda m: m.w_dense(k, x1, x2)
        for name, call in cases.items():
            times = [per_call(lambda m=m: call(m), repeats) for m in backends]
            ratio = times[0] / times[-1]
            print(f"{name:<10}{n:>6}" + "".join(f"{t * 1e6:>14.2f}" for t in times) + f"{ratio:>9.1f}x")


def bench_oracle(sizes, repeats, rng):
    print(f"\nclosed form vs state-vector oracle, per outcome (backend={kernels.BACKEND})")
    print(f"{'family':<8}{'N':>4}{'closed us':>12}{'oracle us':>14}{'speedup':>10}")
    for family in cf.Family:
        for n in sizes:
            frame = random_frame(rng, family, n)
            bits = "".join(rng.choice(["0", "1"], n))
            closed = per_call(lambda: cf.outcome_probability(frame, bits), repeats)
            oracle = per_call(lambda: oracle_distribution(frame)[bits], repeats)
            print(f"{family.value:<8}{n:>4}{closed * 1e6:>12.2f}{oracle * 1e6:>14.1f}{oracle / closed:>9.0f}x")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="10,50,200", help="N values for kernel timings")
    parser.add_argument("--oracle-sizes", default="6,8,10,12", help="N values for the oracle comparison")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    bench_backends([int(s) for s in args.sizes.split(",")], args.repeats, rng)
    bench_oracle([int(s) for s in args.oracle_sizes.split(",")], args.repeats, rng)


if __name__ == "__main__":
    main()
