"""Compare the compiled and pure-Python exact schedulers on random instances.

Usage: python benchmarks/bench_schedule.py [--instances N] [--sizes 8,9,10,11] [--seed S]
"""
import argparse
import random
import sys
import time

from ecmpower import schedule
from ecmpower.schedule import Contribution, schedule_min_makespan


def make_instances(rng, n, count, n_resources=5):
    pool = [f"R{k}" for k in range(n_resources)]
    out = []
    for _ in range(count):
        out.append([Contribution(f"c{i}", rng.uniform(1, 30),
                                 frozenset(rng.sample(pool, rng.randint(1, 2))))
                    for i in range(n)])
    return out


def timed(instances, backend):
    t0 = time.perf_counter()
    spans = [schedule_min_makespan(inst, backend=backend).makespan for inst in instances]
    return time.perf_counter() - t0, spans


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--sizes", default="8,9,10,11")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if schedule.BACKEND != "compiled":
        print("compiled extension not available; build with `pip install -e .`", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    print(f"{'n':>3} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        instances = make_instances(rng, n, args.instances)
        t_py, a = timed(instances, "python")
        t_c, b = timed(instances, "compiled")
        if any(abs(x - y) > 1e-9 for x, y in zip(a, b)):
            print(f"n={n}: backends disagree", file=sys.stderr)
            return 2
        print(f"{n:>3} {t_py:>11.4f} {t_c:>13.4f} {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
