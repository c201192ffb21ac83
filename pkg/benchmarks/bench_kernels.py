"""Compare the compiled and pure-Python reduction kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each workload runs under both kernels in the same process (the kernel is
swapped with dopalg.kernels.use) and the results are checked to agree.
"""

import argparse
import json
import statistics
import time

from dopalg import kernels
from dopalg.catalog import conformal_killing, double_pendulum, einstein, killing, vessiot
from dopalg.homology import duality_test, resolve


def _ranks(R):
    return R.ranks, [int(o) for o in R.orders]


WORKLOADS = {
    "resolve killing n=4": lambda: _ranks(resolve(killing(4).matrix)),
    "resolve killing n=5": lambda: _ranks(resolve(killing(5).matrix)),
    "resolve conformal n=4": lambda: _ranks(resolve(conformal_killing(4).matrix)),
    "resolve conformal n=5": lambda: _ranks(resolve(conformal_killing(5).matrix)),
    "duality einstein n=4": lambda: duality_test(einstein(4).matrix).D1p.nrows,
    "duality pendulum": lambda: duality_test(double_pendulum(False).matrix).verdict,
    "resolve vessiot c": lambda: _ranks(resolve(vessiot("c").matrix)),
}


def bench(repeat: int) -> list[dict]:
    rows = []
    names = kernels.available()
    for label, fn in WORKLOADS.items():
        times, results = {}, {}
        for name in names:
            kernels.use(name)
            fn()  # warm caches shared by both kernels
            samples = []
            for _ in range(repeat):
                t0 = time.perf_counter()
                results[name] = fn()
                samples.append(time.perf_counter() - t0)
            times[name] = statistics.median(samples)
        agree = len({repr(v) for v in results.values()}) == 1
        row = {"workload": label, "agree": agree, **{f"{k}_s": round(v, 4) for k, v in times.items()}}
        if "cython" in times:
            row["speedup"] = round(times["python"] / times["cython"], 2)
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="FILE")
    args = ap.parse_args()
    rows = bench(args.repeat)
    print(f"kernels available: {', '.join(kernels.available())}")
    print(f"{'workload':<24} {'cython s':>9} {'python s':>9} {'speedup':>8}  agree")
    for r in rows:
        print(f"{r['workload']:<24} {r.get('cython_s', float('nan')):>9.4f} {r['python_s']:>9.4f} "
              f"{r.get('speedup', float('nan')):>8.2f}  {r['agree']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
