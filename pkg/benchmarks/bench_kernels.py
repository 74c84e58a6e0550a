"""Time the compiled and numpy kernel backends side by side.

    python benchmarks/bench_kernels.py [--repeat N]

Moment enumeration is timed on complete and cycle graphs of growing size;
the eigensolver on random symmetric matrices. Results agree between
backends; the script checks that before timing.
"""

import argparse
import timeit

import numpy as np

from fisher_regime import kernels
from fisher_regime.expfam import ExpFamilyModel
from fisher_regime.hypergraph import Hypergraph


def complete_graph(n):
    return Hypergraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n):
    return Hypergraph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def moment_args(host, J=0.5):
    model = ExpFamilyModel(host, np.full(host.edge_count, J))
    return (host.node_count, model.edge_masks(), np.asarray(model.couplings, float),
            np.zeros(host.node_count), False)


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    names = kernels.available()
    if "compiled" not in names:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'kernel':<28}" + "".join(f"{n:>14}" for n in names) + ("    speedup" if len(names) == 2 else ""))

    cases = [(f"moments K{n}", complete_graph(n)) for n in (5, 8, 10)]
    cases += [(f"moments C{n}", cycle_graph(n)) for n in (12, 16, 18)]
    for label, host in cases:
        a = moment_args(host)
        results = [kernels.get(n).ising_moments(*a) for n in names]
        for r in results[1:]:
            np.testing.assert_allclose(r[2], results[0][2], rtol=1e-10, atol=1e-12)
        times = [best_time(lambda n=n: kernels.get(n).ising_moments(*a), args.repeat) for n in names]
        report(label, times)

    rng = np.random.default_rng(0)
    for d in (6, 15, 45):
        m = rng.normal(size=(d, d))
        m = m + m.T
        times = [best_time(lambda n=n: kernels.get(n).jacobi_eigh(m.copy(), 1e-14, 100), args.repeat)
                 for n in names]
        report(f"jacobi d={d}", times)


def report(label, times):
    row = f"{label:<28}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
    if len(times) == 2:
        # available() is sorted: compiled first, python second
        row += f"  {times[1] / times[0]:>8.1f}x"
    print(row)


if __name__ == "__main__":
    main()
