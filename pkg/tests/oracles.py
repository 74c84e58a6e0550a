"""Independent reference computations used only by the tests.

Brute-force state enumeration with itertools and math.fsum, no package code.
"""

import itertools
import math

import numpy as np


def brute_log_partition(node_count, edges, couplings, fields=None):
    fields = [0.0] * node_count if fields is None else fields
    energies = []
    for spins in itertools.product((1, -1), repeat=node_count):
        e = math.fsum(j * math.prod(spins[i] for i in edge) for j, edge in zip(couplings, edges))
        e += math.fsum(h * s for h, s in zip(fields, spins))
        energies.append(e)
    top = max(energies)
    return top + math.log(math.fsum(math.exp(e - top) for e in energies))


def brute_fisher(node_count, edges, couplings):
    weights, stats = [], []
    for spins in itertools.product((1, -1), repeat=node_count):
        s = [math.prod(spins[i] for i in edge) for edge in edges]
        weights.append(math.exp(math.fsum(j * x for j, x in zip(couplings, s))))
        stats.append(s)
    w = np.array(weights) / math.fsum(weights)
    s = np.array(stats, dtype=float)
    mean = w @ s
    return (s * w[:, None]).T @ s - np.outer(mean, mean)


def fd_hessian(f, x, h=1e-4):
    """Central second differences of a scalar function."""
    x = np.asarray(x, dtype=float)
    d = len(x)
    out = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            def at(di, dj):
                y = x.copy()
                y[i] += di
                y[j] += dj
                return f(y)

            if i == j:
                val = (at(h, 0) - 2 * f(x) + at(-h, 0)) / (h * h)
            else:
                val = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h)
            out[i, j] = out[j, i] = val
    return out


def mp_fd_hessian_log_partition(node_count, edges, couplings, dps=40, h="1e-12"):
    """Central-difference Hessian of log Z in mpmath arithmetic.

    Strongly coupled graphs have covariances near 1e-5, below what double
    precision second differences of log Z can resolve, hence the extra digits.
    """
    import mpmath

    with mpmath.workdps(dps):
        step = mpmath.mpf(h)
        x0 = [mpmath.mpf(float(c)) for c in couplings]
        spin_stats = [
            [math.prod(spins[i] for i in edge) for edge in edges]
            for spins in itertools.product((1, -1), repeat=node_count)
        ]

        def logz(x):
            return mpmath.log(mpmath.fsum(mpmath.exp(mpmath.fdot(x, s)) for s in spin_stats))

        def at(i, di, j, dj):
            y = list(x0)
            y[i] += di
            y[j] += dj
            return logz(y)

        d = len(x0)
        f0 = logz(x0)
        out = np.empty((d, d))
        for i in range(d):
            for j in range(i, d):
                if i == j:
                    val = (at(i, step, i, 0) - 2 * f0 + at(i, -step, i, 0)) / step**2
                else:
                    val = (at(i, step, j, step) - at(i, step, j, -step)
                           - at(i, -step, j, step) + at(i, -step, j, -step)) / (4 * step**2)
                out[i, j] = out[j, i] = float(val)
        return out


def catalog_edges(family, n):
    """Edge lists written out independently of the package's catalog builder."""
    if family == "P":
        return [(i, i + 1) for i in range(n - 1)]
    if family == "S":
        return [(0, i) for i in range(1, n)]
    if family == "C":
        return sorted([(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def flow_iterations(rates, eta, tol, start=None):
    """Count explicit-Euler steps on a diagonal quadratic until the distance drops by tol.

    ``start`` holds the initial mode coefficients (default: normalized all-ones).
    """
    x = np.ones(len(rates)) / math.sqrt(len(rates)) if start is None else np.array(start, float)
    goal = tol * np.linalg.norm(x)
    n = 0
    while np.linalg.norm(x) > goal:
        x = x * (1.0 - eta * np.asarray(rates))
        n += 1
    return n
