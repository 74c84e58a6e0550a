"""Pure-Python/numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference side of the backend equivalence tests and the benchmark.
"""

import math

import numpy as np

_BLOCK = 1 << 16


def ising_moments(node_count, edge_masks, couplings, fields, include_fields):
    """Exact log-partition and first/second moments of the sufficient statistics.

    States are the integers 0..2**n - 1; bit i set means spin i is -1. The
    edge statistic is then (-1)**popcount(state & mask).
    """
    n = int(node_count)
    masks = [int(m) for m in edge_masks]
    jv = np.asarray(couplings, dtype=np.float64)
    hv = np.asarray(fields, dtype=np.float64)
    d = len(masks) + (n if include_fields else 0)

    def block_stats(lo, hi):
        states = np.arange(lo, hi, dtype=np.int64)
        bits = [(states >> i) & 1 for i in range(n)]
        spins = np.stack([1.0 - 2.0 * b for b in bits], axis=1)
        cols = []
        for mask in masks:
            par = np.zeros(hi - lo, dtype=np.int64)
            for i in range(n):
                if mask >> i & 1:
                    par ^= bits[i]
            cols.append(1.0 - 2.0 * par)
        edge_stats = np.stack(cols, axis=1) if cols else np.zeros((hi - lo, 0))
        energy = edge_stats @ jv + spins @ hv
        stats = np.hstack([edge_stats, spins]) if include_fields else edge_stats
        return energy, stats

    total = 1 << n
    blocks = [(lo, min(lo + _BLOCK, total)) for lo in range(0, total, _BLOCK)]
    shift = max(block_stats(lo, hi)[0].max() for lo, hi in blocks)
    z = 0.0
    mean = np.zeros(d)
    second = np.zeros((d, d))
    for lo, hi in blocks:
        energy, stats = block_stats(lo, hi)
        w = np.exp(energy - shift)
        z += w.sum()
        mean += w @ stats
        second += (stats * w[:, None]).T @ stats
    mean /= z
    second /= z
    return shift + math.log(z), mean, second


def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns (diagonal, eigenvectors, sweeps, converged); eigenpairs unsorted.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    d = a.shape[0]
    v = np.eye(d)
    scale = math.sqrt(float((a * a).sum()))
    thresh = tol * scale
    for sweep in range(max_sweeps + 1):
        off = math.sqrt(float(np.square(a - np.diag(a.diagonal())).sum()))
        if off <= thresh:
            return np.diag(a).copy(), v, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / abs(theta)
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v, max_sweeps, False
