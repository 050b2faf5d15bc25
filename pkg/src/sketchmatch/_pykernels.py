"""Numpy fallback for the compiled kernels; same signatures and tie rules."""

import numpy as np

BACKEND = "numpy"

# rows per block when forming explicit differences
_BLOCK_BYTES = 1 << 23


def row_distances(points, q, cand, out):
    m = points.shape[1]
    if q.shape[0] != m:
        raise ValueError("query length does not match row length")
    k = cand.shape[0]
    step = max(1, _BLOCK_BYTES // (8 * max(m, 1)))
    for lo in range(0, k, step):
        idx = cand[lo:lo + step]
        diff = points[idx] - q
        out[lo:lo + idx.shape[0]] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return out[:k]


def argmax_increment(dists, w, cand):
    if cand.shape[0] == 0:
        return -1, 0.0
    inc = dists[: cand.shape[0]] - w[cand]
    best = int(np.argmax(inc))
    return best, float(inc[best])
