"""Pure numpy implementation of the cone counters in ``_kernels.pyx``."""
import numpy as np

_CHUNK = 1 << 16


def cone_counts(inv, pts):
    inv = np.asarray(inv, dtype=float)
    pos = neg = 0
    for start in range(0, len(pts), _CHUNK):
        c = pts[start:start + _CHUNK] @ inv.T
        pos += int(np.count_nonzero((c >= 0).all(axis=1)))
        neg += int(np.count_nonzero((c <= 0).all(axis=1)))
    return pos, neg


def simplex_cone_counts(inv, pts):
    inv = np.asarray(inv, dtype=float)
    n = inv.shape[0]
    counts = np.zeros(n + 1, dtype=np.int64)
    for start in range(0, len(pts), _CHUNK):
        c = pts[start:start + _CHUNK] @ inv.T
        s = c.sum(axis=1)
        neg = c < 0
        pos = c > 0
        nneg = neg.sum(axis=1)
        npos = pos.sum(axis=1)
        counts[0] += np.count_nonzero(nneg == 0) + np.count_nonzero(npos == 0)
        sel = (nneg == 1) & (s <= 0)
        counts[1:] += np.bincount(neg[sel].argmax(axis=1), minlength=n)
        sel = (npos == 1) & (s >= 0)
        counts[1:] += np.bincount(pos[sel].argmax(axis=1), minlength=n)
    return counts
