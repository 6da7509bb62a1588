"""Pure-Python (numpy) product kernel: the fallback backend."""

import numpy as np


def mul_batch(a, b, c, d, g4, add_t, mul_t):
    """Right-multiply a batch of matrices (id columns a,b,c,d) by the
    single matrix g4; returns packed int64 keys."""
    ga, gb, gc, gd = g4
    na = add_t[mul_t[a, ga], mul_t[b, gc]]
    nb = add_t[mul_t[a, gb], mul_t[b, gd]]
    nc = add_t[mul_t[c, ga], mul_t[d, gc]]
    nd = add_t[mul_t[c, gb], mul_t[d, gd]]
    n = np.int64(add_t.shape[0])
    return ((na.astype(np.int64) * n + nb) * n + nc) * n + nd


def conj_batch(a, b, c, d, g4, gi4, add_t, mul_t):
    """g * M * g^-1 for a batch of M; returns packed int64 keys."""
    ga, gb, gc, gd = g4
    # left-multiply by g
    la = add_t[mul_t[ga, a], mul_t[gb, c]]
    lb = add_t[mul_t[ga, b], mul_t[gb, d]]
    lc = add_t[mul_t[gc, a], mul_t[gd, c]]
    ld = add_t[mul_t[gc, b], mul_t[gd, d]]
    return mul_batch(la, lb, lc, ld, gi4, add_t, mul_t)
