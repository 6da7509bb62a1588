# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled product kernel for group closures.

Same contract as _closure_py; the batched matrix products are the hot
loop of SL2/Ghat enumeration and normal closures, so they run as typed
C loops here.
"""

import numpy as np

cimport numpy as cnp


def mul_batch(cnp.int32_t[::1] a, cnp.int32_t[::1] b,
              cnp.int32_t[::1] c, cnp.int32_t[::1] d,
              g4, cnp.int32_t[:, ::1] add_t, cnp.int32_t[:, ::1] mul_t):
    cdef Py_ssize_t m = a.shape[0]
    cdef cnp.int64_t n = add_t.shape[0]
    cdef int ga = g4[0], gb = g4[1], gc = g4[2], gd = g4[3]
    out_np = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_np
    cdef Py_ssize_t i
    cdef cnp.int64_t na, nb, nc, nd
    for i in range(m):
        na = add_t[mul_t[a[i], ga], mul_t[b[i], gc]]
        nb = add_t[mul_t[a[i], gb], mul_t[b[i], gd]]
        nc = add_t[mul_t[c[i], ga], mul_t[d[i], gc]]
        nd = add_t[mul_t[c[i], gb], mul_t[d[i], gd]]
        out[i] = ((na * n + nb) * n + nc) * n + nd
    return out_np


def conj_batch(cnp.int32_t[::1] a, cnp.int32_t[::1] b,
               cnp.int32_t[::1] c, cnp.int32_t[::1] d,
               g4, gi4, cnp.int32_t[:, ::1] add_t, cnp.int32_t[:, ::1] mul_t):
    cdef Py_ssize_t m = a.shape[0]
    cdef cnp.int64_t n = add_t.shape[0]
    cdef int ga = g4[0], gb = g4[1], gc = g4[2], gd = g4[3]
    cdef int ia = gi4[0], ib = gi4[1], ic = gi4[2], id_ = gi4[3]
    out_np = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_np
    cdef Py_ssize_t i
    cdef int la, lb, lc, ld
    cdef cnp.int64_t na, nb, nc, nd
    for i in range(m):
        la = add_t[mul_t[ga, a[i]], mul_t[gb, c[i]]]
        lb = add_t[mul_t[ga, b[i]], mul_t[gb, d[i]]]
        lc = add_t[mul_t[gc, a[i]], mul_t[gd, c[i]]]
        ld = add_t[mul_t[gc, b[i]], mul_t[gd, d[i]]]
        na = add_t[mul_t[la, ia], mul_t[lb, ic]]
        nb = add_t[mul_t[la, ib], mul_t[lb, id_]]
        nc = add_t[mul_t[lc, ia], mul_t[ld, ic]]
        nd = add_t[mul_t[lc, ib], mul_t[ld, id_]]
        out[i] = ((na * n + nb) * n + nc) * n + nd
    return out_np
