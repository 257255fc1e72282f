# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled FIFO multi-server wait-time kernel.

Same contract as ``pegstress._kernels.pure.fifo_wait_times``; the min-heap of
server-free times is kept in a flat C array. Results are bit-identical to the
pure implementation because every arrival reads only the heap minimum and the
free-time multiset evolves identically.
"""

import numpy as np


def fifo_wait_times(interarrivals, services, int servers):
    ia_arr = np.ascontiguousarray(interarrivals, dtype=np.float64)
    sv_arr = np.ascontiguousarray(services, dtype=np.float64)
    if ia_arr.shape[0] != sv_arr.shape[0]:
        raise ValueError("interarrivals and services must have equal length")
    if servers < 1:
        raise ValueError("servers must be >= 1")

    cdef double[::1] ia = ia_arr
    cdef double[::1] sv = sv_arr
    cdef Py_ssize_t n = ia.shape[0]
    waits_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] waits = waits_arr
    heap_arr = np.zeros(servers, dtype=np.float64)
    cdef double[::1] heap = heap_arr

    cdef Py_ssize_t i, pos, child
    cdef double t = 0.0
    cdef double w, key

    for i in range(n):
        t = t + ia[i]
        w = heap[0] - t
        if w < 0.0:
            w = 0.0
        waits[i] = w
        # heap-replace the root with this arrival's departure time
        key = t + w + sv[i]
        pos = 0
        while True:
            child = 2 * pos + 1
            if child >= servers:
                break
            if child + 1 < servers and heap[child + 1] < heap[child]:
                child = child + 1
            if heap[child] < key:
                heap[pos] = heap[child]
                pos = child
            else:
                break
        heap[pos] = key

    return waits_arr
