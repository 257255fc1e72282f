"""Pure-Python FIFO multi-server wait-time kernel (heapq-based)."""

import heapq

import numpy as np


def fifo_wait_times(interarrivals, services, servers: int) -> np.ndarray:
    """Waiting time in queue for each arrival to a FIFO c-server station.

    Kiefer-Wolfowitz style recursion: track each server's
    next-free time in a min-heap; an arrival waits for the earliest-free
    server, then occupies it for its service time.

    Args:
        interarrivals: time between consecutive arrivals (first entry is the
            first arrival's absolute time).
        services: service duration per arrival, same length.
        servers: number of parallel servers, >= 1.

    Returns:
        Array of per-arrival waits, same unit as the inputs.
    """
    ia = np.ascontiguousarray(interarrivals, dtype=np.float64)
    sv = np.ascontiguousarray(services, dtype=np.float64)
    if len(ia) != len(sv):
        raise ValueError("interarrivals and services must have equal length")
    if servers < 1:
        raise ValueError("servers must be >= 1")
    heap = [0.0] * servers
    waits = np.empty(len(ia))
    t = 0.0
    replace = heapq.heapreplace
    for i in range(len(ia)):
        t += ia[i]
        w = heap[0] - t
        if w < 0.0:
            w = 0.0
        waits[i] = w
        replace(heap, t + w + sv[i])
    return waits
