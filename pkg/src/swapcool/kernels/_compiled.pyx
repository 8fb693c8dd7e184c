# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: pairing-schedule generation and coefficient accumulation."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef int _run(int m, bint record, int* tau, int* pending, int* es, int* el,
              int* eh, int* et, long* n_events) except -1:
    # One full execution of the pairing rules.  pending maps tau value
    # (offset by 2m) to the lowest unpaired index seen so far this step.
    # Updating tau in-scan is safe: a paired index is never re-read within
    # the same step's scan.
    cdef int n = 2 * m
    cdef int step = 0, j, t, lo, npairs
    cdef int limit = 10 * m * m + 10
    cdef int off = n
    cdef long ne = 0
    while True:
        npairs = 0
        for j in range(n):
            t = tau[j]
            lo = pending[t + off]
            if lo >= 0:
                pending[t + off] = -1
                if record:
                    es[ne] = step
                    el[ne] = lo
                    eh[ne] = j
                    et[ne] = t
                ne += 1
                npairs += 1
                tau[lo] -= 1
                tau[j] += 1
            else:
                pending[t + off] = j
        for j in range(2 * off + 1):
            pending[j] = -1
        if npairs == 0:
            break
        step += 1
        if step > limit:
            raise RuntimeError("pairing schedule failed to terminate")
    n_events[0] = ne
    return step


def improved_schedule_events(int m, bint record=True):
    """Run the tau-matching pairing rules for 2m systems.

    Returns (step_star, terminal_tau, step, lo, hi, tau_common); the event
    arrays are None when record is False.  Within a step, events are ordered
    by discovery (ascending hi), re-sorted by lo by the caller if needed.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    cdef int n = 2 * m
    cdef cnp.ndarray[cnp.int32_t] tau_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t] pend_arr = np.full(4 * m + 1, -1, dtype=np.int32)
    cdef long ne = 0
    cdef int step_star

    # counting pass to size the event arrays exactly
    step_star = _run(m, False, <int*> tau_arr.data, <int*> pend_arr.data,
                     NULL, NULL, NULL, NULL, &ne)
    if not record:
        return step_star, tau_arr, None, None, None, None

    cdef cnp.ndarray[cnp.int32_t] es = np.empty(ne, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t] el = np.empty(ne, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t] eh = np.empty(ne, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t] et = np.empty(ne, dtype=np.int32)
    tau_arr[:] = 0
    pend_arr[:] = -1
    step_star = _run(m, True, <int*> tau_arr.data, <int*> pend_arr.data,
                     <int*> es.data, <int*> el.data, <int*> eh.data,
                     <int*> et.data, &ne)
    return step_star, tau_arr, es, el, eh, et


def accumulate_rows(int n_systems, int m,
                    cnp.ndarray[cnp.int32_t] lo, cnp.ndarray[cnp.int32_t] hi,
                    cnp.ndarray[cnp.int32_t] tau, cnp.ndarray[cnp.uint8_t] fresh):
    """Propagate deviation-coefficient rows through a pair-event sequence.

    Each pair resets both rows when flagged fresh, then sets both to the row
    mean plus a unit at the column of the pair's common tau.
    """
    cdef int ncols = 2 * m + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] K = np.zeros((n_systems, ncols))
    cdef double* k = <double*> K.data
    cdef long p, npairs = lo.shape[0]
    cdef int a, b, col, c
    cdef double v
    for p in range(npairs):
        a = lo[p]
        b = hi[p]
        col = tau[p] + m
        if col < 0 or col >= ncols:
            raise AssertionError("coefficient column out of range")
        if fresh[p]:
            for c in range(ncols):
                k[a * ncols + c] = 0.0
                k[b * ncols + c] = 0.0
        for c in range(ncols):
            v = 0.5 * (k[a * ncols + c] + k[b * ncols + c])
            k[a * ncols + c] = v
            k[b * ncols + c] = v
        k[a * ncols + col] += 1.0
        k[b * ncols + col] += 1.0
    return K
