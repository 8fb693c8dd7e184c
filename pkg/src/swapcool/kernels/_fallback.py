"""Pure-numpy fallback for the compiled kernels.

Same contracts and same event streams as ``_compiled``, roughly 50x slower
on the schedule generator.  The per-step pairing ("scan ascending, pair each
index with the next unpaired index carrying the same tau") is equivalent to
pairing consecutive members inside every group of equal tau, which is what
the vectorised code below does.
"""

from __future__ import annotations

import numpy as np


def improved_schedule_events(m: int, record: bool = True):
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 2 * m
    tau = np.zeros(n, dtype=np.int32)
    pos = np.arange(n)
    limit = 10 * m * m + 10
    step = 0
    ev_step, ev_lo, ev_hi, ev_tau = [], [], [], []
    while True:
        order = np.argsort(tau, kind="stable")
        st = tau[order]
        newrun = np.empty(n, dtype=bool)
        newrun[0] = True
        np.not_equal(st[1:], st[:-1], out=newrun[1:])
        run_start = np.maximum.accumulate(np.where(newrun, pos, 0))
        hi_mask = ((pos - run_start) % 2) == 1
        if not hi_mask.any():
            break
        hi = order[hi_mask]
        lo = order[np.nonzero(hi_mask)[0] - 1]
        common = st[hi_mask]
        tau[lo] -= 1
        tau[hi] += 1
        if record:
            ev_step.append(np.full(lo.shape, step, dtype=np.int32))
            ev_lo.append(lo.astype(np.int32))
            ev_hi.append(hi.astype(np.int32))
            ev_tau.append(common)
        step += 1
        if step > limit:
            raise RuntimeError("pairing schedule failed to terminate")
    if not record:
        return step, tau, None, None, None, None
    if ev_step:
        out = tuple(np.concatenate(a) for a in (ev_step, ev_lo, ev_hi, ev_tau))
    else:
        out = tuple(np.zeros(0, dtype=np.int32) for _ in range(4))
    return (step, tau) + out


def accumulate_rows(n_systems, m, lo, hi, tau, fresh):
    ncols = 2 * m + 1
    K = np.zeros((n_systems, ncols))
    col = tau.astype(np.int64) + m
    if col.size and (col.min() < 0 or col.max() >= ncols):
        raise AssertionError("coefficient column out of range")
    for p in range(lo.shape[0]):
        a, b = lo[p], hi[p]
        if fresh[p]:
            K[a] = 0.0
            K[b] = 0.0
        row = 0.5 * (K[a] + K[b])
        row[col[p]] += 1.0
        K[a] = row
        K[b] = row
    return K
