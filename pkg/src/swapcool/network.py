"""Pairing networks that chain the two-system protocol across many copies.

Two schedulers are provided.  The tournament network pairs the surviving
forward branches stage by stage and needs 2^n systems for n time steps.  The improved
network keeps 2m systems: every step pairs, in index order, systems whose
integer flow-time tau currently coincides (lower index moves to tau-1, higher
to tau+1), and any pair meeting again at tau = 0 after the first step is
replaced by fresh initial states before the protocol acts.  Iterating until
no two systems share a tau leaves the unique terminal profile

    tau_j(step*) = j - m - 1  (j <= m),   j - m  (j > m)

in 1-based labels, with step* = O(m^2).

Each protocol application deposits one unit of second-order deviation at the
pair's common tau and averages whatever the two systems had accumulated; the
resulting coefficient rows depend only on the schedule, never on the
Hamiltonian.  The hot loops live in :mod:`swapcool.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .hamiltonian import Spectrum
from .protocol import deviation_term, protocol_unitary
from .quantum import DensityOperator, PureState, _check_dims
from .flow import find_steps_for_p1, flow_exact

EXACT_ORACLE_JOINT_CAP = 1024
PREDICT_DIM_CAP = 64


@dataclass(frozen=True)
class Schedule:
    """Pair events of one network run, in canonical (step, lo) order.

    Indices are 0-based; ``tau_common`` is the shared tau at pairing time and
    ``fresh`` marks pairs reset to the initial state before the protocol.
    """

    kind: str
    m: int
    n_systems: int
    step_star: int
    step: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    tau_common: np.ndarray
    fresh: np.ndarray
    terminal_tau: np.ndarray

    @property
    def n_pairs(self) -> int:
        return int(self.step.size)

    def pairs_at(self, step: int) -> list[tuple[int, int]]:
        mask = self.step == step
        return list(zip(self.lo[mask].tolist(), self.hi[mask].tolist()))

    def tau_matrix(self) -> np.ndarray:
        """Replay the events into the full (n_systems, step_star+1) tau table."""
        delta = np.zeros((self.n_systems, self.step_star + 1), dtype=np.int64)
        np.add.at(delta, (self.lo, self.step + 1), -1)
        np.add.at(delta, (self.hi, self.step + 1), 1)
        return np.cumsum(delta, axis=1)

    def validate(self) -> None:
        """Replay the events and check the pairing rules; raises on violation."""
        tau = self.tau_matrix()
        key = self.step.astype(np.int64) * self.n_systems
        members = np.concatenate([key + self.lo, key + self.hi])
        if np.unique(members).size != members.size:
            raise AssertionError("pairs within a step are not disjoint")
        if np.any(tau[self.lo, self.step] != self.tau_common) or \
           np.any(tau[self.hi, self.step] != self.tau_common):
            raise AssertionError("paired systems disagree on tau")
        expect_fresh = (self.tau_common == 0) & (self.step != 0)
        if np.any(expect_fresh != self.fresh.astype(bool)):
            raise AssertionError("fresh flags wrong")
        if self.n_pairs and int(self.step.max()) >= self.step_star:
            raise AssertionError("events extend past step_star")
        if np.any(tau[:, -1] != self.terminal_tau):
            raise AssertionError("terminal tau profile mismatch")
        if self.kind == "improved":
            if np.any(self.terminal_tau != improved_terminal_profile(self.m)):
                raise AssertionError("improved terminal profile mismatch")


def improved_terminal_profile(m: int) -> np.ndarray:
    """Closed-form terminal tau of the improved network (0-based systems)."""
    i = np.arange(2 * m)
    return np.where(i < m, i - m, i - m + 1).astype(np.int64)


def _canonical_order(step, lo, hi, tau):
    order = np.lexsort((lo, step))
    return step[order], lo[order], hi[order], tau[order]


def build_improved_schedule(m: int) -> Schedule:
    step_star, terminal, es, el, eh, et = kernels.improved_schedule_events(m, True)
    es, el, eh, et = _canonical_order(es, el, eh, et)
    fresh = ((et == 0) & (es != 0)).astype(np.uint8)
    sched = Schedule("improved", int(m), 2 * int(m), int(step_star),
                     es, el, eh, et, fresh, terminal.astype(np.int64))
    if np.any(sched.terminal_tau != improved_terminal_profile(m)):
        raise AssertionError("scheduler produced a wrong terminal profile")
    return sched


def improved_schedule_stats(m: int) -> tuple[int, np.ndarray]:
    """(step_star, terminal_tau) without materialising the event stream."""
    step_star, terminal, *_ = kernels.improved_schedule_events(m, False)
    return int(step_star), terminal.astype(np.int64)


def build_tournament_schedule(n: int) -> Schedule:
    """2^n systems; stage s pairs the surviving forward branches at tau = s,
    the higher index of each pair advancing.  No fresh replacements."""
    if n < 1:
        raise ValueError("n must be >= 1")
    n_systems = 2 ** n
    survivors = list(range(n_systems))
    es, el, eh, et = [], [], [], []
    tau = np.zeros(n_systems, dtype=np.int64)
    for stage in range(n):
        nxt = []
        for q in range(0, len(survivors), 2):
            a, b = survivors[q], survivors[q + 1]
            es.append(stage)
            el.append(a)
            eh.append(b)
            et.append(stage)
            tau[a] -= 1
            tau[b] += 1
            nxt.append(b)
        survivors = nxt
    arrays = [np.asarray(x, dtype=np.int32) for x in (es, el, eh, et)]
    fresh = np.zeros(len(es), dtype=np.uint8)
    return Schedule("tournament", int(n), n_systems, n,
                    arrays[0], arrays[1], arrays[2], arrays[3], fresh, tau)


@dataclass(frozen=True)
class CoefficientMatrix:
    """Deviation weights K[j, k], one row per system, columns k = 1..2m+1
    indexing flow times k' = k - m - 1 in units of the protocol step."""

    m: int
    k: np.ndarray

    @property
    def n_systems(self) -> int:
        return int(self.k.shape[0])

    def column_times(self) -> np.ndarray:
        return np.arange(-self.m, self.m + 1)

    def row(self, j: int) -> np.ndarray:
        """Row of 1-based system j."""
        return self.k[j - 1]

    def to_csv(self) -> str:
        lines = ["j," + ",".join(f"k{c + 1}" for c in range(self.k.shape[1]))]
        for j in range(self.n_systems):
            lines.append(str(j + 1) + "," + ",".join(repr(float(v)) for v in self.k[j]))
        return "\n".join(lines) + "\n"


def propagate_coefficients(sched: Schedule) -> CoefficientMatrix:
    k = kernels.accumulate_rows(sched.n_systems, sched.m,
                                sched.lo.astype(np.int32), sched.hi.astype(np.int32),
                                sched.tau_common.astype(np.int32),
                                sched.fresh.astype(np.uint8))
    return CoefficientMatrix(sched.m, k)


def rescale_row(base: CoefficientMatrix, m: int, j: int | None = None) -> np.ndarray:
    """Generate row j of K^(2m) from a base matrix via the scaling law.

    K^(2m)[j, k'] ~ L * K^(2m0)[j/L scaled row, k'/L] with L = m/m0, linearly
    interpolated in the deviation-time coordinate k' (zero outside the base
    range).  Defaults to the terminal row j = 2m, which maps onto the base
    terminal row for every L.
    """
    m0 = base.m
    lam = m / m0
    if j is None:
        base_row = base.k[-1]
    else:
        pos = (j * m0) / m
        idx = int(round(pos))
        if not 1 <= idx <= base.n_systems:
            raise ValueError("row index out of range after rescaling")
        base_row = base.k[idx - 1]
    kp = np.arange(-m, m + 1, dtype=float)
    return lam * np.interp(kp / lam, np.arange(-m0, m0 + 1, dtype=float),
                           base_row, left=0.0, right=0.0)


@dataclass(frozen=True)
class ScalingReport:
    """Relative deviations between K^(2m) and the rescaled K^(2*lam*m)."""

    m_small: int
    m_large: int
    lam: int
    cuts: list            # per-cut dicts: axis, position, median, max, count
    global_median: float
    global_max: float
    n_compared: int

    def to_json(self) -> dict:
        return {
            "m_small": self.m_small, "m_large": self.m_large, "lambda": self.lam,
            "global_median": self.global_median, "global_max": self.global_max,
            "n_compared": self.n_compared, "cuts": self.cuts,
        }


def _scaling_deviations(k_small: CoefficientMatrix, k_large: CoefficientMatrix,
                        lam: int, rows: np.ndarray, floor_frac: float = 1e-3):
    """Per-entry relative deviations for the selected 1-based small rows.

    Columns are matched in deviation-time coordinates (k' -> lam*k'), the
    alignment that anchors both matrices at k' = 0.
    """
    ms, ml = k_small.m, k_large.m
    devs = []
    for j in rows:
        small_row = k_small.k[j - 1]
        big_row = k_large.k[lam * j - 1]
        floor = floor_frac * small_row.max()
        for kp in range(-ms, ms + 1):
            big_kp = lam * kp
            if abs(big_kp) > ml:
                continue
            a = small_row[kp + ms]
            b = big_row[big_kp + ml] / lam
            if max(a, b) <= floor:
                continue
            devs.append(abs(a - b) / max(abs(a), abs(b)))
    return np.asarray(devs)


def check_scaling_law(k_small: CoefficientMatrix, k_large: CoefficientMatrix,
                      lam: int) -> ScalingReport:
    """Compare K^(2m) with lam^{-1} K^(2*lam*m) on the eight standard cuts
    (four rows and four columns at quarter positions) plus globally."""
    if k_large.m != lam * k_small.m:
        raise ValueError("need k_large.m == lam * k_small.m")
    ms, ml = k_small.m, k_large.m
    quarter_rows = [ms // 2, ms, 3 * ms // 2, 2 * ms]
    cuts = []
    for j in quarter_rows:
        d = _scaling_deviations(k_small, k_large, lam, np.array([j]))
        cuts.append({"axis": "row", "position": j,
                     "median": float(np.median(d)) if d.size else 0.0,
                     "max": float(d.max()) if d.size else 0.0,
                     "count": int(d.size)})
    # column cuts at quarter positions of the deviation-time axis
    all_rows = np.arange(1, 2 * ms + 1)
    for kp in (-ms // 2, 0, ms // 2, ms - 1):
        devs = []
        for j in all_rows:
            a = k_small.k[j - 1][kp + ms]
            floor = 1e-3 * k_small.k[j - 1].max()
            big_kp = lam * kp
            if abs(big_kp) > ml:
                continue
            b = k_large.k[lam * j - 1][big_kp + ml] / lam
            if max(a, b) <= floor:
                continue
            devs.append(abs(a - b) / max(abs(a), abs(b)))
        d = np.asarray(devs)
        cuts.append({"axis": "column", "position": kp,
                     "median": float(np.median(d)) if d.size else 0.0,
                     "max": float(d.max()) if d.size else 0.0,
                     "count": int(d.size)})
    d_all = _scaling_deviations(k_small, k_large, lam, all_rows)
    return ScalingReport(ms, ml, lam, cuts,
                         float(np.median(d_all)) if d_all.size else 0.0,
                         float(d_all.max()) if d_all.size else 0.0, int(d_all.size))


@dataclass(frozen=True)
class XiResult:
    dim: int
    alpha: int
    m_alpha: int
    xi: float


def xi_result(spec: Spectrum, phi0: PureState, dt: float, alpha: int,
              k_base: CoefficientMatrix) -> XiResult:
    """One diagnostic point: the minimum step count for the target population
    and the accumulated-deviation expectation there, coefficients rescaled
    from the base matrix.  m_alpha = 0 (target already met) gives xi = 0."""
    m = m_alpha(spec, phi0, dt, alpha)
    if m == 0:
        return XiResult(spec.dim, alpha, 0, 0.0)
    row = rescale_row(k_base, m)
    return XiResult(spec.dim, alpha, m, xi_statistic(spec, phi0, m, dt, row))


def xi_statistic(spec: Spectrum, phi0: PureState, m: int, dt: float,
                 k_row: np.ndarray) -> float:
    """Expectation of the accumulated deviation operator in the target state.

    xi = <phi_T| dt^2 sum_k K[2m,k] D[phi_{k'dt}] |phi_T> with T = m*dt; each
    deviation term contracts against two vectors, so nothing dim x dim is
    materialised.
    """
    _check_dims(phi0, spec)
    if dt <= 0:
        raise ValueError("dt must be positive")
    k_row = np.asarray(k_row, dtype=float)
    if k_row.shape != (2 * m + 1,):
        raise ValueError("coefficient row must have length 2m+1")
    target = flow_exact(phi0, spec, m * dt)
    total = 0.0
    for col, weight in enumerate(k_row):
        if weight == 0.0:
            continue
        kp = col - m
        dev = deviation_term(spec, flow_exact(phi0, spec, kp * dt))
        total += float(weight) * dev.expectation(target)
    return float(dt * dt * total)


def m_alpha(spec: Spectrum, phi0: PureState, dt: float, alpha: int) -> int:
    """Minimum step count m with ground population >= (1/2)(3/log2 dim)^alpha.

    Uses the ground-subspace population (equal to J times the lowest-level
    population for uniform starts), the quantity the degenerate-ground model
    plots; at dim 8 the target is 1/2 for every alpha.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if spec.dim < 8:
        raise ValueError("target schedule is defined for dim >= 8")
    target = 0.5 * (np.log2(8) / np.log2(spec.dim)) ** alpha
    return find_steps_for_p1(phi0, spec, target, dt, ground_subspace=True)


def predict_reduced_state(sched: Schedule, j: int, kmat: CoefficientMatrix,
                          spec: Spectrum, phi0: PureState, dt: float) -> DensityOperator:
    """Second-order prediction for the terminal state of 1-based system j:
    the flow projector at tau_j(step*) dt minus the K-weighted deviations."""
    _check_dims(phi0, spec)
    if spec.dim > PREDICT_DIM_CAP:
        raise ValueError(f"dense prediction capped at dim {PREDICT_DIM_CAP}")
    tau_term = int(sched.terminal_tau[j - 1])
    target = flow_exact(phi0, spec, tau_term * dt)
    mat = target.projector().astype(complex)
    row = kmat.k[j - 1]
    m = kmat.m
    for col, weight in enumerate(row):
        if weight == 0.0:
            continue
        kp = col - m
        dev = deviation_term(spec, flow_exact(phi0, spec, kp * dt))
        mat -= dt * dt * weight * dev.matrix
    return DensityOperator(mat)


# --- exact joint-space oracle -------------------------------------------------

def _embed_pair_op(u2: np.ndarray, p: int, q: int, n: int, dim: int) -> np.ndarray:
    """Dense operator applying u2 to factors (p, q) of an n-factor space,
    with u2's first slot at p and second at q."""
    joint = dim ** n
    sp, sq = dim ** (n - 1 - p), dim ** (n - 1 - q)
    idx = np.arange(joint)
    gp, gq = (idx // sp) % dim, (idx // sq) % dim
    base = np.unique(idx - gp * sp - gq * sq)
    out = np.zeros((joint, joint), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            rows = base + a * sp + b * sq
            for c in range(dim):
                for e in range(dim):
                    out[np.ix_(rows, base + c * sp + e * sq)] = \
                        u2[a * dim + b, c * dim + e] * np.eye(base.size)
    return out


def _trace_out_pair(rho: np.ndarray, p: int, q: int, n: int, dim: int) -> np.ndarray:
    joint = dim ** n
    sp, sq = dim ** (n - 1 - p), dim ** (n - 1 - q)
    idx = np.arange(joint)
    gp, gq = (idx // sp) % dim, (idx // sq) % dim
    base = np.unique(idx - gp * sp - gq * sq)
    rest = np.zeros((base.size, base.size), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            rows = base + a * sp + b * sq
            rest += rho[np.ix_(rows, rows)]
    return rest, base, sp, sq


def _fresh_pair(rho: np.ndarray, phi0: np.ndarray, p: int, q: int, n: int,
                dim: int) -> np.ndarray:
    """Trace out factors (p, q), dropping every correlation with them, and
    tensor in fresh copies of phi0 at the same slots."""
    rest, base, sp, sq = _trace_out_pair(rho, p, q, n, dim)
    proj = np.outer(phi0, phi0.conj())
    out = np.zeros_like(rho)
    for a in range(dim):
        for b in range(dim):
            rows = base + a * sp + b * sq
            for c in range(dim):
                for e in range(dim):
                    out[np.ix_(rows, base + c * sp + e * sq)] = \
                        proj[a, c] * proj[b, e] * rest
    return out


def _reduce_single(rho: np.ndarray, keep: int, n: int, dim: int) -> np.ndarray:
    r = rho.reshape([dim] * (2 * n))
    for f in range(n):
        if f == keep:
            continue
        ax = 0 if f < keep else 1
        r = np.trace(r, axis1=ax, axis2=r.ndim // 2 + ax)
    return r


def simulate_network_exact(sched: Schedule, spec: Spectrum, phi0: PureState,
                           dt: float, energy_tol: float = 1e-10,
                           return_energy_trace: bool = False):
    """Propagate the full joint density matrix through a schedule.

    Correlations between systems are kept exactly; a fresh replacement traces
    the pair out (discarding its correlations) and tensors in new copies of
    the initial state.  Total energy is asserted invariant across every
    protocol application (it only jumps at fresh replacements).  Toy scale
    only: dim^n_systems is capped at 1024.  With return_energy_trace the
    per-event totals and the replaced members' energies come back as well.
    """
    _check_dims(phi0, spec)
    dim, n = spec.dim, sched.n_systems
    if dim ** n > EXACT_ORACLE_JOINT_CAP:
        raise ValueError(f"joint dimension {dim ** n} exceeds cap {EXACT_ORACLE_JOINT_CAP}")
    amp = phi0.amplitudes
    psi = amp
    for _ in range(n - 1):
        psi = np.kron(psi, amp)
    rho = np.outer(psi, psi.conj())
    # Eq.-(5) slot order is (cooled, heated) = (hi, lo)
    u2 = protocol_unitary(spec, dt)
    h_single = spec.eigenvalues

    def member_energy(r, f):
        return float(np.real(np.diag(_reduce_single(r, f, n, dim)) @ h_single))

    def total_energy(r):
        return sum(member_energy(r, f) for f in range(n))

    trace = []
    for p in range(sched.n_pairs):
        lo, hi = int(sched.lo[p]), int(sched.hi[p])
        record = {"step": int(sched.step[p]), "pair": (lo, hi),
                  "fresh": bool(sched.fresh[p]), "total_before": total_energy(rho)}
        if sched.fresh[p]:
            record["replaced_energies"] = (member_energy(rho, lo), member_energy(rho, hi))
            rho = _fresh_pair(rho, amp, lo, hi, n, dim)
        e_before = total_energy(rho)
        record["total_after_fresh"] = e_before
        u_full = _embed_pair_op(u2, hi, lo, n, dim)
        rho = u_full @ rho @ u_full.conj().T
        record["total_after"] = total_energy(rho)
        if abs(record["total_after"] - e_before) > energy_tol:
            raise AssertionError("pair application failed to conserve total energy")
        trace.append(record)
    reduced = [DensityOperator(_reduce_single(rho, f, n, dim)) for f in range(n)]
    if return_energy_trace:
        return reduced, trace
    return reduced


# --- serialization -----------------------------------------------------------

def schedule_to_json(sched: Schedule, include_tau_matrix: bool = True) -> dict:
    obj = {
        "kind": sched.kind,
        "m": sched.m,
        "n_systems": sched.n_systems,
        "step_star": sched.step_star,
        "pairs": [
            {"step": int(s), "pair": [int(a), int(b)], "tau": int(t), "fresh": bool(f)}
            for s, a, b, t, f in zip(sched.step, sched.lo, sched.hi,
                                     sched.tau_common, sched.fresh)
        ],
        "terminal_tau": [int(x) for x in sched.terminal_tau],
    }
    if include_tau_matrix:
        obj["tau"] = sched.tau_matrix().tolist()
    return obj


def schedule_from_json(obj: dict) -> Schedule:
    pairs = obj["pairs"]
    arr = lambda key, dtype: np.asarray([p[key] for p in pairs], dtype=dtype)
    lo = np.asarray([p["pair"][0] for p in pairs], dtype=np.int32)
    hi = np.asarray([p["pair"][1] for p in pairs], dtype=np.int32)
    return Schedule(obj["kind"], int(obj["m"]), int(obj["n_systems"]),
                    int(obj["step_star"]), arr("step", np.int32), lo, hi,
                    arr("tau", np.int32), arr("fresh", np.uint8),
                    np.asarray(obj["terminal_tau"], dtype=np.int64))


def coefficients_to_json(kmat: CoefficientMatrix) -> dict:
    return {"m": kmat.m, "k": kmat.k.tolist()}


def coefficients_from_json(obj: dict) -> CoefficientMatrix:
    return CoefficientMatrix(int(obj["m"]), np.asarray(obj["k"], dtype=float))
