"""Norm-preserving cooling flow and its logistic bounds.

The flow d|phi>/dt = -(H - <H>)|phi>/2 is the continuous dynamics the
protocol emulates step by step.  Its closed-form solution is normalised
imaginary-time evolution, so the exact path is one vector exponential; the
RK4 integrator exists purely as an independent cross-check.

For a uniform initial state the ground-level population P1(t) is sandwiched
between two logistic curves whose rates are the spectral gap and span.  Note
the orientation: the gap-rate curve is the *lower* bound (the flow converges
at least as fast as the slowest logistic), the span-rate curve the upper.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import DEGENERACY_TOL, Spectrum
from .quantum import PureState, _check_dims, energy_moments

RK4_STEP_CAP = 0.1   # max h * span accepted by the integrator


def flow_exact(phi0: PureState, spec: Spectrum, t: float) -> PureState:
    """Closed-form flow state: e^{-Ht/2} phi0, renormalised.

    Exponents are shifted by their maximum before exponentiation so the
    amplitudes stay representable for any t of either sign.
    """
    _check_dims(phi0, spec)
    exponents = -0.5 * spec.eigenvalues * t
    weights = np.exp(exponents - exponents.max()) * phi0.amplitudes
    norm = np.linalg.norm(weights)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("flow underflowed: no representable amplitude left")
    return PureState(weights / norm)


def _flow_rhs(amp: np.ndarray, ev: np.ndarray) -> np.ndarray:
    e = float(np.real(np.vdot(amp, ev * amp)))
    return -0.5 * (ev - e) * amp


def flow_rk4(phi0: PureState, spec: Spectrum, t: float, h: float) -> PureState:
    """Classical RK4 on the flow ODE, renormalising after every step."""
    _check_dims(phi0, spec)
    if h <= 0:
        raise ValueError("step size must be positive")
    ev = spec.eigenvalues
    span = float(ev[-1] - ev[0])
    if h * span > RK4_STEP_CAP:
        raise ValueError(f"step too large: h*span = {h * span} > {RK4_STEP_CAP}")
    amp = phi0.amplitudes.copy()
    remaining = abs(t)
    direction = 1.0 if t >= 0 else -1.0
    while remaining > 1e-15:
        step = min(h, remaining) * direction
        k1 = _flow_rhs(amp, ev)
        k2 = _flow_rhs(amp + 0.5 * step * k1, ev)
        k3 = _flow_rhs(amp + 0.5 * step * k2, ev)
        k4 = _flow_rhs(amp + step * k3, ev)
        amp = amp + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        amp = amp / np.linalg.norm(amp)
        remaining -= abs(step)
    return PureState(amp)


def ground_probability(state: PureState, spec: Spectrum,
                       degeneracy_tol: float = DEGENERACY_TOL) -> tuple[float, float]:
    """(p1, p_ground): population of the lowest level and of the whole
    ground eigenspace (they differ only for degenerate ground states)."""
    _check_dims(state, spec)
    probs = np.abs(state.amplitudes) ** 2
    ev = spec.eigenvalues
    ground_mask = ev <= ev[0] + degeneracy_tol
    return float(probs[0]), float(probs[ground_mask].sum())


def logistic_curve(dim: int, rate: float, t, ground_degeneracy: int = 1):
    """1 / ((dim/J - 1) e^{-rate t} + 1): logistic growth from J/dim toward 1.

    J = 1 gives the standard curve starting at 1/dim."""
    ratio = dim / ground_degeneracy - 1.0
    return 1.0 / (ratio * np.exp(-rate * np.asarray(t, dtype=float)) + 1.0)


def logistic_bounds(dim: int, gap: float, span: float, t,
                    ground_degeneracy: int = 1) -> tuple:
    """Empirically oriented sandwich for the ground population from a uniform
    start: lower uses the gap rate, upper the span rate, both starting at
    J/dim.  With a J-fold degenerate ground space the bracketed quantity is
    the ground-subspace population (J times the lowest-level one)."""
    if not 0 < gap <= span:
        raise ValueError("need 0 < gap <= span")
    if np.any(np.asarray(t) < 0):
        raise ValueError("bounds are defined for t >= 0")
    return (logistic_curve(dim, gap, t, ground_degeneracy),
            logistic_curve(dim, span, t, ground_degeneracy))


def t_c_bounds(dim: int, gap: float, span: float, c: float,
               ground_degeneracy: int = 1) -> tuple[float, float]:
    """Window for the time at which the ground population reaches c:
    [ln(...)/span, ln(...)/gap]."""
    if not 0 < gap <= span:
        raise ValueError("need 0 < gap <= span")
    start = ground_degeneracy / dim
    if not start <= c < 1.0:
        raise ValueError(f"target must lie in [{start}, 1)")
    log_term = float(np.log((dim / ground_degeneracy - 1) / (1.0 / c - 1.0)))
    return log_term / span, log_term / gap


@dataclass(frozen=True)
class LogisticBounds:
    """The two logistic curves bracketing the ground population, plus the
    crossing-time window for one target probability."""

    dim: int
    gap: float
    span: float
    target: float
    ground_degeneracy: int = 1

    def lower(self, t):
        return logistic_curve(self.dim, self.gap, t, self.ground_degeneracy)

    def upper(self, t):
        return logistic_curve(self.dim, self.span, t, self.ground_degeneracy)

    @property
    def t_c_lower(self) -> float:
        return t_c_bounds(self.dim, self.gap, self.span, self.target,
                          self.ground_degeneracy)[0]

    @property
    def t_c_upper(self) -> float:
        return t_c_bounds(self.dim, self.gap, self.span, self.target,
                          self.ground_degeneracy)[1]


def logistic_bound_set(dim: int, gap: float, span: float, c: float,
                       ground_degeneracy: int = 1) -> LogisticBounds:
    t_c_bounds(dim, gap, span, c, ground_degeneracy)   # validate inputs now
    return LogisticBounds(dim, gap, span, c, ground_degeneracy)


def find_time_for_p1(phi0: PureState, spec: Spectrum, target: float, dt_grid: float,
                     ground_subspace: bool = False) -> float:
    """Smallest grid time m*dt_grid with P1 >= target (bisection on m).

    P1 is monotone along the flow for the spectra used here, so bisection
    returns the same m as a linear scan.
    """
    return dt_grid * find_steps_for_p1(phi0, spec, target, dt_grid, ground_subspace)


def find_steps_for_p1(phi0: PureState, spec: Spectrum, target: float, dt_grid: float,
                      ground_subspace: bool = False) -> int:
    _check_dims(phi0, spec)
    if dt_grid <= 0:
        raise ValueError("dt_grid must be positive")

    def prob(m: int) -> float:
        p1, pg = ground_probability(flow_exact(phi0, spec, m * dt_grid), spec)
        return pg if ground_subspace else p1

    if prob(0) >= target:
        return 0
    # asymptotic population: the flow projects onto the ground eigenspace
    probs0 = np.abs(phi0.amplitudes) ** 2
    ground_mask = spec.eigenvalues <= spec.eigenvalues[0] + DEGENERACY_TOL
    ground_weight = float(probs0[ground_mask].sum())
    if ground_weight == 0.0:
        raise ValueError("target unreachable: no ground-subspace overlap")
    limit = 1.0 if ground_subspace else float(probs0[0]) / ground_weight
    if target >= limit:
        raise ValueError(f"target unreachable: asymptotic population is {limit}")
    hi = 1
    while prob(hi) < target:
        hi *= 2
        if hi > 10 ** 9:
            raise ValueError("target unreachable from this initial state")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if prob(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class FlowResult:
    """Sampled flow trajectory with the logistic sandwich attached."""

    times: np.ndarray
    p1: np.ndarray
    p_ground: np.ndarray
    energy: np.ndarray
    lower_bound: np.ndarray
    upper_bound: np.ndarray
    states: list = field(default_factory=list)

    def to_csv(self) -> str:
        header = "t,p1,p_ground,energy,lower_bound,upper_bound"
        rows = [header]
        for i in range(len(self.times)):
            rows.append(",".join(repr(float(v)) for v in (
                self.times[i], self.p1[i], self.p_ground[i], self.energy[i],
                self.lower_bound[i], self.upper_bound[i])))
        return "\n".join(rows) + "\n"


def flow_series(phi0: PureState, spec: Spectrum, times, keep_states: bool = False) -> FlowResult:
    from .hamiltonian import spectral_stats

    stats = spectral_stats(spec)
    times = np.asarray(times, dtype=float)
    p1 = np.empty(times.size)
    pg = np.empty(times.size)
    en = np.empty(times.size)
    states = []
    for i, t in enumerate(times):
        state = flow_exact(phi0, spec, t)
        p1[i], pg[i] = ground_probability(state, spec)
        en[i], _ = energy_moments(state, spec)
        if keep_states:
            states.append(state)
    lower, upper = logistic_bounds(spec.dim, stats.gap, stats.span, times,
                                   stats.ground_degeneracy)
    return FlowResult(times, p1, pg, en, np.asarray(lower), np.asarray(upper), states)
