"""The two-system energy-transfer protocol.

Two copies of the same state are phase-evolved in opposite time directions
(forward e^{-iHt/2}, backward e^{+iHt/2}) and then mixed by the swap rotation
exp(+i S pi/4).  The interference between the two branches transfers energy
one way: the reduced state on side a is cooled by half the slope of the
survival probability, side b heated by the same amount, so the pair total is
conserved exactly.

Closed forms here are cross-checked against :func:`protocol_oracle`, which
builds the dense two-system unitary with no shared algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import Spectrum, spectral_stats
from .quantum import (
    DensityOperator,
    LowRankDensity,
    PureState,
    _check_dims,
    energy_moments,
    evolve_phase,
    partial_trace,
    survival,
)

ORACLE_DIM_CAP = 64


@dataclass(frozen=True)
class ProtocolOutput:
    """Reduced states and energies produced by one protocol application."""

    rho_a: LowRankDensity | DensityOperator
    rho_b: LowRankDensity | DensityOperator
    e_a: float
    e_b: float
    e0: float
    dt: float


@dataclass(frozen=True)
class DeviationTerm:
    """Second-order deviation D[phi] = {Gamma, P} - 2<Gamma> P with
    Gamma = (H - <H>)^2 / 4 evaluated at a reference state.

    Traceless and Hermitian; the unit of error the network accumulates."""

    gamma: np.ndarray        # diagonal of Gamma in the eigenbasis
    gamma_mean: float
    state: PureState

    @property
    def matrix(self) -> np.ndarray:
        p = self.state.projector()
        gp = self.gamma[:, None] * p + p * self.gamma[None, :]
        return gp - 2.0 * self.gamma_mean * p

    def expectation(self, psi: PureState) -> float:
        """<psi| D |psi> via two O(dim) contractions."""
        ov = np.vdot(self.state.amplitudes, psi.amplitudes)
        gv = np.vdot(psi.amplitudes, self.gamma * self.state.amplitudes)
        return float(2.0 * np.real(gv * ov) - 2.0 * self.gamma_mean * abs(ov) ** 2)


def deviation_term(spec: Spectrum, phi: PureState) -> DeviationTerm:
    _check_dims(phi, spec)
    e, _ = energy_moments(phi, spec)
    gamma = 0.25 * (spec.eigenvalues - e) ** 2
    mean = float(np.abs(phi.amplitudes) ** 2 @ gamma)
    return DeviationTerm(gamma, mean, phi)


def apply_protocol(phi0: PureState, spec: Spectrum, dt: float) -> ProtocolOutput:
    """Exact reduced states and transferred energies, in rank-2 form.

    With F = e^{-iH dt/2} phi0, B = e^{+iH dt/2} phi0 and A = <B|F>:

        rho_a = (|F><F| + |B><B|)/2 + (i/2) A |B><F| - (i/2) A* |F><B|

    and rho_b with the interference signs flipped.  Energies come from the
    analytic slope of the survival probability, E_{a,b} = E0 +- P0'(dt)/2,
    so conservation holds to round-off.  Negative dt swaps the two roles.
    """
    _check_dims(phi0, spec)
    fwd = evolve_phase(phi0, spec, dt / 2.0, sign=+1)
    bwd = evolve_phase(phi0, spec, dt / 2.0, sign=-1)
    amp = bwd.overlap(fwd)
    half_i_amp = 0.5j * amp
    # conj(i A / 2) = -i conj(A) / 2 is exactly the |F><B| coefficient
    coeff_a = np.array([[0.5, np.conj(half_i_amp)], [half_i_amp, 0.5]])
    coeff_b = np.array([[0.5, -np.conj(half_i_amp)], [-half_i_amp, 0.5]])
    rho_a = LowRankDensity(basis=(fwd, bwd), coeff=coeff_a)
    rho_b = LowRankDensity(basis=(fwd, bwd), coeff=coeff_b)
    e0, _ = energy_moments(phi0, spec)
    _, dp0 = survival(phi0, spec, dt)
    return ProtocolOutput(rho_a, rho_b, e0 + 0.5 * dp0, e0 - 0.5 * dp0, e0, dt)


def swap_matrix(dim: int) -> np.ndarray:
    """Basis swap on the two-factor space: S |j,k> = |k,j>."""
    s = np.zeros((dim * dim, dim * dim))
    for j in range(dim):
        for k in range(dim):
            s[k * dim + j, j * dim + k] = 1.0
    return s


def protocol_unitary(spec: Spectrum, dt: float) -> np.ndarray:
    """Dense two-system unitary exp(+i S pi/4) (e^{-iH dt/2} (x) e^{+iH dt/2}).

    The swap rotation uses S^2 = I: exp(+i S pi/4) = (I + iS)/sqrt(2).
    """
    dim = spec.dim
    fwd = np.exp(-0.5j * spec.eigenvalues * dt)
    phase = np.kron(fwd, fwd.conj())
    s = swap_matrix(dim)
    rot = (np.eye(dim * dim) + 1j * s) / np.sqrt(2.0)
    return rot * phase[None, :]


def protocol_oracle(phi0: PureState, spec: Spectrum, dt: float) -> ProtocolOutput:
    """Brute-force the protocol on the dense joint space.

    Independent of :func:`apply_protocol`: builds the explicit unitary of the
    two-system circuit, forms the joint density matrix and partial-traces both
    sides.  Capped at dim <= 64 (4096-dimensional joint space).
    """
    _check_dims(phi0, spec)
    if spec.dim > ORACLE_DIM_CAP:
        raise ValueError(f"dense oracle capped at dim {ORACLE_DIM_CAP}")
    u = protocol_unitary(spec, dt)
    joint_in = np.kron(phi0.amplitudes, phi0.amplitudes)
    joint_out = u @ joint_in
    rho_joint = DensityOperator(np.outer(joint_out, joint_out.conj()))
    rho_a = partial_trace(rho_joint, "a")
    rho_b = partial_trace(rho_joint, "b")
    e0, _ = energy_moments(phi0, spec)
    return ProtocolOutput(rho_a, rho_b, rho_a.energy(spec), rho_b.energy(spec), e0, dt)


def expand_short_time(phi0: PureState, spec: Spectrum, dt: float) -> tuple[DensityOperator, DensityOperator]:
    """Second-order predictions for the reduced states.

    rho_{a,b} ~ |phi_{+-dt}><phi_{+-dt}| - dt^2 D[phi0] where phi_{+-dt} is
    the exact cooling-flow state and D the traceless deviation term, accurate
    to O(dt^3).  The dt^2 operator here is the trace-preserving variant
    ({H^2,P} - 2 HPH in expanded form), the one that matches the dense
    oracle; see the regression check in :mod:`swapcool.verify`.
    """
    from .flow import flow_exact

    _check_dims(phi0, spec)
    span = spectral_stats(spec).span
    if abs(dt) * span > 0.5:
        raise ValueError("dt outside the short-time expansion regime")
    dev = deviation_term(spec, phi0).matrix
    preds = []
    for sign in (+1, -1):
        target = flow_exact(phi0, spec, sign * dt)
        preds.append(DensityOperator(target.projector() - dt * dt * dev))
    return preds[0], preds[1]


def transfer_first_order(phi0: PureState, spec: Spectrum, dt: float) -> tuple[float, float]:
    """Leading-order transferred energies E0 -+ var*dt (remainder O(dt^3))."""
    e0, var = energy_moments(phi0, spec)
    return e0 - var * dt, e0 + var * dt


def protocol_output_to_json(out: ProtocolOutput) -> dict:
    from .quantum import _interleave, state_to_json

    if not isinstance(out.rho_a, LowRankDensity):
        raise TypeError("JSON form is defined for rank-2 protocol output")
    return {
        "E0": out.e0,
        "Ea": out.e_a,
        "Eb": out.e_b,
        "dt": out.dt,
        "basis": [state_to_json(v) for v in out.rho_a.basis],
        "coeff_a": _interleave(out.rho_a.coeff),
        "coeff_b": _interleave(out.rho_b.coeff),
    }
