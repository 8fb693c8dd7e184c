"""State vectors and density operators in the energy eigenbasis.

Pure phase evolution, energy moments, survival probability, partial traces
and eigendecomposition: the linear-algebra substrate for the protocol, flow
and network modules.  Everything here is a pure function over immutable
values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import Spectrum

NORM_TOL = 1e-10
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """Complex amplitude vector, unit norm, in the energy eigenbasis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size < 1:
            raise ValueError("amplitudes must be a nonempty vector")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} is not 1 within {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def projector(self) -> np.ndarray:
        a = self.amplitudes
        return np.outer(a, a.conj())

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian unit-trace matrix.

    Hermiticity and trace are validated on construction; positivity is the
    caller's concern (check :meth:`min_eigenvalue` where it matters, the
    eigensolve is too costly to run on every intermediate).
    """

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"trace {tr} is not 1 within {NORM_TOL}")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def energy(self, spec: Spectrum) -> float:
        if spec.dim != self.dim:
            raise ValueError("dimension mismatch")
        return float(np.real(np.diag(self.matrix) @ spec.eigenvalues))

    def to_dense(self) -> "DensityOperator":
        return self


@dataclass(frozen=True)
class LowRankDensity:
    """Density operator written as sum_pq coeff[p,q] |v_p><v_q| over <=2 states.

    The protocol's reduced states live in the span of the forward and backward
    evolved vectors; keeping them in this form makes the closed-form path
    O(dim) instead of O(dim^2).
    """

    basis: tuple
    coeff: np.ndarray

    def __post_init__(self):
        if not 1 <= len(self.basis) <= 2:
            raise ValueError("basis must hold 1 or 2 states")
        co = np.asarray(self.coeff, dtype=complex)
        r = len(self.basis)
        if co.shape != (r, r):
            raise ValueError("coefficient matrix shape must match basis size")
        if np.abs(co - co.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("coefficient matrix must be Hermitian")
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coeff", co)

    @property
    def dim(self) -> int:
        return self.basis[0].dim

    def trace(self) -> float:
        g = np.array([[v.overlap(u) for u in self.basis] for v in self.basis])
        # tr sum c_pq |v_p><v_q| = sum_pq c_pq <v_q|v_p>
        return float(np.real(np.sum(self.coeff * g.T)))

    def energy(self, spec: Spectrum) -> float:
        ev = spec.eigenvalues
        h = np.array([[np.vdot(v.amplitudes, ev * u.amplitudes) for u in self.basis]
                      for v in self.basis])
        return float(np.real(np.sum(self.coeff * h.T)))

    def to_dense(self) -> DensityOperator:
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        for p, vp in enumerate(self.basis):
            for q, vq in enumerate(self.basis):
                mat += self.coeff[p, q] * np.outer(vp.amplitudes, vq.amplitudes.conj())
        return DensityOperator(mat)


def _check_dims(state: PureState, spec: Spectrum) -> None:
    if state.dim != spec.dim:
        raise ValueError(f"state dim {state.dim} != spectrum dim {spec.dim}")


def uniform_state(dim: int) -> PureState:
    """Equal real amplitudes 1/sqrt(dim) on every level."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return PureState(np.full(dim, dim ** -0.5, dtype=complex))


def basis_state(dim: int, j: int) -> PureState:
    amp = np.zeros(dim, dtype=complex)
    amp[j] = 1.0
    return PureState(amp)


def evolve_phase(state: PureState, spec: Spectrum, t: float, sign: int = 1) -> PureState:
    """Apply exp(-i*sign*H*t) in the eigenbasis; exactly norm preserving."""
    _check_dims(state, spec)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    phases = np.exp(-1j * sign * spec.eigenvalues * t)
    return PureState(phases * state.amplitudes)


def energy_moments(state: PureState, spec: Spectrum) -> tuple[float, float]:
    """Energy expectation and variance of the state."""
    _check_dims(state, spec)
    probs = np.abs(state.amplitudes) ** 2
    ev = spec.eigenvalues
    e = float(probs @ ev)
    var = float(probs @ (ev * ev) - e * e)
    return e, max(var, 0.0)


def survival(state: PureState, spec: Spectrum, t: float) -> tuple[float, float]:
    """Survival probability P0(t) = |<phi|e^{-iHt}|phi>|^2 and its exact
    time derivative (analytic, not finite-differenced)."""
    _check_dims(state, spec)
    probs = np.abs(state.amplitudes) ** 2
    ev = spec.eigenvalues
    phases = np.exp(-1j * ev * t)
    amp = complex(probs @ phases)
    w = complex((probs * ev) @ phases)
    p0 = abs(amp) ** 2
    dp0 = 2.0 * np.real(np.conj(amp) * (-1j) * w)
    return float(p0), float(dp0)


def partial_trace(joint: DensityOperator, side: str) -> DensityOperator:
    """Reduce a two-factor density matrix; side "a" keeps the first factor."""
    d2 = joint.dim
    d = int(round(np.sqrt(d2)))
    if d * d != d2:
        raise ValueError("joint dimension is not a perfect square")
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    r = joint.matrix.reshape(d, d, d, d)
    if side == "a":
        red = np.trace(r, axis1=1, axis2=3)
    else:
        red = np.trace(r, axis1=0, axis2=2)
    return DensityOperator(red)


def eigendecompose(hermitian: np.ndarray, tol: float = 1e-10) -> tuple[Spectrum, np.ndarray]:
    """Sorted eigenvalues and the unitary whose columns are the eigenvectors.

    Amplitudes transform into the eigenbasis via U^dagger v.
    """
    mat = np.asarray(hermitian, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    if np.abs(mat - mat.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian")
    ev, u = np.linalg.eigh(mat)
    return Spectrum(ev, label="eigendecomposed"), u


# --- serialization -----------------------------------------------------------

def _interleave(values: np.ndarray) -> list[float]:
    flat = np.asarray(values, dtype=complex).ravel()
    out = np.empty(2 * flat.size)
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return [float(x) for x in out]


def _deinterleave(pairs: list[float]) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    return arr[0::2] + 1j * arr[1::2]


def state_to_json(state: PureState) -> dict:
    return {"dim": state.dim, "amplitudes": _interleave(state.amplitudes)}


def state_from_json(obj: dict) -> PureState:
    return PureState(_deinterleave(obj["amplitudes"]))


def density_to_json(rho: DensityOperator) -> dict:
    return {"dim": rho.dim, "matrix": _interleave(rho.matrix)}


def density_from_json(obj: dict) -> DensityOperator:
    d = int(obj["dim"])
    return DensityOperator(_deinterleave(obj["matrix"]).reshape(d, d))
