"""Truncated Fock-space and qubit-oscillator linear algebra.

States, density matrices, partial trace, fidelities, and diagonal phase
unitaries for a bosonic mode truncated at a finite Fock dimension,
optionally coupled to a two-level system (qubit).

Basis conventions
-----------------
* Fock indices ascend: ``n = 0 .. dim-1``.
* The qubit ground level ``g`` precedes the excited level ``e``; a joint
  amplitude is addressed as ``amplitudes[q, n]`` with ``q = 0`` for ``g``
  and ``q = 1`` for ``e``.
* Density matrices live on an explicit ordered sub-basis of Fock indices,
  so small matrices over e.g. ``{0, 4, 8}`` stay 3x3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "OscillatorState",
    "JointState",
    "DensityMatrix",
    "PhaseVector",
    "pure_fidelity",
    "mixed_fidelity",
    "phase_max_fidelity",
    "partial_trace_qubit",
]

#: Absolute elementwise tolerance for Hermiticity of density matrices.
HERMITICITY_TOL = 1e-12
#: Absolute tolerance for unit trace of physical density matrices.
TRACE_TOL = 1e-10


@dataclass(frozen=True)
class OscillatorState:
    """Pure bosonic state: complex amplitudes over Fock numbers ``0..dim-1``.

    ``amplitudes[n]`` is the probability amplitude of ``|n>``.  Normalized
    states have ``norm_sq() == 1``; unnormalized states are always passed
    around together with an explicit squared norm.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-D array")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def normalized(self) -> "OscillatorState":
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise ValueError("cannot normalize the zero state")
        return OscillatorState(self.amplitudes / np.sqrt(n2))

    def support(self, tol: float = 0.0) -> np.ndarray:
        """Fock indices with amplitude magnitude above ``tol``."""
        return np.nonzero(np.abs(self.amplitudes) > tol)[0]


@dataclass(frozen=True)
class JointState:
    """Pure qubit-oscillator state: ``amplitudes[q, n]`` with g before e."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[0] != 2 or amps.shape[1] == 0:
            raise ValueError("amplitudes must have shape (2, dim)")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[1]

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def flatten(self) -> np.ndarray:
        """Flat vector ordered as ``index = q * dim + n``."""
        return self.amplitudes.reshape(-1).copy()

    @staticmethod
    def from_flat(vec: np.ndarray) -> "JointState":
        vec = np.asarray(vec, dtype=np.complex128)
        if vec.ndim != 1 or vec.size % 2 != 0:
            raise ValueError("flat joint vector must have even length")
        return JointState(vec.reshape(2, -1))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian matrix over an explicit ordered sub-basis of Fock indices."""

    matrix: np.ndarray
    basis: tuple[int, ...]

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        basis = tuple(int(b) for b in self.basis)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        if mat.shape[0] != len(basis):
            raise ValueError("matrix size must match basis length")
        if len(set(basis)) != len(basis):
            raise ValueError("basis indices must be distinct")
        if any(b < 0 for b in basis):
            raise ValueError("basis indices must be non-negative")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "basis", basis)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def check_physical(self, trace_tol: float = TRACE_TOL) -> None:
        """Raise ``ValueError`` unless Hermitian, unit-trace, and PSD."""
        if self.hermiticity_defect() > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(self.trace() - 1.0) > trace_tol:
            raise ValueError("density matrix trace deviates from 1")
        evals = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2.0)
        if evals.min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")


@dataclass(frozen=True)
class PhaseVector:
    """One angle per sub-basis element; the first is pinned to 0 (gauge)."""

    angles: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self) -> None:
        ang = np.mod(np.asarray(self.angles, dtype=np.float64), 2.0 * np.pi)
        if ang.ndim != 1 or ang.size == 0:
            raise ValueError("angles must be a non-empty 1-D array")
        ang[0] = 0.0
        ang.setflags(write=False)
        object.__setattr__(self, "angles", ang)

    def unitary_diagonal(self) -> np.ndarray:
        return np.exp(1j * self.angles)


def pure_fidelity(a: OscillatorState, b: OscillatorState) -> float:
    """Squared overlap ``|<a|b>|**2`` of two normalized pure states."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    return float(np.abs(overlap) ** 2)


def _check_support(rho: DensityMatrix, t: OscillatorState) -> np.ndarray:
    """Return the target amplitudes restricted to rho's sub-basis.

    The target must have no weight outside the sub-basis.
    """
    basis = np.asarray(rho.basis)
    if basis.max(initial=-1) >= t.dim:
        raise ValueError("target state dimension does not cover rho's basis")
    mask = np.zeros(t.dim, dtype=bool)
    mask[basis] = True
    outside = np.abs(t.amplitudes[~mask])
    if outside.size and outside.max() > 1e-12:
        raise ValueError("target has support outside rho's sub-basis")
    return t.amplitudes[basis]


def mixed_fidelity(rho: DensityMatrix, t: OscillatorState) -> float:
    """Pure-target fidelity ``<t|rho|t>``."""
    tv = _check_support(rho, t)
    val = float(np.real(tv.conj() @ rho.matrix @ tv))
    if val < -1e-10 or val > 1.0 + 1e-10:
        raise ValueError(f"fidelity {val} outside [0, 1] beyond tolerance")
    return val


def _coordinate_ascent(
    rho: np.ndarray, t: np.ndarray, phases: np.ndarray, tol: float = 1e-14
) -> np.ndarray:
    """Maximize ``<t|U rho U^dag|t>`` over diagonal ``U = diag(e^{i phase})``.

    Cyclic coordinate ascent with the exact per-coordinate optimum: with all
    other phases held fixed the objective is ``const + 2 Re[e^{-i phi_j} w_j]``
    for a computable complex ``w_j``, maximized at ``phi_j = arg(w_j)``.
    Deterministic (fixed sweep order, fixed iteration cap).
    """
    n = t.size
    for _ in range(200):
        changed = 0.0
        for j in range(1, n):  # element 0 is the global-phase gauge
            u = np.exp(1j * phases)
            # Objective terms involving phi_j: 2 Re[e^{i phi_j} w_j] with
            # w_j = t_j * sum_{k != j} rho[j, k] e^{-i phi_k} t_k.
            s = (rho[j] * np.conj(u)) @ t - rho[j, j] * np.conj(u[j]) * t[j]
            w = t[j] * s
            new = -np.angle(w) if np.abs(w) > 0.0 else phases[j]
            changed = max(changed, abs(np.exp(1j * new) - np.exp(1j * phases[j])))
            phases[j] = new
        if changed < tol:
            break
    return phases


def phase_max_fidelity(
    rho: DensityMatrix, t: OscillatorState
) -> tuple[float, PhaseVector]:
    """Maximum of ``<t|U rho U^dag|t>`` over diagonal phase unitaries.

    The target must have real non-negative amplitudes.  Returns the optimal
    fidelity and an argmax :class:`PhaseVector`.  For rank-1 ``rho`` the
    optimum is analytic (align each phase against the eigenvector's phase);
    for general ``rho`` that alignment of the dominant eigenvector seeds an
    exact per-coordinate ascent.
    """
    if rho.hermiticity_defect() > HERMITICITY_TOL:
        raise ValueError("rho is not Hermitian within 1e-12")
    tv = _check_support(rho, t)
    if np.max(np.abs(np.imag(tv))) > 1e-12 or np.min(np.real(tv)) < -1e-12:
        raise ValueError("target amplitudes must be real and non-negative")
    tv = np.real(tv)
    mat = (rho.matrix + rho.matrix.conj().T) / 2.0
    evals, evecs = np.linalg.eigh(mat)
    lead = evecs[:, -1]
    # Analytic seed: rotate each component of the dominant eigenvector real.
    phases = np.mod(-np.angle(lead) + np.angle(lead[0]), 2.0 * np.pi)
    phases[0] = 0.0
    if evals[:-1].max(initial=0.0) > 1e-14:
        phases = _coordinate_ascent(mat, tv, phases)
        phases = np.mod(phases, 2.0 * np.pi)
        phases[0] = 0.0
    pv = PhaseVector(phases)
    # <t|U rho U^dag|t> with U = diag(e^{i phi}) equals v^dag rho v for
    # v = e^{-i phi} * t (t real).
    v = pv.unitary_diagonal().conj() * tv
    fid = float(np.real(v.conj() @ mat @ v))
    return fid, pv


def partial_trace_qubit(psi: JointState) -> DensityMatrix:
    """Trace out the qubit: ``rho[n, n'] = sum_q psi[q, n] psi[q, n']*``.

    The sub-basis is restricted to Fock indices carrying any amplitude.
    """
    amps = psi.amplitudes
    weight = np.sum(np.abs(amps) ** 2, axis=0)
    keep = np.nonzero(weight > 0.0)[0]
    if keep.size == 0:
        raise ValueError("zero joint state has no reduced density matrix")
    sub = amps[:, keep]
    mat = sub.conj().T @ sub
    mat = np.asarray(mat).conj()  # rho[n,n'] = sum_q psi(q,n) psi*(q,n')
    return DensityMatrix(mat, tuple(int(k) for k in keep))
