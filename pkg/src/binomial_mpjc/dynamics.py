"""Closed-form multiphoton Jaynes-Cummings (MPJC) evolution.

The interaction ``H = a^m sigma_+ + a^dag^m sigma_-`` (coupling scaled out,
time measured as ``tau = g t``) couples ``|g, n>`` with ``|e, n - m>`` at
the falling-product rate ``b(n, m) = sqrt(n! / (n-m)!)`` and ``|e, n>``
with ``|g, n + m>`` at the rising-product rate ``a(n, m) =
sqrt((n+m)! / n!)``.  For initial states of the form
``(cos(theta)|g> + sin(theta)|e>)`` tensored with a superposition of one,
two, or three Fock states the evolution stays inside a few two-level
ladders and is available in closed form; this module provides those
coefficients, the postselection/phase-correction steps, the reduced
density matrices of the deterministic (no-measurement) protocol, the
reduced-multiphoton-order two-step state, and an independent brute-force
matrix-exponential oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hilbert import DensityMatrix, JointState, OscillatorState

__all__ = [
    "MPJCConfig",
    "ClosedFormCoefficients",
    "rate_rising",
    "rate_falling",
    "closed_form_1fock",
    "closed_form_2fock",
    "closed_form_3fock",
    "assemble_joint",
    "postselect_excited",
    "postselect_ground",
    "phase_correct",
    "deterministic_rho_1fock",
    "deterministic_rho_2fock",
    "reduced_m_state",
    "build_hamiltonian",
    "oracle_evolve",
]


def rate_rising(n: int, m: int) -> float:
    """``sqrt((n+m)! / n!)`` computed as a product (no full factorials)."""
    p = 1.0
    for j in range(1, m + 1):
        p *= n + j
    return math.sqrt(p)


def rate_falling(n: int, m: int) -> float:
    """``sqrt(n! / (n-m)!)`` computed as a product (no full factorials)."""
    if n < m:
        raise ValueError(f"rate_falling requires n >= m, got n={n}, m={m}")
    p = 1.0
    for j in range(m):
        p *= n - j
    return math.sqrt(p)


@dataclass(frozen=True)
class MPJCConfig:
    """One point of the protocol parameter space.

    ``n1`` (optionally ``n2``, ``n3``) are the initially occupied Fock
    indices, ``m`` the multiphoton order, ``theta`` the qubit
    superposition angle, ``phi`` (or ``phi1``, ``phi2``) the oscillator
    superposition angles, and ``tau`` the dimensionless scaled time.
    """

    n1: int
    m: int
    theta: float
    tau: float
    n2: int | None = None
    n3: int | None = None
    phi: float | None = None
    phi1: float | None = None
    phi2: float | None = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be at least 1")
        supplied = [self.n1] + [n for n in (self.n2, self.n3) if n is not None]
        if len(set(supplied)) != len(supplied):
            raise ValueError("Fock indices must be pairwise distinct")
        for n in supplied:
            if n < self.m:
                raise ValueError(
                    f"every Fock index must be >= m; got n={n} < m={self.m}"
                )
        if self.n3 is not None and self.n2 is None:
            raise ValueError("n3 requires n2")
        if self.n2 is not None and self.n3 is None and self.phi is None:
            raise ValueError("two-Fock configs require phi")
        if self.n3 is not None and (self.phi1 is None or self.phi2 is None):
            raise ValueError("three-Fock configs require phi1 and phi2")

    @property
    def n_fock(self) -> int:
        return 1 + (self.n2 is not None) + (self.n3 is not None)

    def oracle_dim(self) -> int:
        """Truncation that safely contains all reachable Fock indices."""
        n_max = max(n for n in (self.n1, self.n2, self.n3) if n is not None)
        return n_max + 2 * self.m + 1


@dataclass(frozen=True)
class ClosedFormCoefficients:
    """Closed-form evolved-state coefficients for 1/2/3-Fock initial support.

    The x-block belongs to ``n1``, the y-block to ``n2``, the z-block to
    ``n3``.  In each block the elements are, in order: the ``|g, n>``
    survivor (1), the ``|e, n>`` survivor (2), the raised ``|g, n + m>``
    amplitude (3), and the lowered ``|e, n - m>`` amplitude (4).
    Elements 1 and 2 are real; 3 and 4 are purely imaginary.
    """

    cfg: MPJCConfig
    x: np.ndarray
    y: np.ndarray | None = None
    z: np.ndarray | None = None

    def blocks(self) -> list[tuple[int, np.ndarray]]:
        out = [(self.cfg.n1, self.x)]
        if self.y is not None:
            out.append((self.cfg.n2, self.y))
        if self.z is not None:
            out.append((self.cfg.n3, self.z))
        return out

    def norm_sq(self) -> float:
        total = 0.0
        for _, blk in self.blocks():
            total += float(np.sum(np.abs(blk) ** 2))
        return total


def _block(n: int, m: int, theta: float, tau: float, weight: float) -> np.ndarray:
    """The four ladder coefficients for one initially occupied Fock index."""
    b = rate_falling(n, m)
    a = rate_rising(n, m)
    c1 = weight * math.cos(theta) * math.cos(b * tau)
    c2 = weight * math.sin(theta) * math.cos(a * tau)
    c3 = -1j * weight * math.sin(theta) * math.sin(a * tau)
    c4 = -1j * weight * math.cos(theta) * math.sin(b * tau)
    return np.array([c1, c2, c3, c4], dtype=np.complex128)


def closed_form_1fock(cfg: MPJCConfig) -> ClosedFormCoefficients:
    """Evolved coefficients for the single-Fock initial state ``|n1>``."""
    if cfg.n_fock != 1:
        raise ValueError("closed_form_1fock requires a 1-Fock config")
    return ClosedFormCoefficients(cfg, x=_block(cfg.n1, cfg.m, cfg.theta, cfg.tau, 1.0))


def closed_form_2fock(cfg: MPJCConfig) -> ClosedFormCoefficients:
    """Evolved coefficients for ``cos(phi)|n1> + sin(phi)|n2>``."""
    if cfg.n_fock != 2:
        raise ValueError("closed_form_2fock requires a 2-Fock config")
    wx, wy = math.cos(cfg.phi), math.sin(cfg.phi)
    return ClosedFormCoefficients(
        cfg,
        x=_block(cfg.n1, cfg.m, cfg.theta, cfg.tau, wx),
        y=_block(cfg.n2, cfg.m, cfg.theta, cfg.tau, wy),
    )


def closed_form_3fock(cfg: MPJCConfig) -> ClosedFormCoefficients:
    """Evolved coefficients for the three-Fock initial oscillator state.

    The initial weights are ``sin(phi1)cos(phi2)`` on ``|n1>``,
    ``sin(phi1)sin(phi2)`` on ``|n2>``, and ``cos(phi1)`` on ``|n3>``.
    """
    if cfg.n_fock != 3:
        raise ValueError("closed_form_3fock requires a 3-Fock config")
    wx = math.sin(cfg.phi1) * math.cos(cfg.phi2)
    wy = math.sin(cfg.phi1) * math.sin(cfg.phi2)
    wz = math.cos(cfg.phi1)
    return ClosedFormCoefficients(
        cfg,
        x=_block(cfg.n1, cfg.m, cfg.theta, cfg.tau, wx),
        y=_block(cfg.n2, cfg.m, cfg.theta, cfg.tau, wy),
        z=_block(cfg.n3, cfg.m, cfg.theta, cfg.tau, wz),
    )


def assemble_joint(coeffs: ClosedFormCoefficients, dim: int | None = None) -> JointState:
    """Place the closed-form coefficients onto the qubit x Fock lattice."""
    cfg = coeffs.cfg
    if dim is None:
        dim = cfg.oracle_dim()
    amps = np.zeros((2, dim), dtype=np.complex128)
    for n, blk in coeffs.blocks():
        amps[0, n] += blk[0]           # |g, n>
        amps[1, n] += blk[1]           # |e, n>
        amps[0, n + cfg.m] += blk[2]   # |g, n + m>
        amps[1, n - cfg.m] += blk[3]   # |e, n - m>
    return JointState(amps)


def _collect(
    coeffs: ClosedFormCoefficients, excited: bool
) -> tuple[OscillatorState, float]:
    cfg = coeffs.cfg
    dim = cfg.oracle_dim()
    amps = np.zeros(dim, dtype=np.complex128)
    for n, blk in coeffs.blocks():
        if excited:
            amps[n] += blk[1]
            amps[n - cfg.m] += blk[3]
        else:
            amps[n] += blk[0]
            amps[n + cfg.m] += blk[2]
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob < 1e-14:
        raise ValueError("postselection impossible at these parameters")
    return OscillatorState(amps), prob


def postselect_excited(
    coeffs: ClosedFormCoefficients,
) -> tuple[OscillatorState, float]:
    """Oscillator state conditioned on measuring the qubit in ``|e>``.

    Returns the unnormalized amplitude vector (supported on the indices
    ``{n_i, n_i - m}``) and the success probability; divide by the square
    root of the probability to normalize.
    """
    return _collect(coeffs, excited=True)


def postselect_ground(
    coeffs: ClosedFormCoefficients,
) -> tuple[OscillatorState, float]:
    """Mirror of :func:`postselect_excited` for the ``|g>`` outcome."""
    return _collect(coeffs, excited=False)


def phase_correct(state: OscillatorState) -> OscillatorState:
    """Rotate each purely imaginary amplitude onto the real axis.

    The MPJC dynamics imprints a factor ``-i`` on every photon-number
    shifted component; a diagonal unitary with entries from ``{1, +-i}``
    removes it.  Every amplitude must already be real or purely imaginary
    (within 1e-10 relative to the state's scale); the overall sign is then
    fixed so the largest-magnitude amplitude is positive.
    """
    amps = state.amplitudes
    scale = float(np.max(np.abs(amps)))
    if scale == 0.0:
        return OscillatorState(amps.copy())
    tol = 1e-10 * max(scale, 1.0)
    re, im = np.real(amps), np.imag(amps)
    mixed = (np.abs(re) > tol) & (np.abs(im) > tol)
    if mixed.any():
        raise ValueError(
            "amplitude has mixed real and imaginary parts; "
            "use phase_max_fidelity instead"
        )
    # The dynamics lowers components with a factor -i; multiplying those by
    # +i restores them, i.e. a purely imaginary c = i*b maps to -b.
    out = np.where(np.abs(re) >= np.abs(im), re, -im).astype(np.complex128)
    k = int(np.argmax(np.abs(out)))
    if np.real(out[k]) < 0:
        out = -out
    return OscillatorState(out)


def deterministic_rho_1fock(cfg: MPJCConfig) -> DensityMatrix:
    """Reduced oscillator state of the no-measurement protocol (1-Fock).

    The matrix lives on the ordered basis ``(n1 - m, n1, n1 + m)`` and is
    the sum of the outer products of the ground branch ``(0, x1, x3)`` and
    the excited branch ``(x4, x2, 0)``.
    """
    co = closed_form_1fock(cfg)
    x1, x2, x3, x4 = co.x
    g = np.array([0.0, x1, x3])
    e = np.array([x4, x2, 0.0])
    mat = np.outer(g, g.conj()) + np.outer(e, e.conj())
    return DensityMatrix(mat, (cfg.n1 - cfg.m, cfg.n1, cfg.n1 + cfg.m))


def deterministic_rho_2fock(cfg: MPJCConfig) -> DensityMatrix:
    """Reduced oscillator state of the no-measurement protocol (2-Fock).

    Requires ``n2 = n1 + m`` so the two ladders merge into the four-element
    basis ``(n1 - m, n1, n1 + m, n1 + 2m)``.  Built as the sum of the outer
    products of the ground branch ``(0, x1, x3 + y1, y3)`` and the excited
    branch ``(x4, x2 + y4, y2, 0)``, which keeps the matrix exactly
    Hermitian with vanishing corner elements.
    """
    if cfg.n_fock != 2 or cfg.n2 != cfg.n1 + cfg.m:
        raise ValueError("deterministic_rho_2fock requires n2 = n1 + m")
    co = closed_form_2fock(cfg)
    x1, x2, x3, x4 = co.x
    y1, y2, y3, y4 = co.y
    g = np.array([0.0, x1, x3 + y1, y3])
    e = np.array([x4, x2 + y4, y2, 0.0])
    mat = np.outer(g, g.conj()) + np.outer(e, e.conj())
    basis = (cfg.n1 - cfg.m, cfg.n1, cfg.n1 + cfg.m, cfg.n1 + 2 * cfg.m)
    return DensityMatrix(mat, basis)


def reduced_m_state(cfg: MPJCConfig) -> tuple[OscillatorState, float]:
    """Postselected state of the order-halving two-step protocol.

    Requires ``n2 = n1 - m``; the excited-branch state is then supported on
    ``{n1 - 2m, n1 - m, n1}``.  Returns the phase-corrected unnormalized
    real amplitudes and the middle coefficient ``C_mid``; whenever
    ``|C_mid|`` vanishes the state is a clean two-Fock superposition
    spanning ``2m`` photons although the interaction order was only ``m``.

    The initial oscillator state is ``cos(phi)|n1> - i sin(phi)|n2>``; the
    relative ``-i`` makes the two paths into ``|n1 - m>`` (the qubit flip
    from ``|g, n1>`` and the survivor of ``|e, n2>``) interfere coherently.
    With ``b1 = rate_falling(n1, m)``, ``b2 = rate_falling(n1 - m, m)`` the
    phase-corrected amplitudes are ``cos(theta)sin(phi)sin(b2 tau)`` on
    ``|n1 - 2m>``,
    ``C_mid = cos(theta)cos(phi)sin(b1 tau) + sin(theta)sin(phi)cos(b1 tau)``
    on ``|n1 - m>``, and ``sin(theta)cos(phi)cos(rate_rising(n1, m) tau)``
    on ``|n1>``.
    """
    if cfg.n_fock != 2 or cfg.n2 != cfg.n1 - cfg.m:
        raise ValueError("reduced_m_state requires n2 = n1 - m")
    if cfg.n1 < 2 * cfg.m:
        raise ValueError("reduced_m_state requires n1 >= 2m")
    b1 = rate_falling(cfg.n1, cfg.m)
    b2 = rate_falling(cfg.n1 - cfg.m, cfg.m)
    a1 = rate_rising(cfg.n1, cfg.m)
    ct, st = np.cos(cfg.theta), np.sin(cfg.theta)
    cp, sp = np.cos(cfg.phi), np.sin(cfg.phi)
    amps = np.zeros(cfg.n1 + 1, dtype=np.complex128)
    amps[cfg.n1 - 2 * cfg.m] = ct * sp * np.sin(b2 * cfg.tau)
    c_mid = ct * cp * np.sin(b1 * cfg.tau) + st * sp * np.cos(b1 * cfg.tau)
    amps[cfg.n1 - cfg.m] = c_mid
    amps[cfg.n1] = st * cp * np.cos(a1 * cfg.tau)
    state = OscillatorState(amps)
    if state.norm_sq() < 1e-14:
        raise ValueError("postselection impossible: excited branch has no weight")
    return state, float(c_mid)


def build_hamiltonian(m: int, dim: int) -> np.ndarray:
    """Interaction matrix of ``a^m sigma_+ + a^dag^m sigma_-``.

    Dense ``(2*dim, 2*dim)`` array over the flat joint index
    ``q * dim + n`` (g before e): the only nonzero elements are
    ``<e, n - m|H|g, n> = rate_falling(n, m)`` and their conjugates.
    """
    if dim < m + 1:
        raise ValueError("dim must be at least m + 1")
    h = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    for n in range(m, dim):
        val = rate_falling(n, m)
        h[dim + n - m, n] = val   # <e, n-m| H |g, n>
        h[n, dim + n - m] = val
    return h


def oracle_evolve(h: np.ndarray, psi0: JointState, tau: float) -> JointState:
    """Brute-force evolution ``exp(-i H tau) |psi0>``.

    Uses the Hermitian eigendecomposition of ``h``, which is exactly
    unitary up to round-off and needs no step-size tuning.  This is the
    independent oracle against which the closed-form coefficients are
    validated.
    """
    vec = psi0.flatten()
    if h.shape[0] != vec.size:
        raise ValueError(
            f"Hamiltonian dimension {h.shape[0]} does not match state {vec.size}"
        )
    evals, evecs = scipy.linalg.eigh(h)
    phases = np.exp(-1j * evals * tau)
    out = evecs @ (phases * (evecs.conj().T @ vec))
    return JointState.from_flat(out)
