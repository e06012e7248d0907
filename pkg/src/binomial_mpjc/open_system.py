"""Lindblad master-equation evolution of the joint qubit-oscillator system.

Collapse operators for oscillator/qubit relaxation, thermal absorption,
and dephasing; a fixed-step RK4 integrator for the master equation; and
fidelity-versus-rate sweeps for the state-preparation protocol under
decoherence.

All operators act on the flat joint basis ``index = q * dim + n`` (qubit
g before e, Fock ascending) used by :func:`~binomial_mpjc.dynamics.build_hamiltonian`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import MPJCConfig, build_hamiltonian, closed_form_1fock, phase_correct, postselect_excited
from .hilbert import OscillatorState, pure_fidelity

__all__ = [
    "LindbladConfig",
    "ProtocolPoint",
    "SweepRecord",
    "build_collapse_ops",
    "lindblad_rhs",
    "evolve_master",
    "fidelity_vs_rate_sweep",
    "decohered_fidelity",
    "ideal_point_fidelity",
]

SCENARIOS = ("oscillator-only", "qubit-only", "both")
CHANNEL_MODES = ("dissipation-only", "dephasing-only", "both")


@dataclass(frozen=True)
class LindbladConfig:
    """Decoherence rates (per unit scaled time) and bath occupation.

    Relaxation and absorption rates are tied pairwise
    (``lam_os_relax == lam_os_absorb`` and likewise for the qubit);
    ``scenario`` selects which subsystem couples to the bath and
    ``channel_mode`` selects dissipation, dephasing, or both.
    """

    lam_os_relax: float = 0.0
    lam_os_absorb: float = 0.0
    lam_os_dephase: float = 0.0
    lam_qb_relax: float = 0.0
    lam_qb_absorb: float = 0.0
    lam_qb_dephase: float = 0.0
    n_th: float = 0.0
    scenario: str = "both"
    channel_mode: str = "both"

    def __post_init__(self) -> None:
        rates = (
            self.lam_os_relax,
            self.lam_os_absorb,
            self.lam_os_dephase,
            self.lam_qb_relax,
            self.lam_qb_absorb,
            self.lam_qb_dephase,
        )
        if any(r < 0 for r in rates) or self.n_th < 0:
            raise ValueError("rates and n_th must be non-negative")
        if abs(self.lam_os_relax - self.lam_os_absorb) > 0:
            raise ValueError("lam_os_relax and lam_os_absorb must be equal")
        if abs(self.lam_qb_relax - self.lam_qb_absorb) > 0:
            raise ValueError("lam_qb_relax and lam_qb_absorb must be equal")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}")
        if self.channel_mode not in CHANNEL_MODES:
            raise ValueError(f"channel_mode must be one of {CHANNEL_MODES}")


def _annihilation(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


def build_collapse_ops(cfg: LindbladConfig, dim: int) -> list[np.ndarray]:
    """Collapse operators on the joint space selected by the config.

    Oscillator channels: ``sqrt(lam(1 + n_th)) a``, ``sqrt(lam n_th) a^dag``,
    ``sqrt(lam) a^dag a``.  Qubit channels: ``sqrt(lam(1 + n_th)) sigma_-``,
    ``sqrt(lam n_th) sigma_+``, ``sqrt(lam) sigma_z``.  Each is tensored
    with the identity on the other subsystem; operators with zero prefactor
    (including all absorption channels at ``n_th = 0``) are omitted.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    eye_f = np.eye(dim)
    eye_q = np.eye(2)
    a = _annihilation(dim)
    num = a.conj().T @ a
    sigma_minus = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e| with g first
    sigma_plus = sigma_minus.T
    sigma_z = np.diag([-1.0, 1.0])  # g -> -1, e -> +1

    want_os = cfg.scenario in ("oscillator-only", "both")
    want_qb = cfg.scenario in ("qubit-only", "both")
    want_diss = cfg.channel_mode in ("dissipation-only", "both")
    want_deph = cfg.channel_mode in ("dephasing-only", "both")

    ops: list[np.ndarray] = []

    def add(rate: float, qubit_part: np.ndarray, fock_part: np.ndarray) -> None:
        if rate > 0.0:
            ops.append(math.sqrt(rate) * np.kron(qubit_part, fock_part))

    if want_os and want_diss:
        add(cfg.lam_os_relax * (1.0 + cfg.n_th), eye_q, a)
        add(cfg.lam_os_absorb * cfg.n_th, eye_q, a.conj().T)
    if want_os and want_deph:
        add(cfg.lam_os_dephase, eye_q, num)
    if want_qb and want_diss:
        add(cfg.lam_qb_relax * (1.0 + cfg.n_th), sigma_minus, eye_f)
        add(cfg.lam_qb_absorb * cfg.n_th, sigma_plus, eye_f)
    if want_qb and want_deph:
        add(cfg.lam_qb_dephase, sigma_z, eye_f)
    return ops


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, ls: list[np.ndarray]) -> np.ndarray:
    """``-i[H, rho] + sum_k (L rho L^dag - (L^dag L rho + rho L^dag L)/2)``."""
    if rho.shape != h.shape:
        raise ValueError("rho and H shapes differ")
    out = -1j * (h @ rho - rho @ h)
    for l in ls:
        if l.shape != rho.shape:
            raise ValueError("collapse operator shape differs from rho")
        ldl = l.conj().T @ l
        out += l @ rho @ l.conj().T - 0.5 * (ldl @ rho + rho @ ldl)
    return out


def evolve_master(
    rho0: np.ndarray,
    h: np.ndarray,
    ls: list[np.ndarray],
    tau_final: float,
    dt: float,
) -> np.ndarray:
    """Classical fixed-step RK4 integration of the master equation.

    The last step is shortened to land exactly on ``tau_final``; the result
    is re-Hermitized once at the end.  Raises if the trace drifts by more
    than 1e-6 (advice: reduce ``dt``).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if tau_final < 0:
        raise ValueError("tau_final must be non-negative")
    rho = np.array(rho0, dtype=np.complex128)
    t = 0.0
    while t < tau_final - 1e-15:
        step = min(dt, tau_final - t)
        k1 = lindblad_rhs(rho, h, ls)
        k2 = lindblad_rhs(rho + 0.5 * step * k1, h, ls)
        k3 = lindblad_rhs(rho + 0.5 * step * k2, h, ls)
        k4 = lindblad_rhs(rho + step * k3, h, ls)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += step
    rho = (rho + rho.conj().T) / 2.0
    drift = abs(float(np.real(np.trace(rho))) - 1.0)
    if drift > 1e-6:
        raise ValueError(
            f"trace drifted by {drift:.3g} during integration; use a smaller dt"
        )
    return rho


@dataclass(frozen=True)
class ProtocolPoint:
    """The fixed state-preparation working point for decoherence sweeps."""

    target: OscillatorState
    n1: int
    m: int
    theta: float
    tau: float


@dataclass(frozen=True)
class SweepRecord:
    scenario: str
    channel_mode: str
    rate: float
    fidelity: float


def _initial_joint_rho(point: ProtocolPoint, dim: int) -> np.ndarray:
    vec = np.zeros(2 * dim, dtype=np.complex128)
    vec[point.n1] = math.cos(point.theta)          # |g, n1>
    vec[dim + point.n1] = math.sin(point.theta)    # |e, n1>
    return np.outer(vec, vec.conj())


def decohered_fidelity(
    point: ProtocolPoint,
    lcfg: LindbladConfig,
    dim: int | None = None,
    dt: float | None = None,
) -> float:
    """Fidelity with the target after evolving under the master equation.

    The full joint density matrix is evolved to ``point.tau``, projected
    onto the excited-qubit block (the measurement-conditioned readout of
    the probabilistic protocol), renormalized, phase-aligned, and compared
    with the target.
    """
    if dim is None:
        dim = point.n1 + 2 * point.m + 1
    if dt is None:
        dt = point.tau / 2000.0
    h = build_hamiltonian(point.m, dim)
    ls = build_collapse_ops(lcfg, dim)
    rho0 = _initial_joint_rho(point, dim)
    rho = evolve_master(rho0, h, ls, point.tau, dt)
    # Excited-qubit block over Fock indices.
    rho_e = rho[dim:, dim:]
    p_e = float(np.real(np.trace(rho_e)))
    if p_e < 1e-14:
        raise ValueError("excited-outcome probability vanished")
    rho_e = rho_e / p_e
    tgt = point.target.amplitudes
    if tgt.size < dim:
        tgt = np.concatenate([tgt, np.zeros(dim - tgt.size)])
    # Phase alignment: the ideal protocol leaves a -i on the lowered
    # component; align each target amplitude with the dominant phases of
    # the decohered block (diagonal unitary freedom only).
    lead = np.diag(rho_e)
    phases = np.zeros(dim)
    support = np.nonzero(np.abs(tgt) > 0)[0]
    if support.size > 1:
        ref = support[np.argmax(np.abs(lead[support]))]
        for n in support:
            if n != ref:
                phases[n] = -np.angle(rho_e[ref, n]) if abs(rho_e[ref, n]) > 0 else 0.0
    t_aligned = tgt * np.exp(1j * phases)
    return float(np.real(t_aligned.conj() @ rho_e @ t_aligned))


def fidelity_vs_rate_sweep(
    point: ProtocolPoint,
    template: LindbladConfig,
    rate_grid: np.ndarray | list[float],
    dim: int | None = None,
) -> list[SweepRecord]:
    """Fidelity records over a grid of rates for the template's scenario.

    The template's scenario/channel-mode selection is kept; each rate value
    on the grid replaces every rate that the selection makes active.
    Records are returned in grid order.
    """
    records: list[SweepRecord] = []
    for rate in np.asarray(rate_grid, dtype=float):
        lcfg = replace(
            template,
            lam_os_relax=rate,
            lam_os_absorb=rate,
            lam_os_dephase=rate,
            lam_qb_relax=rate,
            lam_qb_absorb=rate,
            lam_qb_dephase=rate,
        )
        fid = decohered_fidelity(point, lcfg, dim=dim)
        records.append(
            SweepRecord(template.scenario, template.channel_mode, float(rate), fid)
        )
    return records


def ideal_point_fidelity(point: ProtocolPoint) -> float:
    """Closed-form (decoherence-free) fidelity at the protocol point."""
    cfg = MPJCConfig(n1=point.n1, m=point.m, theta=point.theta, tau=point.tau)
    state, _ = postselect_excited(closed_form_1fock(cfg))
    corrected = phase_correct(state).normalized()
    tgt = point.target
    if tgt.dim < corrected.dim:
        tgt = OscillatorState(
            np.concatenate([tgt.amplitudes, np.zeros(corrected.dim - tgt.dim)])
        )
    return pure_fidelity(corrected, tgt)
