"""Deterministic parallel grid scans.

Reproduces the published match counts of the probabilistic protocol, the
optimum tables of the deterministic protocol, and the vanishing sets of
the order-halving protocol's middle coefficient.

All grids have inclusive endpoints (``value = start + i * step`` with
``step = (end - start) / (count - 1)``).  Kernels are compiled with numba
and parallelized over the time axis; every grid point is evaluated in a
fixed order and per-slice results are merged in canonical slice order, so
counts, records, and argmax results are bitwise identical at any worker
count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from numba import njit, prange

from .dynamics import rate_falling, rate_rising
from .hilbert import OscillatorState

__all__ = [
    "GridSpec",
    "ScanRecord",
    "CountResult",
    "ArgmaxResult",
    "grid_values",
    "fine_tau_grid",
    "fine_angle_grid",
    "coarse_tau_grid",
    "coarse_angle_grid",
    "scan_2fock",
    "scan_3fock",
    "scan_4fock",
    "deterministic_argmax",
    "find_Ck_zeros",
]

#: Pass tolerances used throughout (inclusive comparison).
TOL_LOOSE = 1e-4
TOL_STRICT = 1e-6

#: Feasibility threshold of the deterministic two-Fock optimum search: every
#: ground-branch amplitude magnitude must stay at or below this value.
DETERMINISTIC_CONSTRAINT = 0.1


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linear grid: ``values[i] = start + i * (end-start)/(count-1)``."""

    start: float
    end: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValueError("count must be at least 2")

    def values(self) -> np.ndarray:
        i = np.arange(self.count, dtype=np.float64)
        return self.start + i * ((self.end - self.start) / (self.count - 1))


def grid_values(axis: GridSpec) -> np.ndarray:
    """Ordered grid values of one axis (see :class:`GridSpec`)."""
    return axis.values()


def fine_tau_grid() -> GridSpec:
    return GridSpec(0.0, 2.0 * np.pi, 1001)


def fine_angle_grid() -> GridSpec:
    return GridSpec(0.0, np.pi, 501)


def coarse_tau_grid() -> GridSpec:
    return GridSpec(0.0, 2.0 * np.pi, 501)


def coarse_angle_grid() -> GridSpec:
    return GridSpec(0.0, np.pi, 251)


@dataclass(frozen=True)
class ScanRecord:
    """One reported grid point: indices, parameter values, figure of merit."""

    indices: tuple[int, ...]
    params: tuple[float, ...]
    fidelity: float
    pass_1em4: bool
    pass_1em6: bool


@dataclass(frozen=True)
class CountResult:
    """Counts at both tolerances plus the records passing the loose one."""

    count_1em4: int
    count_1em6: int
    records: list[ScanRecord]


@dataclass(frozen=True)
class ArgmaxResult:
    """Grid optimum of the deterministic protocol."""

    indices: tuple[int, ...]
    theta: float
    tau: float
    phi: float | None
    objective: float
    fidelity: float


def _set_workers(workers: int | None) -> None:
    if workers is not None:
        numba.set_num_threads(int(workers))


def _target_amps(target: OscillatorState, support: tuple[int, ...]) -> np.ndarray:
    """Real target amplitudes on the given support; checks completeness."""
    amps = target.amplitudes
    out = np.zeros(len(support), dtype=np.float64)
    mask = np.zeros(target.dim, dtype=bool)
    for i, n in enumerate(support):
        if n < 0:
            raise ValueError(f"negative support index {n}")
        if n >= target.dim:
            continue  # truncated target carries no weight there
        if abs(amps[n].imag) > 1e-12:
            raise ValueError("target amplitudes must be real")
        out[i] = amps[n].real
        mask[n] = True
    leak = np.abs(amps[~mask])
    if leak.size and leak.max() > 1e-12:
        raise ValueError("target has support outside the scanned sub-basis")
    return out


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _fid2(t0, t1, c0, c1):
    nrm = c0 * c0 + c1 * c1
    if nrm <= 0.0:
        return 0.0
    ov = t0 * c0 + t1 * c1
    return ov * ov / nrm


@njit(cache=True, parallel=True)
def _kernel_2fock(taus, thetas, b1, a1, t0, t1, fid_out):
    for i in prange(taus.size):
        sb = np.sin(b1 * taus[i])
        ca = np.cos(a1 * taus[i])
        for j in range(thetas.size):
            c0 = np.cos(thetas[j]) * sb
            c1 = np.sin(thetas[j]) * ca
            fid_out[i, j] = _fid2(t0, t1, c0, c1)


@njit(cache=True)
def _fid3(t0, t1, t2, c0, c1, c2):
    nrm = c0 * c0 + c1 * c1 + c2 * c2
    if nrm <= 0.0:
        return 0.0
    ov = t0 * c0 + t1 * c1 + t2 * c2
    return ov * ov / nrm


@njit(cache=True, parallel=True)
def _kernel_3fock_count(taus, ct_a, st_a, cp_a, sp_a, b1, a1, a2, t0, t1, t2, n4, n6):
    for i in prange(taus.size):
        sb = np.sin(b1 * taus[i])
        ca1 = np.cos(a1 * taus[i])
        sa1 = np.sin(a1 * taus[i])
        ca2 = np.cos(a2 * taus[i])
        c4_l = 0
        c6_l = 0
        for j in range(ct_a.size):
            ct = ct_a[j]
            st = st_a[j]
            for k in range(cp_a.size):
                cp = cp_a[k]
                sp = sp_a[k]
                f = _fid3(
                    t0,
                    t1,
                    t2,
                    ct * cp * sb,
                    st * cp * ca1 + ct * sp * sa1,
                    st * sp * ca2,
                )
                d = abs(f - 1.0)
                if d <= 1e-4:
                    c4_l += 1
                    if d <= 1e-6:
                        c6_l += 1
        n4[i] = c4_l
        n6[i] = c6_l


@njit(cache=True, parallel=True)
def _kernel_3fock_fill(
    taus, ct_a, st_a, cp_a, sp_a, b1, a1, a2, t0, t1, t2, offsets, idx_out, fid_out
):
    for i in prange(taus.size):
        sb = np.sin(b1 * taus[i])
        ca1 = np.cos(a1 * taus[i])
        sa1 = np.sin(a1 * taus[i])
        ca2 = np.cos(a2 * taus[i])
        pos = offsets[i]
        for j in range(ct_a.size):
            ct = ct_a[j]
            st = st_a[j]
            for k in range(cp_a.size):
                cp = cp_a[k]
                sp = sp_a[k]
                f = _fid3(
                    t0,
                    t1,
                    t2,
                    ct * cp * sb,
                    st * cp * ca1 + ct * sp * sa1,
                    st * sp * ca2,
                )
                if abs(f - 1.0) <= 1e-4:
                    idx_out[pos, 0] = i
                    idx_out[pos, 1] = j
                    idx_out[pos, 2] = k
                    fid_out[pos] = f
                    pos += 1


@njit(cache=True)
def _fid4(t0, t1, t2, t3, c0, c1, c2, c3):
    nrm = c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3
    if nrm <= 0.0:
        return 0.0
    ov = t0 * c0 + t1 * c1 + t2 * c2 + t3 * c3
    return ov * ov / nrm


@njit(cache=True, parallel=True)
def _kernel_4fock_count(
    taus, ct_a, st_a, cp1_a, sp1_a, cp2_a, sp2_a, b1, a1, a2, a3, t0, t1, t2, t3, n4, n6
):
    for i in prange(taus.size):
        s0 = np.sin(b1 * taus[i])
        s1 = np.sin(a1 * taus[i])
        c1t = np.cos(a1 * taus[i])
        s2 = np.sin(a2 * taus[i])
        c2t = np.cos(a2 * taus[i])
        c3t = np.cos(a3 * taus[i])
        c4_l = 0
        c6_l = 0
        for j in range(ct_a.size):
            ct = ct_a[j]
            st = st_a[j]
            for k in range(cp1_a.size):
                sp1 = sp1_a[k]
                cp1 = cp1_a[k]
                for l in range(cp2_a.size):
                    cp2 = cp2_a[l]
                    sp2 = sp2_a[l]
                    f = _fid4(
                        t0,
                        t1,
                        t2,
                        t3,
                        ct * sp1 * cp2 * s0,
                        st * sp1 * cp2 * c1t + ct * sp1 * sp2 * s1,
                        st * sp1 * sp2 * c2t + ct * cp1 * s2,
                        st * cp1 * c3t,
                    )
                    d = abs(f - 1.0)
                    if d <= 1e-4:
                        c4_l += 1
                        if d <= 1e-6:
                            c6_l += 1
        n4[i] = c4_l
        n6[i] = c6_l


@njit(cache=True, parallel=True)
def _kernel_4fock_fill(
    taus, ct_a, st_a, cp1_a, sp1_a, cp2_a, sp2_a, b1, a1, a2, a3, t0, t1, t2, t3,
    offsets, idx_out, fid_out
):
    for i in prange(taus.size):
        s0 = np.sin(b1 * taus[i])
        s1 = np.sin(a1 * taus[i])
        c1t = np.cos(a1 * taus[i])
        s2 = np.sin(a2 * taus[i])
        c2t = np.cos(a2 * taus[i])
        c3t = np.cos(a3 * taus[i])
        pos = offsets[i]
        for j in range(ct_a.size):
            ct = ct_a[j]
            st = st_a[j]
            for k in range(cp1_a.size):
                sp1 = sp1_a[k]
                cp1 = cp1_a[k]
                for l in range(cp2_a.size):
                    cp2 = cp2_a[l]
                    sp2 = sp2_a[l]
                    f = _fid4(
                        t0,
                        t1,
                        t2,
                        t3,
                        ct * sp1 * cp2 * s0,
                        st * sp1 * cp2 * c1t + ct * sp1 * sp2 * s1,
                        st * sp1 * sp2 * c2t + ct * cp1 * s2,
                        st * cp1 * c3t,
                    )
                    if abs(f - 1.0) <= 1e-4:
                        idx_out[pos, 0] = i
                        idx_out[pos, 1] = j
                        idx_out[pos, 2] = k
                        idx_out[pos, 3] = l
                        fid_out[pos] = f
                        pos += 1


@njit(cache=True, parallel=True)
def _kernel_det1_argmax(taus, thetas, b1, a1, t0, t1, t2, best_f, best_j):
    """Phase-maximized deterministic fidelity, single-Fock protocol.

    The reduced 3x3 matrix has a vanishing coherence between the two outer
    basis elements, so the diagonal-unitary optimum is analytic:
    ``sum_i t_i^2 rho_ii + 2 t0 t1 |rho01| + 2 t1 t2 |rho12|``
    with ``rho01 = x2 x4`` and ``rho12 = x1 x3`` couplings.
    """
    for i in prange(taus.size):
        cb = np.cos(b1 * taus[i])
        sb = np.sin(b1 * taus[i])
        ca = np.cos(a1 * taus[i])
        sa = np.sin(a1 * taus[i])
        bf = -1.0
        bj = -1
        for j in range(thetas.size):
            ct = np.cos(thetas[j])
            st = np.sin(thetas[j])
            x1 = ct * cb
            x2 = st * ca
            x3 = st * sa
            x4 = ct * sb
            g = (
                t0 * t0 * x4 * x4
                + t1 * t1 * (x1 * x1 + x2 * x2)
                + t2 * t2 * x3 * x3
                + 2.0 * t0 * t1 * abs(x2 * x4)
                + 2.0 * t1 * t2 * abs(x1 * x3)
            )
            if g > bf:
                bf = g
                bj = j
        best_f[i] = bf
        best_j[i] = bj


@njit(cache=True, parallel=True)
def _kernel_det2_argmax(
    taus, thetas, phis, b1, a1, a2, t0, t1, t2, eps, best_f, best_j, best_k
):
    """Constrained optimum of the two-Fock deterministic protocol.

    Feasible points keep every ground-branch amplitude magnitude at or
    below ``eps``; the objective is the excited-branch (pure-state) fidelity.
    """
    for i in prange(taus.size):
        cb = np.cos(b1 * taus[i])
        sb = np.sin(b1 * taus[i])
        ca1 = np.cos(a1 * taus[i])
        sa1 = np.sin(a1 * taus[i])
        ca2 = np.cos(a2 * taus[i])
        sa2 = np.sin(a2 * taus[i])
        bf = -1.0
        bj = -1
        bk = -1
        for j in range(thetas.size):
            ct = np.cos(thetas[j])
            st = np.sin(thetas[j])
            for k in range(phis.size):
                cp = np.cos(phis[k])
                sp = np.sin(phis[k])
                if (
                    abs(ct * cp * cb) > eps
                    or abs(st * cp * sa1) > eps
                    or abs(ct * sp * ca1) > eps
                    or abs(st * sp * sa2) > eps
                ):
                    continue
                f = _fid3(
                    t0,
                    t1,
                    t2,
                    ct * cp * sb,
                    st * cp * ca1 + ct * sp * sa1,
                    st * sp * ca2,
                )
                if f > bf:
                    bf = f
                    bj = j
                    bk = k
        best_f[i] = bf
        best_j[i] = bj
        best_k[i] = bk


@njit(cache=True, parallel=True)
def _kernel_ck_count(taus, ct_a, st_a, cp_a, sp_a, rate, n4, n6):
    for i in prange(taus.size):
        s = np.sin(rate * taus[i])
        c = np.cos(rate * taus[i])
        c4_l = 0
        c6_l = 0
        for j in range(ct_a.size):
            ct = ct_a[j]
            st = st_a[j]
            for k in range(cp_a.size):
                v = abs(ct * cp_a[k] * s + st * sp_a[k] * c)
                if v <= 1e-4:
                    c4_l += 1
                    if v <= 1e-6:
                        c6_l += 1
        n4[i] = c4_l
        n6[i] = c6_l


@njit(cache=True, parallel=True)
def _kernel_ck_fill(taus, ct_a, st_a, cp_a, sp_a, rate, offsets, idx_out, val_out):
    for i in prange(taus.size):
        s = np.sin(rate * taus[i])
        c = np.cos(rate * taus[i])
        pos = offsets[i]
        for j in range(ct_a.size):
            ct = ct_a[j]
            st = st_a[j]
            for k in range(cp_a.size):
                v = ct * cp_a[k] * s + st * sp_a[k] * c
                if abs(v) <= 1e-4:
                    idx_out[pos, 0] = i
                    idx_out[pos, 1] = j
                    idx_out[pos, 2] = k
                    val_out[pos] = v
                    pos += 1


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def scan_2fock(
    target: OscillatorState,
    n1: int,
    m: int,
    tau_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    workers: int | None = None,
) -> tuple[np.ndarray, CountResult]:
    """Fidelity surface and pass records of the single-Fock scan.

    The target must be supported on ``{n1 - m, n1}``.  Returns the full
    fidelity array indexed ``[tau, theta]`` together with counts/records.
    """
    tau_grid = tau_grid or fine_tau_grid()
    theta_grid = theta_grid or fine_angle_grid()
    t = _target_amps(target, (n1 - m, n1))
    _set_workers(workers)
    taus = tau_grid.values()
    thetas = theta_grid.values()
    fid = np.empty((taus.size, thetas.size))
    _kernel_2fock(taus, thetas, rate_falling(n1, m), rate_rising(n1, m), t[0], t[1], fid)
    d = np.abs(fid - 1.0)
    pass4 = d <= TOL_LOOSE
    records = []
    for i, j in zip(*np.nonzero(pass4)):
        f = float(fid[i, j])
        records.append(
            ScanRecord(
                (int(i), int(j)),
                (float(taus[i]), float(thetas[j])),
                f,
                True,
                abs(f - 1.0) <= TOL_STRICT,
            )
        )
    res = CountResult(int(pass4.sum()), int((d <= TOL_STRICT).sum()), records)
    return fid, res


def _records_from_fill(
    idx: np.ndarray, fid: np.ndarray, grids: list[np.ndarray]
) -> list[ScanRecord]:
    records = []
    for row, f in zip(idx, fid):
        params = tuple(float(g[x]) for g, x in zip(grids, row))
        records.append(
            ScanRecord(
                tuple(int(x) for x in row),
                params,
                float(f),
                True,
                abs(float(f) - 1.0) <= TOL_STRICT,
            )
        )
    return records


def scan_3fock(
    target: OscillatorState,
    n1: int,
    n2: int,
    m: int,
    tau_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    phi_grid: GridSpec | None = None,
    workers: int | None = None,
) -> CountResult:
    """Match counts of the two-Fock-input scan against a three-Fock target.

    Requires the merged-ladder geometry ``n2 = n1 + m``; the target must be
    supported on ``{n1 - m, n1, n2}``.  The qubit is prepared with a
    relative ``i`` between ``|g>`` and ``|e>``, so the flip path into a
    shared Fock level adds coherently with the survivor amplitude.
    """
    if n2 != n1 + m:
        raise ValueError("scan_3fock requires n2 = n1 + m")
    tau_grid = tau_grid or fine_tau_grid()
    theta_grid = theta_grid or fine_angle_grid()
    phi_grid = phi_grid or fine_angle_grid()
    t = _target_amps(target, (n1 - m, n1, n2))
    _set_workers(workers)
    taus, thetas, phis = tau_grid.values(), theta_grid.values(), phi_grid.values()
    b1 = rate_falling(n1, m)
    a1 = rate_rising(n1, m)
    a2 = rate_rising(n2, m)
    ct_a, st_a = np.cos(thetas), np.sin(thetas)
    cp_a, sp_a = np.cos(phis), np.sin(phis)
    n4 = np.zeros(taus.size, dtype=np.int64)
    n6 = np.zeros(taus.size, dtype=np.int64)
    _kernel_3fock_count(
        taus, ct_a, st_a, cp_a, sp_a, b1, a1, a2, t[0], t[1], t[2], n4, n6
    )
    offsets = np.concatenate([[0], np.cumsum(n4)])
    total = int(offsets[-1])
    idx = np.empty((total, 3), dtype=np.int64)
    fid = np.empty(total)
    _kernel_3fock_fill(
        taus, ct_a, st_a, cp_a, sp_a, b1, a1, a2, t[0], t[1], t[2],
        offsets[:-1], idx, fid,
    )
    records = _records_from_fill(idx, fid, [taus, thetas, phis])
    return CountResult(total, int(n6.sum()), records)


def scan_4fock(
    target: OscillatorState,
    n1: int,
    n2: int,
    n3: int,
    m: int,
    tau_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    phi1_grid: GridSpec | None = None,
    phi2_grid: GridSpec | None = None,
    workers: int | None = None,
) -> CountResult:
    """Match counts of the three-Fock-input scan against a four-Fock target.

    Requires ``n2 = n1 + m`` and ``n3 = n2 + m``; the target must be
    supported on ``{n1 - m, n1, n2, n3}``.  Default grids are the coarse
    ones (501 x 251 x 251 x 251).  The qubit carries the same relative
    ``i`` between ``|g>`` and ``|e>`` as in :func:`scan_3fock`.
    """
    if n2 != n1 + m or n3 != n2 + m:
        raise ValueError("scan_4fock requires n2 = n1 + m and n3 = n2 + m")
    tau_grid = tau_grid or coarse_tau_grid()
    theta_grid = theta_grid or coarse_angle_grid()
    phi1_grid = phi1_grid or coarse_angle_grid()
    phi2_grid = phi2_grid or coarse_angle_grid()
    t = _target_amps(target, (n1 - m, n1, n2, n3))
    _set_workers(workers)
    taus = tau_grid.values()
    thetas = theta_grid.values()
    phi1s = phi1_grid.values()
    phi2s = phi2_grid.values()
    b1 = rate_falling(n1, m)
    a1 = rate_rising(n1, m)
    a2 = rate_rising(n2, m)
    a3 = rate_rising(n3, m)
    ct_a, st_a = np.cos(thetas), np.sin(thetas)
    cp1_a, sp1_a = np.cos(phi1s), np.sin(phi1s)
    cp2_a, sp2_a = np.cos(phi2s), np.sin(phi2s)
    n4 = np.zeros(taus.size, dtype=np.int64)
    n6 = np.zeros(taus.size, dtype=np.int64)
    _kernel_4fock_count(
        taus, ct_a, st_a, cp1_a, sp1_a, cp2_a, sp2_a,
        b1, a1, a2, a3, t[0], t[1], t[2], t[3], n4, n6,
    )
    offsets = np.concatenate([[0], np.cumsum(n4)])
    total = int(offsets[-1])
    idx = np.empty((total, 4), dtype=np.int64)
    fid = np.empty(total)
    _kernel_4fock_fill(
        taus, ct_a, st_a, cp1_a, sp1_a, cp2_a, sp2_a,
        b1, a1, a2, a3, t[0], t[1], t[2], t[3],
        offsets[:-1], idx, fid,
    )
    records = _records_from_fill(idx, fid, [taus, thetas, phi1s, phi2s])
    return CountResult(total, int(n6.sum()), records)


def deterministic_argmax(
    target: OscillatorState,
    n1: int,
    m: int,
    tau_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    phi_grid: GridSpec | None = None,
    n2: int | None = None,
    constraint_eps: float = DETERMINISTIC_CONSTRAINT,
    workers: int | None = None,
) -> ArgmaxResult:
    """Grid optimum of the deterministic (partial-trace) protocol.

    Without a phi axis (single-Fock input, default fine grids): maximizes
    the diagonal-unitary-optimized fidelity between the reduced density
    matrix and the target; the reported ``fidelity`` is the square root of
    that expectation value (the amplitude-overlap convention under which
    the published optima are stated) and ``objective`` is the expectation
    itself.

    With a phi axis (two-Fock input with ``n2 = n1 + m``, default coarse
    grids): maximizes the excited-branch pure-state fidelity subject to
    every ground-branch amplitude magnitude staying at or below
    ``constraint_eps`` (near-pure reduced states); ``objective`` and
    ``fidelity`` both report that constrained fidelity.

    Ties are broken lexicographically on (tau index, theta index, phi index).
    """
    _set_workers(workers)
    if phi_grid is None:
        tau_grid = tau_grid or fine_tau_grid()
        theta_grid = theta_grid or fine_angle_grid()
        t = _target_amps(target, (n1 - m, n1, n1 + m))
        taus, thetas = tau_grid.values(), theta_grid.values()
        best_f = np.empty(taus.size)
        best_j = np.empty(taus.size, dtype=np.int64)
        _kernel_det1_argmax(
            taus, thetas, rate_falling(n1, m), rate_rising(n1, m), t[0], t[1], t[2],
            best_f, best_j,
        )
        i = int(np.argmax(best_f))
        j = int(best_j[i])
        g = float(best_f[i])
        return ArgmaxResult(
            (i, j), float(thetas[j]), float(taus[i]), None, g, float(np.sqrt(g))
        )
    if n2 is None or n2 != n1 + m:
        raise ValueError("the two-Fock deterministic optimum requires n2 = n1 + m")
    tau_grid = tau_grid or coarse_tau_grid()
    theta_grid = theta_grid or coarse_angle_grid()
    phi_grid = phi_grid or coarse_angle_grid()
    t = _target_amps(target, (n1 - m, n1, n2))
    taus, thetas, phis = tau_grid.values(), theta_grid.values(), phi_grid.values()
    best_f = np.empty(taus.size)
    best_j = np.empty(taus.size, dtype=np.int64)
    best_k = np.empty(taus.size, dtype=np.int64)
    _kernel_det2_argmax(
        taus,
        thetas,
        phis,
        rate_falling(n1, m),
        rate_rising(n1, m),
        rate_rising(n2, m),
        t[0],
        t[1],
        t[2],
        constraint_eps,
        best_f,
        best_j,
        best_k,
    )
    i = int(np.argmax(best_f))
    if best_f[i] < 0.0:
        raise ValueError("no grid point satisfies the ground-branch constraint")
    j, k = int(best_j[i]), int(best_k[i])
    f = float(best_f[i])
    return ArgmaxResult((i, j, k), float(thetas[j]), float(taus[i]), float(phis[k]), f, f)


def find_Ck_zeros(
    n1: int,
    m: int,
    tau_grid: GridSpec | None = None,
    theta_grid: GridSpec | None = None,
    phi_grid: GridSpec | None = None,
    workers: int | None = None,
) -> CountResult:
    """Vanishing set of the order-halving protocol's middle coefficient.

    The coefficient is ``cos(theta)cos(phi)sin(r tau) +
    sin(theta)sin(phi)cos(r tau)`` with ``r = rate_falling(n1, m)``;
    records carry ``|C|`` as their figure of merit, with pass tolerances
    1e-4 and 1e-6 on ``|C|`` itself.
    """
    if n1 < 2 * m:
        raise ValueError("find_Ck_zeros requires n1 >= 2m")
    tau_grid = tau_grid or fine_tau_grid()
    theta_grid = theta_grid or fine_angle_grid()
    phi_grid = phi_grid or fine_angle_grid()
    _set_workers(workers)
    taus, thetas, phis = tau_grid.values(), theta_grid.values(), phi_grid.values()
    rate = rate_falling(n1, m)
    ct_a, st_a = np.cos(thetas), np.sin(thetas)
    cp_a, sp_a = np.cos(phis), np.sin(phis)
    n4 = np.zeros(taus.size, dtype=np.int64)
    n6 = np.zeros(taus.size, dtype=np.int64)
    _kernel_ck_count(taus, ct_a, st_a, cp_a, sp_a, rate, n4, n6)
    offsets = np.concatenate([[0], np.cumsum(n4)])
    total = int(offsets[-1])
    idx = np.empty((total, 3), dtype=np.int64)
    vals = np.empty(total)
    _kernel_ck_fill(taus, ct_a, st_a, cp_a, sp_a, rate, offsets[:-1], idx, vals)
    records = []
    for row, v in zip(idx, vals):
        av = abs(float(v))
        records.append(
            ScanRecord(
                tuple(int(x) for x in row),
                (float(taus[row[0]]), float(thetas[row[1]]), float(phis[row[2]])),
                av,
                True,
                av <= TOL_STRICT,
            )
        )
    return CountResult(total, int(n6.sum()), records)
