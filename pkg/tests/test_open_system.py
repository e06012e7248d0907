"""Unit and property tests for the Lindblad master-equation module."""

from __future__ import annotations

import math

import numpy as np
import pytest

from binomial_mpjc import dynamics, open_system

from conftest import codeword


def reference_point() -> open_system.ProtocolPoint:
    return open_system.ProtocolPoint(
        target=codeword(1, 1, 0, 13),
        n1=4,
        m=4,
        theta=1.4325662500369456,
        tau=0.03769911184307752,
    )


class TestLindbladConfig:
    def test_rejects_negative_rate(self):
        with pytest.raises(ValueError):
            open_system.LindbladConfig(lam_os_dephase=-0.1)

    def test_rejects_unpaired_rates(self):
        with pytest.raises(ValueError, match="equal"):
            open_system.LindbladConfig(lam_os_relax=0.1, lam_os_absorb=0.2)

    def test_rejects_unknown_scenario(self):
        with pytest.raises(ValueError, match="scenario"):
            open_system.LindbladConfig(scenario="cavity")

    def test_rejects_unknown_channel_mode(self):
        with pytest.raises(ValueError, match="channel_mode"):
            open_system.LindbladConfig(channel_mode="amplitude")


class TestCollapseOps:
    def test_zero_rates_give_no_ops(self):
        assert open_system.build_collapse_ops(open_system.LindbladConfig(), 5) == []

    def test_absorption_omitted_at_zero_temperature(self):
        cfg = open_system.LindbladConfig(
            lam_os_relax=0.1, lam_os_absorb=0.1, lam_qb_relax=0.2,
            lam_qb_absorb=0.2, n_th=0.0, channel_mode="dissipation-only",
        )
        ops = open_system.build_collapse_ops(cfg, 5)
        assert len(ops) == 2  # oscillator relax + qubit relax only

    def test_full_set_at_finite_temperature(self):
        cfg = open_system.LindbladConfig(
            lam_os_relax=0.1, lam_os_absorb=0.1, lam_os_dephase=0.1,
            lam_qb_relax=0.1, lam_qb_absorb=0.1, lam_qb_dephase=0.1,
            n_th=0.5,
        )
        assert len(open_system.build_collapse_ops(cfg, 5)) == 6

    def test_scenario_selects_subsystem(self):
        cfg = open_system.LindbladConfig(
            lam_os_relax=0.1, lam_os_absorb=0.1, lam_os_dephase=0.1,
            lam_qb_relax=0.1, lam_qb_absorb=0.1, lam_qb_dephase=0.1,
            scenario="qubit-only",
        )
        ops = open_system.build_collapse_ops(cfg, 4)
        assert len(ops) == 2
        # sigma_- tensor identity: the only nonzero block is the g<-e corner,
        # proportional to the Fock identity.
        relax = ops[0]
        assert np.allclose(relax[:4, 4:], math.sqrt(0.1) * np.eye(4))
        assert np.max(np.abs(relax[:4, :4])) == 0.0

    def test_oscillator_relax_matrix(self):
        cfg = open_system.LindbladConfig(
            lam_os_relax=0.25, lam_os_absorb=0.25, channel_mode="dissipation-only",
            scenario="oscillator-only",
        )
        (op,) = open_system.build_collapse_ops(cfg, 3)
        # sqrt(0.25) * a acting identically on both qubit blocks
        assert op[0, 1] == pytest.approx(0.5 * 1.0)
        assert op[1, 2] == pytest.approx(0.5 * math.sqrt(2))
        assert op[3, 4] == pytest.approx(0.5 * 1.0)


class TestEvolveMaster:
    def test_trace_preserved(self, rng):
        dim = 5
        h = dynamics.build_hamiltonian(2, dim)
        cfg = open_system.LindbladConfig(
            lam_os_relax=0.3, lam_os_absorb=0.3, lam_os_dephase=0.2,
            lam_qb_relax=0.1, lam_qb_absorb=0.1, lam_qb_dephase=0.1,
            n_th=0.2,
        )
        ls = open_system.build_collapse_ops(cfg, dim)
        v = rng.normal(size=2 * dim) + 1j * rng.normal(size=2 * dim)
        v /= np.linalg.norm(v)
        rho0 = np.outer(v, v.conj())
        rho = open_system.evolve_master(rho0, h, ls, 1.0, 1e-3)
        assert np.real(np.trace(rho)) == pytest.approx(1.0, abs=1e-8)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-8

    def test_no_dissipation_matches_unitary_oracle(self):
        dim = 9
        h = dynamics.build_hamiltonian(4, dim)
        cfg0 = dynamics.MPJCConfig(n1=4, m=4, theta=0.9, tau=0.0)
        psi0 = dynamics.assemble_joint(dynamics.closed_form_1fock(cfg0), dim)
        rho0 = np.outer(psi0.flatten(), psi0.flatten().conj())
        tau = 0.8
        rho = open_system.evolve_master(rho0, h, [], tau, tau / 20000)
        ref = dynamics.oracle_evolve(h, psi0, tau).flatten()
        assert np.max(np.abs(rho - np.outer(ref, ref.conj()))) < 1e-9

    def test_pure_decay_analytic(self):
        # Single collapse operator sqrt(k) a on |1><1|: population e^{-k t}.
        dim = 3
        k = 0.7
        a = np.zeros((dim, dim), dtype=complex)
        a[0, 1] = 1.0
        a[1, 2] = math.sqrt(2)
        big_a = np.kron(np.eye(2), a)
        rho0 = np.zeros((2 * dim, 2 * dim), dtype=complex)
        rho0[1, 1] = 1.0
        rho = open_system.evolve_master(
            rho0, np.zeros_like(rho0), [math.sqrt(k) * big_a], 2.0, 1e-3
        )
        assert rho[1, 1].real == pytest.approx(math.exp(-k * 2.0), abs=1e-9)

    def test_dephasing_decay_analytic(self):
        # L = sqrt(k) n: coherence <0|rho|1> decays as e^{-k t / 2}.
        dim = 2
        k = 0.9
        num = np.diag([0.0, 1.0]).astype(complex)
        big_n = np.kron(np.eye(2), num)
        v = np.zeros(4, dtype=complex)
        v[0] = v[1] = 1 / math.sqrt(2)
        rho0 = np.outer(v, v.conj())
        rho = open_system.evolve_master(
            rho0, np.zeros_like(rho0), [math.sqrt(k) * big_n], 1.5, 1e-3
        )
        assert abs(rho[0, 1]) == pytest.approx(0.5 * math.exp(-k * 1.5 / 2), abs=1e-9)

    def test_invalid_dt_rejected(self):
        with pytest.raises(ValueError):
            open_system.evolve_master(np.eye(2, dtype=complex), np.zeros((2, 2)), [], 1.0, 0.0)


class TestDecoheredFidelity:
    def test_zero_rate_matches_ideal(self):
        point = reference_point()
        fid = open_system.decohered_fidelity(point, open_system.LindbladConfig())
        ideal = open_system.ideal_point_fidelity(point)
        assert abs(fid - ideal) < 1e-8

    def test_decoherence_reduces_fidelity(self):
        point = reference_point()
        cfg = open_system.LindbladConfig(
            lam_os_relax=0.5, lam_os_absorb=0.5, lam_os_dephase=0.5,
        )
        assert open_system.decohered_fidelity(point, cfg) < (
            open_system.ideal_point_fidelity(point)
        )

    def test_sweep_records_in_grid_order(self):
        point = reference_point()
        template = open_system.LindbladConfig(
            scenario="oscillator-only", channel_mode="dissipation-only"
        )
        rates = [1e-3, 1e-2, 1e-1]
        records = open_system.fidelity_vs_rate_sweep(point, template, rates)
        assert [r.rate for r in records] == rates
        assert all(r.scenario == "oscillator-only" for r in records)
        assert all(0.0 <= r.fidelity <= 1.0 for r in records)


class TestIdealPointFidelity:
    def test_reference_value(self):
        assert open_system.ideal_point_fidelity(reference_point()) >= 1 - 1e-6
