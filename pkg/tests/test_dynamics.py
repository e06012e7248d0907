"""Unit and property tests for the closed-form evolution module."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binomial_mpjc import dynamics
from binomial_mpjc.hilbert import OscillatorState, partial_trace_qubit

from conftest import codeword


def random_cfg(rng: np.random.Generator, n_fock: int) -> dynamics.MPJCConfig:
    m = int(rng.integers(1, 5))
    picks = sorted(rng.choice(np.arange(m, m + 12), size=n_fock, replace=False))
    kwargs = dict(
        n1=int(picks[0]),
        m=m,
        theta=float(rng.uniform(0, np.pi)),
        tau=float(rng.uniform(0, 2 * np.pi)),
    )
    if n_fock >= 2:
        kwargs["n2"] = int(picks[1])
    if n_fock == 2:
        kwargs["phi"] = float(rng.uniform(0, np.pi))
    if n_fock == 3:
        kwargs["n3"] = int(picks[2])
        kwargs["phi1"] = float(rng.uniform(0, np.pi))
        kwargs["phi2"] = float(rng.uniform(0, np.pi))
    return dynamics.MPJCConfig(**kwargs)


CLOSED_FORM = {
    1: dynamics.closed_form_1fock,
    2: dynamics.closed_form_2fock,
    3: dynamics.closed_form_3fock,
}


def oracle_joint(cfg: dynamics.MPJCConfig) -> dynamics.JointState:
    fn = CLOSED_FORM[cfg.n_fock]
    frozen = dynamics.MPJCConfig(
        n1=cfg.n1, n2=cfg.n2, n3=cfg.n3, m=cfg.m, theta=cfg.theta,
        phi=cfg.phi, phi1=cfg.phi1, phi2=cfg.phi2, tau=0.0,
    )
    psi0 = dynamics.assemble_joint(fn(frozen))
    h = dynamics.build_hamiltonian(cfg.m, psi0.dim)
    return dynamics.oracle_evolve(h, psi0, cfg.tau)


class TestRates:
    def test_known_values(self):
        assert dynamics.rate_falling(4, 4) == pytest.approx(math.sqrt(24))
        assert dynamics.rate_rising(4, 4) == pytest.approx(math.sqrt(1680))
        assert dynamics.rate_falling(4, 2) == pytest.approx(math.sqrt(12))
        assert dynamics.rate_falling(6, 3) == pytest.approx(math.sqrt(120))
        assert dynamics.rate_rising(0, 1) == 1.0

    def test_falling_requires_enough_photons(self):
        with pytest.raises(ValueError):
            dynamics.rate_falling(2, 3)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 20), st.integers(1, 6))
    def test_rising_falling_adjoint_relation(self, n, m):
        # <n+m| a^dag^m |n> = <n| a^m |n+m>
        assert dynamics.rate_rising(n, m) == pytest.approx(
            dynamics.rate_falling(n + m, m), rel=1e-14
        )


class TestConfigValidation:
    def test_rejects_n_below_m(self):
        with pytest.raises(ValueError, match=">= m"):
            dynamics.MPJCConfig(n1=2, m=4, theta=0.3, tau=1.0)

    def test_rejects_duplicate_indices(self):
        with pytest.raises(ValueError, match="distinct"):
            dynamics.MPJCConfig(n1=4, n2=4, m=2, theta=0.3, tau=1.0, phi=0.1)

    def test_two_fock_requires_phi(self):
        with pytest.raises(ValueError, match="phi"):
            dynamics.MPJCConfig(n1=4, n2=6, m=2, theta=0.3, tau=1.0)

    def test_three_fock_requires_both_angles(self):
        with pytest.raises(ValueError, match="phi1"):
            dynamics.MPJCConfig(n1=4, n2=6, n3=8, m=2, theta=0.3, tau=1.0)

    def test_n3_requires_n2(self):
        with pytest.raises(ValueError, match="n3"):
            dynamics.MPJCConfig(n1=4, n3=8, m=2, theta=0.3, tau=1.0)


class TestClosedForm:
    def test_norm_preserved(self, rng):
        for n_fock in (1, 2, 3):
            for _ in range(10):
                cfg = random_cfg(rng, n_fock)
                co = CLOSED_FORM[n_fock](cfg)
                assert co.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_block_structure(self, rng):
        # Survivor elements real; shifted elements purely imaginary.
        cfg = random_cfg(rng, 1)
        co = dynamics.closed_form_1fock(cfg)
        assert abs(co.x[0].imag) == 0.0
        assert abs(co.x[1].imag) == 0.0
        assert abs(co.x[2].real) == 0.0
        assert abs(co.x[3].real) == 0.0

    def test_tau_zero_is_initial_state(self):
        cfg = dynamics.MPJCConfig(n1=5, m=2, theta=0.7, tau=0.0)
        psi = dynamics.assemble_joint(dynamics.closed_form_1fock(cfg))
        assert psi.amplitudes[0, 5] == pytest.approx(math.cos(0.7))
        assert psi.amplitudes[1, 5] == pytest.approx(math.sin(0.7))
        assert psi.norm_sq() == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("n_fock", [1, 2, 3])
    def test_matches_oracle(self, rng, n_fock):
        for _ in range(25):
            cfg = random_cfg(rng, n_fock)
            psi = dynamics.assemble_joint(CLOSED_FORM[n_fock](cfg))
            ref = oracle_joint(cfg)
            assert np.max(np.abs(psi.amplitudes - ref.amplitudes)) < 1e-9

    def test_wrong_family_rejected(self):
        cfg1 = dynamics.MPJCConfig(n1=4, m=2, theta=0.3, tau=1.0)
        with pytest.raises(ValueError):
            dynamics.closed_form_2fock(cfg1)
        with pytest.raises(ValueError):
            dynamics.closed_form_3fock(cfg1)


class TestSchroedingerResidual:
    def test_central_difference(self, rng):
        # d|psi>/dtau = -i H |psi> for the closed-form state.
        cfg = random_cfg(rng, 2)
        h_step = 1e-6
        fn = dynamics.closed_form_2fock

        def at(tau):
            shifted = dynamics.MPJCConfig(
                n1=cfg.n1, n2=cfg.n2, m=cfg.m, theta=cfg.theta,
                phi=cfg.phi, tau=tau,
            )
            return dynamics.assemble_joint(fn(shifted)).flatten()

        h = dynamics.build_hamiltonian(cfg.m, cfg.oracle_dim())
        derivative = (at(cfg.tau + h_step) - at(cfg.tau - h_step)) / (2 * h_step)
        residual = derivative + 1j * (h @ at(cfg.tau))
        assert np.max(np.abs(residual)) < 1e-5


class TestPostselection:
    def test_probabilities_sum_to_one(self, rng):
        for n_fock in (1, 2, 3):
            cfg = random_cfg(rng, n_fock)
            co = CLOSED_FORM[n_fock](cfg)
            _, pe = dynamics.postselect_excited(co)
            _, pg = dynamics.postselect_ground(co)
            assert pe + pg == pytest.approx(1.0, abs=1e-12)

    def test_excited_support(self):
        cfg = dynamics.MPJCConfig(n1=4, m=4, theta=0.8, tau=0.5)
        state, _ = dynamics.postselect_excited(dynamics.closed_form_1fock(cfg))
        assert set(state.support()) <= {0, 4}

    def test_impossible_branch_raises(self):
        # theta = 0 and tau = 0: the qubit is exactly in |g>.
        cfg = dynamics.MPJCConfig(n1=4, m=4, theta=0.0, tau=0.0)
        with pytest.raises(ValueError, match="postselection"):
            dynamics.postselect_excited(dynamics.closed_form_1fock(cfg))


class TestPhaseCorrect:
    def test_imaginary_rotated_to_real(self):
        state = OscillatorState(np.array([0.6, -0.8j]))
        out = dynamics.phase_correct(state)
        assert np.max(np.abs(out.amplitudes.imag)) == 0.0
        assert out.amplitudes[0].real == pytest.approx(0.6)
        assert out.amplitudes[1].real == pytest.approx(0.8)

    def test_removes_dynamics_minus_i(self):
        # c = -i*b (the factor the evolution imprints) must map to +b.
        state = OscillatorState(np.array([0.6, -1j * 0.8]))
        out = dynamics.phase_correct(state)
        assert out.amplitudes[1].real == pytest.approx(0.8)

    def test_global_sign_fixed(self):
        state = OscillatorState(np.array([-0.8, 0.6]))
        out = dynamics.phase_correct(state)
        assert out.amplitudes[0].real == pytest.approx(0.8)
        assert out.amplitudes[1].real == pytest.approx(-0.6)

    def test_rejects_mixed_amplitude(self):
        state = OscillatorState(np.array([0.5 + 0.5j, 0.1]))
        with pytest.raises(ValueError, match="mixed"):
            dynamics.phase_correct(state)

    def test_preserves_magnitudes(self, rng):
        raw = rng.normal(size=5)
        signs = rng.choice([1.0, 1.0j], size=5)
        state = OscillatorState(raw * signs)
        out = dynamics.phase_correct(state)
        assert np.max(np.abs(np.abs(out.amplitudes) - np.abs(raw))) < 1e-14


class TestDeterministicRho:
    def test_matches_partial_trace_1fock(self, rng):
        for _ in range(20):
            cfg = random_cfg(rng, 1)
            rho = dynamics.deterministic_rho_1fock(cfg)
            rho.check_physical()
            ref = partial_trace_qubit(dynamics.assemble_joint(dynamics.closed_form_1fock(cfg)))
            full = np.zeros((3, 3), dtype=complex)
            ref_map = dict(zip(ref.basis, range(len(ref.basis))))
            for a, na in enumerate(rho.basis):
                for b, nb in enumerate(rho.basis):
                    if na in ref_map and nb in ref_map:
                        full[a, b] = ref.matrix[ref_map[na], ref_map[nb]]
            assert np.max(np.abs(rho.matrix - full)) < 1e-12

    def test_matches_partial_trace_2fock(self, rng):
        for _ in range(20):
            m = int(rng.integers(1, 5))
            n1 = int(rng.integers(m, m + 10))
            cfg = dynamics.MPJCConfig(
                n1=n1, n2=n1 + m, m=m,
                theta=float(rng.uniform(0, np.pi)),
                phi=float(rng.uniform(0, np.pi)),
                tau=float(rng.uniform(0, 2 * np.pi)),
            )
            rho = dynamics.deterministic_rho_2fock(cfg)
            rho.check_physical()
            ref = partial_trace_qubit(dynamics.assemble_joint(dynamics.closed_form_2fock(cfg)))
            ref_map = dict(zip(ref.basis, range(len(ref.basis))))
            for a, na in enumerate(rho.basis):
                for b, nb in enumerate(rho.basis):
                    want = 0.0
                    if na in ref_map and nb in ref_map:
                        want = ref.matrix[ref_map[na], ref_map[nb]]
                    assert abs(rho.matrix[a, b] - want) < 1e-12

    def test_outer_corner_coherences_vanish(self, rng):
        cfg = random_cfg(rng, 1)
        rho = dynamics.deterministic_rho_1fock(cfg)
        assert abs(rho.matrix[0, 2]) == 0.0

    def test_2fock_requires_merged_ladder(self):
        cfg = dynamics.MPJCConfig(n1=4, n2=7, m=2, theta=0.3, phi=0.4, tau=1.0)
        with pytest.raises(ValueError, match="n2 = n1 \\+ m"):
            dynamics.deterministic_rho_2fock(cfg)


class TestReducedMState:
    def test_mid_coefficient_formula(self, rng):
        for _ in range(20):
            m = int(rng.integers(1, 4))
            n1 = int(rng.integers(2 * m, 2 * m + 8))
            theta = float(rng.uniform(0, np.pi))
            phi = float(rng.uniform(0, np.pi))
            tau = float(rng.uniform(0, 2 * np.pi))
            cfg = dynamics.MPJCConfig(
                n1=n1, n2=n1 - m, m=m, theta=theta, phi=phi, tau=tau
            )
            _, c_mid = dynamics.reduced_m_state(cfg)
            b1 = dynamics.rate_falling(n1, m)
            want = (
                math.cos(theta) * math.cos(phi) * math.sin(b1 * tau)
                + math.sin(theta) * math.sin(phi) * math.cos(b1 * tau)
            )
            assert abs(c_mid) == pytest.approx(abs(want), abs=1e-12)

    def test_support_spans_2m(self):
        cfg = dynamics.MPJCConfig(n1=4, n2=2, m=2, theta=0.5, phi=0.7, tau=1.1)
        state, _ = dynamics.reduced_m_state(cfg)
        assert set(state.support()) <= {0, 2, 4}

    def test_requires_lowered_second_index(self):
        cfg = dynamics.MPJCConfig(n1=4, n2=6, m=2, theta=0.5, phi=0.7, tau=1.1)
        with pytest.raises(ValueError, match="n2 = n1 - m"):
            dynamics.reduced_m_state(cfg)


class TestHamiltonianAndOracle:
    def test_hamiltonian_is_hermitian(self):
        for m, dim in [(1, 5), (4, 13), (6, 16)]:
            h = dynamics.build_hamiltonian(m, dim)
            assert np.max(np.abs(h - h.conj().T)) == 0.0

    def test_hamiltonian_elements(self):
        h = dynamics.build_hamiltonian(4, 13)
        # <e, 0| H |g, 4> = sqrt(4!)
        assert h[13 + 0, 4] == pytest.approx(math.sqrt(24))
        # <e, 4| H |g, 8> = sqrt(8!/4!)
        assert h[13 + 4, 8] == pytest.approx(math.sqrt(1680))
        assert h[0, 4] == 0.0

    def test_oracle_unitary(self, rng):
        h = dynamics.build_hamiltonian(2, 8)
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        v /= np.linalg.norm(v)
        out = dynamics.oracle_evolve(h, dynamics.JointState.from_flat(v), 1.7)
        assert out.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_oracle_single_rabi_ladder(self):
        # |g, 1> under m=1 oscillates with |e, 0> at rate 1.
        dim = 4
        h = dynamics.build_hamiltonian(1, dim)
        psi0 = np.zeros(2 * dim, dtype=complex)
        psi0[1] = 1.0
        tau = 0.9
        out = dynamics.oracle_evolve(h, dynamics.JointState.from_flat(psi0), tau)
        assert out.amplitudes[0, 1] == pytest.approx(math.cos(tau), abs=1e-12)
        assert out.amplitudes[1, 0] == pytest.approx(-1j * math.sin(tau), abs=1e-12)


class TestIdealPointFidelity:
    def test_reference_point(self):
        target = codeword(1, 1, 0, 13)
        cfg = dynamics.MPJCConfig(
            n1=4, m=4, theta=1.4325662500369456, tau=0.03769911184307752
        )
        state, _ = dynamics.postselect_excited(dynamics.closed_form_1fock(cfg))
        corrected = dynamics.phase_correct(state).normalized()
        overlap = np.vdot(corrected.amplitudes, target.amplitudes)
        assert abs(overlap) ** 2 >= 1 - 1e-6
