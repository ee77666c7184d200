import math

import numpy as np
import pytest

from nwise_ghz import _kernel, propagator
from nwise_ghz.errors import (
    DimensionMismatch,
    DimensionTooLarge,
    NoConvergence,
    TargetOutOfRange,
    ValidationError,
)
from nwise_ghz.model import ChainSpec, DriveProfile, build_chain
from nwise_ghz.propagator import (
    embed_pair_trajectory,
    propagate_full,
    propagate_two_level,
    transition_probability,
)
from nwise_ghz.subspace import effective_two_level, ghz_pair, pair_of

from conftest import dense_hamiltonian, exact_constant_evolution, magnus_linear_reference


def pair_problem(n=3, gx=1.0, gy=0.0, gz=0.0, drive=None, index=0):
    drive = drive or DriveProfile.symmetric(20.0)
    model = build_chain(ChainSpec(n, gx, gy, gz), drive)
    return model, effective_two_level(model, pair_of(index, n))


class TestKernel:
    def rabi(self, h):
        taus = np.linspace(0, 20, 11)
        z = np.array([1.0, -1.0])
        f = np.array([1.0, 1.0], dtype=complex)
        params = np.array([0.0, 20.0, 1e-6])
        psi0 = np.array([1, 0], dtype=complex)
        out, _ = _kernel.integrate(psi0, taus, h, _kernel.DRIVE_CONSTANT, params, z, np.zeros(2), f, 1.0)
        exact = np.column_stack((np.cos(taus), -1j * np.sin(taus)))
        return np.max(np.abs(out - exact))

    def test_eighth_order_convergence(self):
        errors = [self.rabi(h) for h in (1.0, 0.5, 0.25)]
        # an order-8 method gains 2**8 = 256 per halving
        assert errors[0] / errors[1] > 128
        assert errors[1] / errors[2] > 128

    def test_lands_on_every_sample(self):
        taus = np.array([0.0, 0.1, 0.37, 2.0])
        psi0 = np.array([1, 0], dtype=complex)
        out, steps = _kernel.integrate(
            psi0, taus, 0.5, _kernel.DRIVE_CONSTANT, np.array([0.0, 2.0, 1e-6]),
            np.array([1.0, -1.0]), np.zeros(2), np.array([1.0, 1.0], dtype=complex), 1.0,
        )
        np.testing.assert_allclose(np.abs(out[:, 1]) ** 2, np.sin(taus) ** 2, atol=1e-9)
        assert steps >= 3


class TestTwoLevel:
    def test_rabi_oscillation(self):
        drive = DriveProfile.constant(0.0, 0.0, 30.0)
        _, prob = pair_problem(2, 1.0, drive=drive)
        traj = propagate_two_level(prob, "representative", tol=1e-10, n_samples=601)
        p = transition_probability(traj, "partner")
        np.testing.assert_allclose(p[:, 1], np.sin(traj.taus) ** 2, atol=1e-8)

    def test_constant_field_matches_matrix_exponential(self):
        drive = DriveProfile.constant(0.8, -2.0, 6.0)
        model, prob = pair_problem(3, 0.5, 0.3, 0.2, drive=drive, index=2)
        traj = propagate_two_level(prob, 2, n_samples=41)
        h = prob.hamiltonian(0.0)
        exact = exact_constant_evolution(h, np.array([1, 0], dtype=complex), traj.taus)
        np.testing.assert_allclose(traj.amplitudes, exact, atol=1e-9)

    def test_start_from_partner(self):
        _, prob = pair_problem(3, 0.4)
        traj = propagate_two_level(prob, "partner", n_samples=11)
        np.testing.assert_array_equal(traj.amplitudes[0], [0, 1])
        assert traj.meta["initial"] == prob.pair.partner

    def test_norm_preserved(self):
        _, prob = pair_problem(3, 0.7, 0.2, 0.4)
        traj = propagate_two_level(prob, n_samples=101)
        assert np.max(np.abs(traj.norms - 1)) < 1e-10

    def test_slope_rescaling(self):
        # doubling alpha and scaling gamma by sqrt(2) leaves P(tau) unchanged
        _, a = pair_problem(3, 0.5, drive=DriveProfile.symmetric(15.0, alpha=1.0))
        _, b = pair_problem(3, 0.5 * math.sqrt(2), drive=DriveProfile.symmetric(15.0, alpha=2.0))
        pa = np.abs(propagate_two_level(a, n_samples=51).amplitudes) ** 2
        pb = np.abs(propagate_two_level(b, n_samples=51).amplitudes) ** 2
        np.testing.assert_allclose(pa, pb, atol=1e-9)

    def test_even_chain_gamma_z_is_a_global_phase(self):
        _, plain = pair_problem(4, 0.6)
        _, shifted = pair_problem(4, 0.6, gz=0.9)
        a = propagate_two_level(plain, n_samples=51)
        b = propagate_two_level(shifted, n_samples=51)
        np.testing.assert_allclose(np.abs(a.amplitudes), np.abs(b.amplitudes), rtol=0, atol=1e-15)
        phase = np.exp(-1j * 0.9 * (a.taus - a.taus[0]))[:, None]
        np.testing.assert_allclose(b.amplitudes, a.amplitudes * phase, atol=1e-12)

    def test_tangent_drive_converges(self):
        drive = DriveProfile.tangent(10.0 / math.pi, -10.0, 10.0)
        _, prob = pair_problem(4, 1.0, drive=drive)
        traj = propagate_two_level(prob, n_samples=201)
        assert traj.meta["halving_change"] <= 1e-10
        assert abs(traj.norms[-1] - 1) < 1e-10

    @pytest.mark.parametrize("initial", ["middle", 3])
    def test_bad_initial(self, initial):
        _, prob = pair_problem(3, 1.0)
        with pytest.raises(ValidationError):
            propagate_two_level(prob, initial)

    @pytest.mark.parametrize("tol", [1e-14, 1e-5])
    def test_tolerance_range(self, tol):
        _, prob = pair_problem(3, 1.0)
        with pytest.raises(ValidationError):
            propagate_two_level(prob, tol=tol)

    def test_sample_count(self):
        _, prob = pair_problem(3, 1.0)
        with pytest.raises(ValidationError):
            propagate_two_level(prob, n_samples=1)

    def test_stalled_halving_raises(self, monkeypatch):
        monkeypatch.setattr(propagator, "_H_MIN", 0.5)
        _, prob = pair_problem(3, 1.0, drive=DriveProfile.symmetric(60.0))
        with pytest.raises(NoConvergence):
            propagate_two_level(prob, tol=1e-13, n_samples=11)


class TestFull:
    def test_linear_ramp_matches_midpoint_exponential(self, rng):
        n, gx, gy, gz = 3, 0.6, 0.25, 0.3
        model = build_chain(ChainSpec(n, gx, gy, gz), DriveProfile.symmetric(4.0))
        psi0 = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi0 /= np.linalg.norm(psi0)
        traj = propagate_full(model, psi0, n_samples=3)
        ref = magnus_linear_reference(n, gx, gy, gz, -4.0, 4.0, psi0, n_steps=3000)
        np.testing.assert_allclose(traj.final, ref, atol=1e-5)

    def test_constant_field_matches_matrix_exponential(self, rng):
        n = 4
        model = build_chain(ChainSpec(n, 0.5, -0.2, 0.35), DriveProfile.constant(0.9, 0.0, 5.0))
        psi0 = rng.normal(size=16) + 1j * rng.normal(size=16)
        psi0 /= np.linalg.norm(psi0)
        traj = propagate_full(model, psi0, n_samples=6)
        exact = exact_constant_evolution(dense_hamiltonian(n, 0.9, 0.5, -0.2, 0.35), psi0, traj.taus)
        np.testing.assert_allclose(traj.amplitudes, exact, atol=1e-9)

    @pytest.mark.parametrize("n,index", [(2, 1), (3, 5), (5, 12)])
    def test_pair_route_matches_full_route(self, n, index):
        model = build_chain(ChainSpec(n, 0.7, 0.3, 0.4), DriveProfile.symmetric(20.0))
        pair = pair_of(index, n)
        full = propagate_full(model, index, n_samples=81)
        reduced = propagate_two_level(effective_two_level(model, pair), index, n_samples=81)
        np.testing.assert_allclose(embed_pair_trajectory(reduced, n), full.amplitudes, atol=1e-9)

    def test_no_leakage_out_of_pair(self):
        n = 4
        model = build_chain(ChainSpec(n, 0.7, 0.3, 0.4), DriveProfile.symmetric(15.0))
        traj = propagate_full(model, 6, n_samples=31)
        outside = np.delete(traj.amplitudes, list(pair_of(6, n).indices), axis=1)
        assert np.max(np.abs(outside)) == 0.0

    def test_size_limits(self):
        model = build_chain(ChainSpec(15, 1.0), DriveProfile.symmetric(1.0))
        with pytest.raises(DimensionTooLarge):
            propagate_full(model, 0)
        model = build_chain(ChainSpec(14, 1.0), DriveProfile.symmetric(1.0))
        with pytest.raises(DimensionTooLarge):
            propagate_full(model, 0, n_samples=10_000)

    def test_vector_shape_checked(self):
        model = build_chain(ChainSpec(3, 1.0), DriveProfile.symmetric(1.0))
        with pytest.raises(DimensionMismatch):
            propagate_full(model, np.ones(4) / 2)


class TestRecords:
    def setup_method(self):
        model, prob = pair_problem(3, 0.5)
        self.model = model
        self.pair_traj = propagate_two_level(prob, n_samples=11)
        self.full_traj = propagate_full(model, 0, n_samples=11)

    def test_columns(self):
        assert self.pair_traj.column("rep") == 0
        assert self.pair_traj.column(7) == 1
        assert self.full_traj.column(7) == 7

    @pytest.mark.parametrize("target", [3, "middle", 1.5, True])
    def test_bad_pair_targets(self, target):
        with pytest.raises(TargetOutOfRange):
            self.pair_traj.column(target)

    @pytest.mark.parametrize("target", [8, -1, "partner"])
    def test_bad_full_targets(self, target):
        with pytest.raises(TargetOutOfRange):
            self.full_traj.column(target)

    def test_transition_probability_agrees_between_routes(self):
        a = transition_probability(self.pair_traj, 7)
        b = transition_probability(self.full_traj, 7)
        np.testing.assert_allclose(a, b, atol=1e-9)

    def test_embed_rejects_full_trajectories(self):
        with pytest.raises(ValidationError):
            embed_pair_trajectory(self.full_traj, 3)

    def test_ghz_pair_embedding(self):
        emb = embed_pair_trajectory(self.pair_traj, 3)
        assert emb.shape == (11, 8)
        assert ghz_pair(3).indices == self.pair_traj.basis
