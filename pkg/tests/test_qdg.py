"""
Unit tests for qdg.py
"""
from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from .context import qdiscrim

qdg = qdiscrim.qdg
adaptive = qdiscrim.adaptive
helstrom = qdiscrim.helstrom
states = qdiscrim.states
errors = qdiscrim.errors

PI_6 = states.SignalEnsemble(pi / 6)
NOISY = states.NoiseModel(0.95)
PURE = states.NoiseModel(1.0)


class TestInteraction:
    """Probe basis, the merging unitary and its Kraus operators"""

    def test_probe_basis_first_step(self):
        test_result = qdg.probe_basis(1, pi / 6)
        assert test_result.theta_n == pytest.approx(pi / 6)
        assert test_result.cos2n == pytest.approx(0.5)

    def test_probe_basis_second_step(self):
        test_result = qdg.probe_basis(2, pi / 6)
        assert test_result.cos2n == pytest.approx(0.25)
        assert test_result.sin2n == pytest.approx(sqrt(15) / 4)

    @pytest.mark.parametrize("n", [2, 3, 7, 40])
    def test_unitary_is_orthogonal(self, n):
        u = qdg.build_unitary(n, pi / 8).matrix
        assert np.abs(u.T @ u - np.eye(4)).max() < 1e-12

    @given(st.floats(min_value=0.05, max_value=pi / 4), st.integers(min_value=2, max_value=8),
           st.sampled_from([0, 1]))
    @settings(max_examples=100)
    def test_unitary_merges_copy_into_probe(self, theta, n, k):
        ens = states.SignalEnsemble(theta)
        psi = states.make_pure(ens, k)
        probe = qdg.probe_basis(n - 1, theta).state(k)
        merged = qdg.probe_basis(n, theta).state(k)
        test_result = qdg.build_unitary(n, theta).matrix @ np.kron([psi.amp0, psi.amp1], probe)
        assert test_result == pytest.approx(np.array([merged[0], merged[1], 0.0, 0.0]),
                                            abs=1e-10)

    def test_unitary_needs_distinct_states(self):
        with pytest.raises(errors.IllDefinedProtocolError):
            qdg.build_unitary(2, 0.0)

    def test_unitary_starts_at_second_copy(self):
        with pytest.raises(ValueError):
            qdg.build_unitary(1, pi / 6)

    @pytest.mark.parametrize("delta", [0.0, 0.1, -0.4, 1.3])
    @pytest.mark.parametrize("k", [0, 1])
    def test_kraus_completeness(self, delta, k):
        m0, m1 = qdg.kraus_operators(3, PI_6, k, delta)
        assert np.abs(m0.T @ m0 + m1.T @ m1 - np.eye(2)).max() < 1e-10

    def test_undisplaced_kraus_maps_probe_state(self):
        m0, _ = qdg.kraus_operators(2, PI_6, 1, 0.0)
        probe = np.array(qdg.probe_basis(1, pi / 6).state(1))
        merged = np.array(qdg.probe_basis(2, pi / 6).state(1))
        assert m0 @ probe == pytest.approx(merged, abs=1e-12)


class TestProbeChain:
    """Probe state after each copy along the oracle, Kraus and closed-form routes"""

    def test_pure_copies_never_flag_the_resource(self):
        rho = qdg.oracle_chain(1, PI_6, PURE)[-1]
        joint = qdg.oracle_pre_trace(rho, 2, PI_6, 0, PURE)
        assert qdg.resource_outcome_probs(joint) == pytest.approx((1.0, 0.0), abs=1e-12)

    @pytest.mark.parametrize("f,expected", [(0.95, 0.923), (0.99, 0.98412)])
    def test_noisy_resource_outcome(self, f, expected):
        noise = states.NoiseModel(f)
        joint = qdg.oracle_pre_trace(states.make_mixed(PI_6, 0, noise), 2, PI_6, 0, noise)
        assert qdg.resource_outcome_probs(joint)[0] == pytest.approx(expected, abs=1e-9)

    def test_maximal_noise_stays_mixed(self):
        for rho in qdg.oracle_chain(6, PI_6, states.NoiseModel(0.5)):
            assert (rho.m00, rho.m01, rho.m11) == pytest.approx((0.5, 0.0, 0.5), abs=1e-12)

    def test_two_copy_coefficient(self):
        first = qdg.ProbeCoeffs(a=0.95, b=0.0, step=1)
        test_result = qdg.kraus_step(first, PI_6, NOISY)
        assert test_result.a == pytest.approx(0.93875)
        assert test_result.step == 2
        assert qdg.closed_a(2, PI_6, NOISY) == pytest.approx(0.93875)

    def test_maximal_noise_coefficient(self):
        assert qdg.closed_a(9, PI_6, states.NoiseModel(0.5)) == pytest.approx(0.5)

    @pytest.mark.parametrize("theta", [pi / 12, pi / 6])
    @pytest.mark.parametrize("f", [0.8, 0.95, 0.999])
    def test_oracle_matches_kraus(self, theta, f):
        ens, noise = states.SignalEnsemble(theta), states.NoiseModel(f)
        oracle = qdg.oracle_chain(20, ens, noise)
        kraus = qdg.kraus_chain(20, ens, noise)
        for n, (rho, coeffs) in enumerate(zip(oracle, kraus), start=1):
            measured = qdg.coeffs_from_state(rho, n, theta)
            assert measured.a == pytest.approx(coeffs.a, abs=1e-12)
            assert measured.b == pytest.approx(coeffs.b, abs=1e-12)
            assert coeffs.a == pytest.approx(qdg.closed_a(n, ens, noise), abs=1e-12)

    def test_series_sum_matches_closed_a(self):
        for n in range(1, 11):
            a, _ = qdg.coeffs_series(n, PI_6, NOISY)
            assert a == pytest.approx(qdg.closed_a(n, PI_6, NOISY), abs=1e-12)

    def test_invalid_coefficients(self):
        with pytest.raises(ValueError):
            qdg.ProbeCoeffs(a=1.0, b=0.3, step=2)


class TestSuccess:
    """Final Helstrom measurement on the probe"""

    def test_probe_vectors(self):
        plus, minus = qdg.helstrom_probe_vectors(5, pi / 6)
        assert plus == pytest.approx((sqrt(0.5), sqrt(0.5)))
        assert plus[0] * minus[0] + plus[1] * minus[1] == pytest.approx(0.0, abs=1e-12)

    def test_probe_vectors_other_hypothesis(self):
        plus, _ = qdg.helstrom_probe_vectors(3, pi / 6, k=1)
        assert plus == pytest.approx((sqrt(0.5), -sqrt(0.5)))

    def test_noiseless_two_copies(self):
        assert qdg.success_prob(2, PI_6, PURE) == pytest.approx(0.9841229, abs=1e-7)

    def test_maximal_noise(self):
        assert qdg.success_prob(5, PI_6, states.NoiseModel(0.5)) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("theta", [pi / 12, pi / 8, pi / 6, pi / 5])
    def test_noiseless_reaches_helstrom(self, theta):
        ens = states.SignalEnsemble(theta)
        curve = qdg.success_curve(30, ens, PURE)
        for n, p in enumerate(curve, start=1):
            assert p == pytest.approx(helstrom.bound_pure_multi(ens, n), abs=1e-12)

    def test_oracle_and_kraus_routes_agree(self):
        oracle = qdg.success_curve(20, PI_6, NOISY, route="oracle")
        kraus = qdg.success_curve(20, PI_6, NOISY, route="kraus")
        assert oracle == pytest.approx(kraus, abs=1e-12)

    def test_matches_adaptive_scheme(self):
        assert qdg.success_curve(25, PI_6, NOISY) == pytest.approx(
            adaptive.success_dp_curve(25, PI_6, NOISY), abs=1e-12)

    def test_reaches_limit(self):
        assert qdg.success_prob(200, PI_6, NOISY) == pytest.approx(
            adaptive.asymptotic_limit(pi / 6, NOISY), abs=1e-6)

    def test_unequal_priors_rejected(self):
        with pytest.raises(errors.UnsupportedConfigurationError):
            qdg.success_curve(3, states.SignalEnsemble(pi / 6, 0.3), NOISY)

    def test_unknown_route(self):
        with pytest.raises(ValueError):
            qdg.success_curve(3, PI_6, NOISY, route="guess")


class TestSampling:
    """Monte Carlo trajectories with and without post-selection"""

    def test_sampled_success_matches_exact(self):
        rng = np.random.default_rng(2024)
        result = qdg.sample_probe_chain(3, PI_6, NOISY, rng, trials=20000)
        exact = qdg.success_prob(3, PI_6, NOISY)
        std_err = sqrt(exact * (1 - exact) / 20000)
        assert abs(result["success"].mean() - exact) < 4 * std_err
        assert (result["copies"] == 3).all()
        assert not result["heralded"].any()

    def test_pure_copies_never_restart(self):
        rng = np.random.default_rng(7)
        result = qdg.sample_probe_chain(3, PI_6, PURE, rng, trials=2000, postselect=True)
        assert (result["restarts"] == 0).all()
        assert (result["copies"] == 3).all()

    def test_postselected_run(self):
        test_result = qdg.postselect_run(4, PI_6, NOISY, np.random.default_rng(11))
        assert 4 <= test_result.copies_consumed <= 16
        assert test_result.success in (0, 1)
        if test_result.heralded_failure:
            assert test_result.copies_consumed == 16

    def test_budget_too_small(self):
        with pytest.raises(ValueError):
            qdg.sample_probe_chain(4, PI_6, NOISY, np.random.default_rng(0), trials=10,
                                   postselect=True, budget=3)
