"""
Unit tests for helstrom.py
"""
from math import pi, sin

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from .context import qdiscrim

helstrom = qdiscrim.helstrom
states = qdiscrim.states


def brute_force_bound(ens, n_copies):
    """Trace-norm Helstrom bound of the n-copy pure states, from the full tensor product"""
    vecs = []
    for k in (0, 1):
        psi = states.make_pure(ens, k)
        vec = np.array([1.0])
        for _ in range(n_copies):
            vec = np.kron(vec, np.array([psi.amp0, psi.amp1]))
        vecs.append(vec)
    diff = ens.prior0 * np.outer(vecs[0], vecs[0]) - ens.prior1 * np.outer(vecs[1], vecs[1])
    return 0.5 * (1.0 + np.abs(np.linalg.eigvalsh(diff)).sum())


class TestPureBounds:
    """Multiple-copy Helstrom bound for pure states"""

    def test_single_copy(self):
        ens = states.SignalEnsemble(pi / 6)
        assert helstrom.bound_pure_single(ens) == pytest.approx(0.5 * (1 + sin(pi / 3)))

    def test_three_copies(self):
        ens = states.SignalEnsemble(pi / 6)
        assert helstrom.bound_pure_multi(ens, 3) == pytest.approx(0.9960784, abs=1e-7)

    def test_orthogonal_states(self):
        assert helstrom.bound_pure_multi(states.SignalEnsemble(pi / 4), 1) == pytest.approx(1.0)

    def test_identical_states(self):
        assert helstrom.bound_pure_multi(states.SignalEnsemble(0.0, 0.7), 4) == pytest.approx(0.7)

    def test_rejects_zero_copies(self):
        with pytest.raises(ValueError):
            helstrom.bound_pure_multi(states.SignalEnsemble(pi / 6), 0)

    @pytest.mark.parametrize("n_copies", [1, 2, 3])
    @pytest.mark.parametrize("prior0", [0.3, 0.5, 0.7])
    def test_matches_brute_force(self, n_copies, prior0):
        ens = states.SignalEnsemble(pi / 7, prior0)
        assert helstrom.bound_pure_multi(ens, n_copies) == pytest.approx(
            brute_force_bound(ens, n_copies), abs=1e-12)

    def test_monotone_in_copies_and_angle(self):
        thetas = [pi / 12, pi / 8, pi / 6, pi / 5]
        table = [[helstrom.bound_pure_multi(states.SignalEnsemble(t), n) for n in range(1, 60)]
                 for t in thetas]
        for row in table:
            assert all(b >= a for a, b in zip(row, row[1:]))
        for lower, upper in zip(table, table[1:]):
            assert all(b >= a for a, b in zip(lower, upper))


class TestOptimalMeasurement:
    """Minimum-error measurement of two density matrices"""

    def test_noisy_equal_priors(self):
        ens = states.SignalEnsemble(pi / 6)
        noise = states.NoiseModel(0.95)
        test_result = helstrom.optimal_measurement(0.5, states.make_mixed(ens, 0, noise),
                                                   states.make_mixed(ens, 1, noise))
        assert test_result.p_success == pytest.approx(0.8897114, abs=1e-7)
        assert test_result.outcome_map == (0, 1)
        assert not test_result.degenerate

    def test_pure_states_reach_bound(self):
        ens = states.SignalEnsemble(pi / 8, 0.3)
        pure = states.NoiseModel(1.0)
        test_result = helstrom.optimal_measurement(0.3, states.make_mixed(ens, 0, pure),
                                                   states.make_mixed(ens, 1, pure))
        assert test_result.p_success == pytest.approx(helstrom.bound_pure_single(ens))

    def test_degenerate_states(self):
        rho = states.Density2(0.5, 0.0, 0.5)
        test_result = helstrom.optimal_measurement(0.5, rho, rho)
        assert test_result.degenerate
        assert test_result.p_success == 0.5
        assert test_result.outcome_map == (0, 0)

    def test_degenerate_prefers_larger_prior(self):
        rho = states.Density2(0.5, 0.0, 0.5)
        test_result = helstrom.optimal_measurement(0.2, rho, rho)
        assert test_result.outcome_map == (1, 1)
        assert test_result.p_success == pytest.approx(0.8)

    def test_dominant_prior_announces_one_hypothesis(self):
        """With a lopsided prior both outcomes can favour the same hypothesis"""
        ens = states.SignalEnsemble(pi / 12)
        noise = states.NoiseModel(0.8)
        test_result = helstrom.optimal_measurement(0.95, states.make_mixed(ens, 0, noise),
                                                   states.make_mixed(ens, 1, noise))
        assert test_result.outcome_map == (0, 0)
        assert test_result.p_success == pytest.approx(0.95)

    @pytest.mark.parametrize("f", [0.6, 0.8, 0.95, 0.999, 1.0])
    def test_basis_independent_of_fidelity(self, f):
        ens = states.SignalEnsemble(pi / 6)
        noise = states.NoiseModel(f)
        test_result = helstrom.optimal_measurement(0.5, states.make_mixed(ens, 0, noise),
                                                   states.make_mixed(ens, 1, noise))
        assert test_result.basis.phi == pytest.approx(pi / 4)

    @given(st.floats(min_value=0.01, max_value=pi / 4), st.floats(min_value=0.5, max_value=1.0),
           st.floats(min_value=0.05, max_value=0.95),
           st.lists(st.floats(min_value=0.0, max_value=pi), min_size=64, max_size=64))
    @settings(max_examples=50)
    def test_beats_random_bases(self, theta, f, p0, phis):
        ens = states.SignalEnsemble(theta)
        noise = states.NoiseModel(f)
        rho0, rho1 = states.make_mixed(ens, 0, noise), states.make_mixed(ens, 1, noise)
        best = helstrom.optimal_measurement(p0, rho0, rho1).p_success
        for phi in phis:
            basis = states.MeasBasis(phi)
            p = p0 * rho0.expectation(basis.w0) + (1 - p0) * rho1.expectation(basis.w1)
            assert max(p, 1 - p) <= best + 1e-12
