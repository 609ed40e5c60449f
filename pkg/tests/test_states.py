"""
Unit tests for states.py. Uses pytest framework and hypothesis for the randomised identities.
"""
from math import acos, cos, pi, sin, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from .context import qdiscrim

states = qdiscrim.states

thetas = st.floats(min_value=0.0, max_value=pi / 4, allow_nan=False)
deltas = st.floats(min_value=-pi, max_value=pi, allow_nan=False)
fidelities = st.floats(min_value=0.5, max_value=1.0, allow_nan=False)
labels = st.sampled_from([0, 1])


class TestValueTypes:
    """Construction and validation of the state value types"""

    def test_ensemble_rejects_bad_angle(self):
        with pytest.raises(ValueError):
            states.SignalEnsemble(pi / 2)

    def test_ensemble_rejects_bad_prior(self):
        with pytest.raises(ValueError):
            states.SignalEnsemble(pi / 6, prior0=1.5)

    def test_noise_rejects_low_fidelity(self):
        with pytest.raises(ValueError):
            states.NoiseModel(0.4)

    def test_noise_moments(self):
        noise = states.NoiseModel(0.95)
        assert noise.mean_cos_sq == 0.95
        assert noise.mean_sin_sq == pytest.approx(0.05)
        assert noise.contrast == pytest.approx(0.9)
        assert noise.mean_sin_2delta == 0.0

    def test_pure_state_must_be_normalised(self):
        with pytest.raises(ValueError):
            states.PureState2(1.0, 0.5)

    def test_density_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            states.Density2(0.7, 0.0, 0.7)

    def test_density_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            states.Density2(0.5, 0.6, 0.5)

    def test_make_pure_rejects_label(self):
        with pytest.raises(ValueError):
            states.make_pure(states.SignalEnsemble(pi / 6), 2)


class TestSignalStates:
    """Signal states, their orthogonal partners and the noisy mixtures"""

    def test_overlap_is_cos_2theta(self):
        ens = states.SignalEnsemble(pi / 6)
        psi0, psi1 = states.make_pure(ens, 0), states.make_pure(ens, 1)
        assert states.overlap(psi0, psi1) == pytest.approx(0.5, abs=1e-15)

    def test_orthogonal_partner(self):
        ens = states.SignalEnsemble(pi / 6)
        for k in (0, 1):
            psi = states.make_pure(ens, k)
            perp = states.orthogonal(psi, k)
            assert states.overlap(psi, perp) == pytest.approx(0.0, abs=1e-15)
            assert perp.amp0 == pytest.approx(sin(pi / 6))

    @given(thetas, deltas, labels)
    @settings(max_examples=200)
    def test_rotation_identity(self, theta, delta, k):
        """A displaced state is cos(delta)|psi_k> - sin(delta)|psi_k_perp>"""
        ens = states.SignalEnsemble(theta)
        psi = states.make_pure(ens, k)
        perp = states.orthogonal(psi, k)
        test_result = states.rotated_pure(ens, k, delta)
        assert test_result.amp0 == pytest.approx(cos(delta) * psi.amp0 - sin(delta) * perp.amp0,
                                                 abs=1e-12)
        assert test_result.amp1 == pytest.approx(cos(delta) * psi.amp1 - sin(delta) * perp.amp1,
                                                 abs=1e-12)

    @given(thetas, fidelities, labels)
    @settings(max_examples=200)
    def test_mixed_equals_displacement_average(self, theta, f, k):
        ens = states.SignalEnsemble(theta)
        noise = states.NoiseModel(f)
        spread = acos(sqrt(f))
        averaged = states.average_rotated(ens, k, (spread, -spread), (0.5, 0.5))
        target = states.make_mixed(ens, k, noise)
        assert averaged.m00 == pytest.approx(target.m00, abs=1e-10)
        assert averaged.m01 == pytest.approx(target.m01, abs=1e-10)
        assert averaged.m11 == pytest.approx(target.m11, abs=1e-10)

    def test_mixed_fixed_point(self):
        rho = states.make_mixed(states.SignalEnsemble(pi / 6), 1, states.NoiseModel(0.5))
        assert (rho.m00, rho.m01, rho.m11) == pytest.approx((0.5, 0.0, 0.5), abs=1e-15)

    def test_mixed_weight_on_signal(self):
        ens = states.SignalEnsemble(pi / 8)
        rho = states.make_mixed(ens, 0, states.NoiseModel(0.9))
        psi = states.make_pure(ens, 0)
        assert rho.expectation((psi.amp0, psi.amp1)) == pytest.approx(0.9)


class TestMeasurement:
    """Bases, Born probabilities and the closed-form eigen solve"""

    @given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=-0.5, max_value=0.5),
           st.floats(min_value=-1.0, max_value=1.0))
    def test_symmetric_eigen_matches_numpy(self, m00, m01, m11):
        lam_hi, lam_lo, phi = states.symmetric_eigen(m00, m01, m11)
        expected = np.linalg.eigvalsh(np.array([[m00, m01], [m01, m11]]))
        assert lam_lo == pytest.approx(expected[0], abs=1e-12)
        assert lam_hi == pytest.approx(expected[1], abs=1e-12)
        vec = np.array([cos(phi), sin(phi)])
        residual = np.array([[m00, m01], [m01, m11]]) @ vec - lam_hi * vec
        assert np.abs(residual).max() < 1e-9

    @given(st.floats(min_value=-pi, max_value=pi))
    def test_basis_from_cos2(self, phi):
        basis = states.MeasBasis(phi)
        test_result = states.MeasBasis.from_cos2(basis.cos2, basis.sin2)
        assert test_result.cos2 == pytest.approx(basis.cos2, abs=1e-12)
        assert test_result.sin2 == pytest.approx(basis.sin2, abs=1e-12)

    def test_basis_vectors_orthonormal(self):
        basis = states.MeasBasis(0.3)
        w0, w1 = basis.w0, basis.w1
        assert w0[0] * w1[0] + w0[1] * w1[1] == pytest.approx(0.0, abs=1e-15)

    @given(thetas, fidelities, labels, st.floats(min_value=0.0, max_value=pi))
    def test_outcome_probs_normalised(self, theta, f, k, phi):
        rho = states.make_mixed(states.SignalEnsemble(theta), k, states.NoiseModel(f))
        p0, p1 = states.outcome_probs(rho, states.MeasBasis(phi))
        assert p0 + p1 == pytest.approx(1.0)
        assert -1e-12 <= p0 <= 1.0 + 1e-12
