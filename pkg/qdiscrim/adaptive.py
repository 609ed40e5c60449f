"""
Local adaptive (Markovian) discrimination of the noisy signal states.

The scheme is the one that reaches the multiple-copy Helstrom bound for pure states: the first
copy is measured in the single-copy Helstrom basis, every later copy in a basis fixed by the
step number and the previous outcome only, and the announced hypothesis is the final outcome.
Here it is applied, unchanged, to the mixed states produced by preparation noise.

Success probabilities are available three ways which must agree for equal priors: an exact
forward pass over the Markov chain (any priors), the one-step recursion and its closed form.
"""
import logging
from dataclasses import dataclass, field
from math import sqrt
from typing import List, Optional, Tuple

import numpy as np

from .errors import (DegenerateAngleError, EnumerationCapError, NonCommutingLimitError,
                     UnsupportedConfigurationError)
from .states import MeasBasis, NoiseModel, SignalEnsemble, make_mixed

logger = logging.getLogger(__name__)

# below this the grouped geometric-series denominators are summed term by term instead
SERIES_GUARD = 1e-8
BAYES_CAP = 20


@dataclass(frozen=True)
class AdaptivePolicy:
    """Measurement angles of the Markovian scheme for a fixed number of copies"""
    n_copies: int
    ensemble: SignalEnsemble

    def angle(self, step: int, prev: Optional[int]) -> MeasBasis:
        if step > self.n_copies:
            raise ValueError(f"step {step} beyond the {self.n_copies} copies of this policy")
        return markov_angle(step, prev, self.ensemble)


@dataclass
class ChainDistribution:
    """Per-hypothesis distribution of the last outcome after `step` copies"""
    step: int
    last: List[List[float]] = field(default_factory=lambda: [[1.0, 0.0], [0.0, 1.0]])

    def check(self) -> None:
        for k, dist in enumerate(self.last):
            if abs(sum(dist) - 1.0) > 1e-12:
                raise ValueError(f"distribution for hypothesis {k} sums to {sum(dist)}")


def markov_angle(n: int, prev: Optional[int], ens: SignalEnsemble) -> MeasBasis:
    """
    Basis for copy n given the previous outcome.

    For n = 1 this is the eigenbasis of p0|psi_0><psi_0| - p1|psi_1><psi_1|. For n >= 2,
    cos(2 phi) = (-1)^prev cos(2 theta) sqrt(R_{n-1} / R_n) and
    sin(2 phi) = sin(2 theta) / sqrt(R_n)
    with R_m = 1 - 4 p0 p1 cos^{2m}(2 theta); this is the eigenbasis of the posterior-weighted
    difference of the pure states after the optimal measurement of n - 1 copies.
    """
    if n < 1:
        raise ValueError(f"step must be at least 1, got {n}")
    if (n == 1) != (prev is None):
        raise ValueError("previous outcome must be given exactly for steps after the first")
    c2, s2 = ens.cos2, ens.sin2
    weight = 4.0 * ens.prior0 * ens.prior1
    r_n = 1.0 - weight * c2 ** (2 * n)
    if r_n <= 1e-300:
        raise DegenerateAngleError(
            "identical signal states with equal priors: the adaptive measurement is ill-defined")
    if n == 1:
        cos2phi = (ens.prior0 - ens.prior1) * c2 / sqrt(r_n)
    else:
        r_prev = 1.0 - weight * c2 ** (2 * n - 2)
        sign = -1.0 if prev else 1.0
        cos2phi = sign * c2 * sqrt(r_prev / r_n)
    return MeasBasis.from_cos2(cos2phi, s2 / sqrt(r_n))


def noisy_outcome_prob(basis: MeasBasis, k: int, ens: SignalEnsemble,
                       noise: NoiseModel) -> Tuple[float, float]:
    """Probabilities of outcomes 0 and 1 when the noisy state k is measured in `basis`"""
    g = noise.contrast
    sign_k = -1.0 if k else 1.0
    p0 = 0.5 * (1.0 + g * ens.cos2 * basis.cos2 + g * sign_k * ens.sin2 * basis.sin2)
    return p0, 1.0 - p0


def step_table(n: int, ens: SignalEnsemble, noise: NoiseModel) -> np.ndarray:
    """
    Probability of outcome 0 at copy n, indexed [k, prev]. At n = 1 both prev columns hold the
    first-copy value.
    """
    table = np.empty((2, 2))
    for prev in (0, 1):
        basis = markov_angle(n, None if n == 1 else prev, ens)
        for k in (0, 1):
            table[k, prev] = noisy_outcome_prob(basis, k, ens, noise)[0]
    return table


def success_dp_curve(n_max: int, ens: SignalEnsemble, noise: NoiseModel) -> List[float]:
    """Exact success probability for N = 1..n_max from one forward pass over the chain"""
    if n_max < 1:
        raise ValueError(f"n_copies must be at least 1, got {n_max}")
    priors = (ens.prior0, ens.prior1)
    curve = []
    chain = ChainDistribution(step=0)
    for n in range(1, n_max + 1):
        table = step_table(n, ens, noise)
        updated = []
        for k in (0, 1):
            if n == 1:
                p0 = table[k, 0]
                updated.append([p0, 1.0 - p0])
            else:
                last = chain.last[k]
                p0 = last[0] * table[k, 0] + last[1] * table[k, 1]
                updated.append([p0, last[0] + last[1] - p0])
        chain = ChainDistribution(step=n, last=updated)
        chain.check()
        curve.append(sum(priors[k] * chain.last[k][k] for k in (0, 1)))
    return curve


def success_dp(n_copies: int, ens: SignalEnsemble, noise: NoiseModel) -> float:
    return success_dp_curve(n_copies, ens, noise)[-1]


def _require_equal_priors(ens: SignalEnsemble, what: str) -> None:
    if not ens.equal_priors:
        raise UnsupportedConfigurationError(
            f"{what} is only valid for equal priors; use success_dp for p0={ens.prior0}")


def _geometric(ratio: float, terms: int) -> float:
    """sum_{i=0}^{terms-1} ratio^i"""
    if abs(1.0 - ratio) < SERIES_GUARD:
        return float(sum(ratio ** i for i in range(terms)))
    return (1.0 - ratio ** terms) / (1.0 - ratio)


def series_s(n_copies: int, theta_cos2: float, contrast: float) -> float:
    """The series S_N of the closed form, grouped into two geometric progressions"""
    g, c_sq = contrast, theta_cos2 ** 2
    if abs(1.0 - g * c_sq) < SERIES_GUARD or abs(1.0 - c_sq) < SERIES_GUARD:
        return float(sum(g ** (n_copies + 1 - i) * (1.0 - g ** (i - 1)) * c_sq ** (n_copies - i)
                         for i in range(1, n_copies + 1)))
    return (g * _geometric(g * c_sq, n_copies)
            - g ** n_copies * _geometric(c_sq, n_copies))


def success_closed(n_copies: int, ens: SignalEnsemble, noise: NoiseModel) -> float:
    """Closed-form success probability (equal priors)"""
    _require_equal_priors(ens, "the closed form")
    if n_copies < 1:
        raise ValueError(f"n_copies must be at least 1, got {n_copies}")
    c2, g = ens.cos2, noise.contrast
    root = sqrt(max(1.0 - c2 ** (2 * n_copies), 0.0))
    if root == 0.0:
        logger.warning("theta=0: closed form evaluated as 1/2 by continuity")
        return 0.5
    s_n = series_s(n_copies, c2, g)
    return 0.5 * (1.0 + g ** n_copies * root + ens.sin2 ** 2 / root * s_n)


def success_recursion_curve(n_max: int, ens: SignalEnsemble, noise: NoiseModel) -> List[float]:
    """Iterates the one-step recursion from the exact single-copy value (equal priors)"""
    _require_equal_priors(ens, "the recursion")
    c2, s2, g = ens.cos2, ens.sin2, noise.contrast
    if c2 >= 1.0:
        logger.warning("theta=0: recursion evaluated as 1/2 by continuity")
        return [0.5] * n_max
    p = 0.5 * (1.0 + g * s2)
    curve = [p]
    for n in range(2, n_max + 1):
        r_n = sqrt(1.0 - c2 ** (2 * n))
        r_prev = sqrt(1.0 - c2 ** (2 * n - 2))
        p = 0.5 * (1.0 + g * s2 * s2 / r_n + g * c2 * c2 * r_prev / r_n * (2.0 * p - 1.0))
        curve.append(p)
    return curve


def success_recursion(n_copies: int, ens: SignalEnsemble, noise: NoiseModel) -> float:
    return success_recursion_curve(n_copies, ens, noise)[-1]


def success_noiseless_recursion(n_copies: int, ens: SignalEnsemble) -> float:
    """The perfect-fidelity recursion, whose solution is the multiple-copy Helstrom bound"""
    return success_recursion(n_copies, ens, NoiseModel(1.0))


def asymptotic_limit(theta: float, noise: NoiseModel) -> float:
    """Common many-copy success probability 1 - (1-F) / (1 - (2F-1) cos^2(2 theta))"""
    if theta == 0.0 and noise.fidelity == 1.0:
        raise NonCommutingLimitError(
            "theta=0 and F=1: the many-copy limit and the identical-state limit do not commute")
    c_sq = np.cos(2 * theta) ** 2
    return float(1.0 - (1.0 - noise.fidelity) / (1.0 - noise.contrast * c_sq))


def conditional_check_probs(theta: float, noise: NoiseModel) -> Tuple[float, float]:
    """
    Probabilities of confirming hypothesis a when a was sent, given the previous outcome was a
    (first value) or the other hypothesis (second value), in the fully biased regime.
    """
    c_sq = np.cos(2 * theta) ** 2
    return noise.fidelity, float(noise.fidelity - c_sq * noise.contrast)


def hypothesis_check_step(p_prev: float, theta: float, noise: NoiseModel) -> float:
    if not 0.0 <= p_prev <= 1.0:
        raise ValueError(f"p_prev must be a probability, got {p_prev}")
    same, other = conditional_check_probs(theta, noise)
    return same * p_prev + other * (1.0 - p_prev)


def hypothesis_check_iterate(p_start: float, theta: float, noise: NoiseModel,
                             steps: int) -> float:
    """Closed form of `steps` applications of hypothesis_check_step"""
    rate = float(np.cos(2 * theta) ** 2 * noise.contrast)
    _, other = conditional_check_probs(theta, noise)
    return rate ** steps * p_start + other * _geometric(rate, steps)


def _record_majority_pass(n_max: int, ens: SignalEnsemble,
                          noise: NoiseModel) -> List[Tuple[float, float]]:
    """
    (success, failure) probabilities when the full adaptive record is decided by majority,
    N = 1..n_max. Both are accumulated directly so that tiny failures keep their precision.

    The forward pass tracks, per hypothesis, the joint distribution of (last outcome, number of
    1 outcomes); ties are credited half to each hypothesis.
    """
    if n_max < 1:
        raise ValueError(f"n_copies must be at least 1, got {n_max}")
    priors = (ens.prior0, ens.prior1)
    # dist[k][last, ones]
    dist = [np.zeros((2, n_max + 1)) for _ in (0, 1)]
    curve = []
    for n in range(1, n_max + 1):
        table = step_table(n, ens, noise)
        for k in (0, 1):
            if n == 1:
                dist[k][0, 0] = table[k, 0]
                dist[k][1, 1] = 1.0 - table[k, 0]
                continue
            old = dist[k]
            new = np.zeros_like(old)
            for prev in (0, 1):
                p0 = table[k, prev]
                new[0, :] += old[prev, :] * p0
                new[1, 1:] += old[prev, :-1] * (1.0 - p0)
            dist[k] = new
        ones = np.arange(n_max + 1)
        credit0 = np.where(2 * ones < n, 1.0, np.where(2 * ones == n, 0.5, 0.0))
        credit0[n + 1:] = 0.0
        credit1 = np.where(ones <= n, 1.0 - credit0, 0.0)
        totals = (dist[0].sum(axis=0), dist[1].sum(axis=0))
        success = priors[0] * float(totals[0] @ credit0) + priors[1] * float(totals[1] @ credit1)
        failure = priors[0] * float(totals[0] @ credit1) + priors[1] * float(totals[1] @ credit0)
        curve.append((success, failure))
    return curve


def record_majority_curve(n_max: int, ens: SignalEnsemble, noise: NoiseModel) -> List[float]:
    return [success for success, _ in _record_majority_pass(n_max, ens, noise)]


def record_majority_error_curve(n_max: int, ens: SignalEnsemble,
                                noise: NoiseModel) -> List[float]:
    return [failure for _, failure in _record_majority_pass(n_max, ens, noise)]


def record_majority_dp(n_copies: int, ens: SignalEnsemble, noise: NoiseModel) -> float:
    return record_majority_curve(n_copies, ens, noise)[-1]


def posterior_basis_probs(w0: np.ndarray, w1: np.ndarray, ens: SignalEnsemble,
                          noise: NoiseModel) -> Tuple[np.ndarray, np.ndarray]:
    """
    For unnormalised posterior weights (w0, w1), measure in the eigenbasis of
    w0*rho0 - w1*rho1 and return the probability of outcome 0 under rho0 and under rho1.
    """
    rho0, rho1 = make_mixed(ens, 0, noise), make_mixed(ens, 1, noise)
    a = w0 * rho0.m00 - w1 * rho1.m00
    b = w0 * rho0.m01 - w1 * rho1.m01
    c = w0 * rho0.m11 - w1 * rho1.m11
    phi = 0.5 * np.arctan2(2.0 * b, a - c)
    v0, v1 = np.cos(phi), np.sin(phi)
    p0_given0 = rho0.m00 * v0 * v0 + 2.0 * rho0.m01 * v0 * v1 + rho0.m11 * v1 * v1
    p0_given1 = rho1.m00 * v0 * v0 + 2.0 * rho1.m01 * v0 * v1 + rho1.m11 * v1 * v1
    return p0_given0, p0_given1


def bayes_curve(n_max: int, ens: SignalEnsemble, noise: NoiseModel,
                cap: int = BAYES_CAP) -> List[float]:
    """
    Exact success probability of full-record Bayesian updating, N = 1..n_max, by enumerating
    every measurement record. Each copy is measured in the Helstrom basis of the current
    mixed-state posterior and the final decision is the larger posterior.
    """
    if n_max > cap:
        raise EnumerationCapError(
            f"{n_max} copies exceeds the enumeration cap of {cap}; "
            f"use the Monte Carlo 'bayes' scheme in qdiscrim.sim instead")
    if n_max < 1:
        raise ValueError(f"n_copies must be at least 1, got {n_max}")
    w0 = np.array([ens.prior0])
    w1 = np.array([ens.prior1])
    curve = []
    for n in range(1, n_max + 1):
        q0, q1 = posterior_basis_probs(w0, w1, ens, noise)
        w0 = np.concatenate((w0 * q0, w0 * (1.0 - q0)))
        w1 = np.concatenate((w1 * q1, w1 * (1.0 - q1)))
        curve.append(float(np.maximum(w0, w1).sum()))
        logger.debug(f"Bayes enumeration step {n}: {w0.size} records")
    return curve


def bayes_full_record(n_copies: int, ens: SignalEnsemble, noise: NoiseModel,
                      cap: int = BAYES_CAP) -> float:
    return bayes_curve(n_copies, ens, noise, cap)[-1]
