"""
Majority voting over identical Helstrom measurements of the single-copy mixed states, and the
classical Chernoff exponent of the resulting error.
"""
import logging
from dataclasses import dataclass
from math import comb, exp, expm1, inf, log, sqrt
from typing import Iterable, List

import numpy as np
from scipy.special import logsumexp
from scipy.stats import binom

from .errors import UnsupportedConfigurationError
from .helstrom import optimal_measurement
from .states import NoiseModel, SignalEnsemble, make_mixed

logger = logging.getLogger(__name__)

# above this many votes the tails are accumulated in log space
EXACT_LIMIT = 60


@dataclass(frozen=True)
class VoteConfig:
    n_copies: int
    per_copy_success: float
    tie_rule: str = "fair-coin"

    def __post_init__(self):
        if self.n_copies < 1:
            raise ValueError(f"n_copies must be at least 1, got {self.n_copies}")
        if not 0.5 <= self.per_copy_success <= 1.0:
            raise ValueError(f"per copy success must lie in [1/2, 1], got {self.per_copy_success}")
        if self.tie_rule != "fair-coin":
            raise ValueError(f"unsupported tie rule {self.tie_rule!r}")


def per_copy_q(ens: SignalEnsemble, noise: NoiseModel) -> float:
    """Success probability of one Helstrom measurement on a single noisy copy"""
    if not ens.equal_priors:
        raise UnsupportedConfigurationError("majority voting is evaluated for equal priors only")
    return optimal_measurement(0.5, make_mixed(ens, 0, noise), make_mixed(ens, 1, noise)).p_success


def _exact_error(n: int, q: float) -> float:
    error = sum(comb(n, j) * q ** j * (1.0 - q) ** (n - j) for j in range((n + 1) // 2))
    if n % 2 == 0:
        error += 0.5 * comb(n, n // 2) * (q * (1.0 - q)) ** (n // 2)
    return error


def majority_log_error(cfg: VoteConfig) -> float:
    """Natural log of the voting error; stays finite where the error underflows"""
    n, q = cfg.n_copies, cfg.per_copy_success
    if q == 1.0:
        return -inf
    if n <= EXACT_LIMIT:
        return log(_exact_error(n, q))
    terms = list(binom.logpmf(np.arange((n + 1) // 2), n, q))
    if n % 2 == 0:
        terms.append(log(0.5) + float(binom.logpmf(n // 2, n, q)))
    return float(logsumexp(terms))


def majority_error(cfg: VoteConfig) -> float:
    if cfg.n_copies <= EXACT_LIMIT:
        return _exact_error(cfg.n_copies, cfg.per_copy_success)
    return exp(majority_log_error(cfg))


def majority_prob(cfg: VoteConfig) -> float:
    """
    Probability that the most common outcome names the right state, a tie counted as half a
    success.
    """
    if cfg.n_copies <= EXACT_LIMIT:
        return 1.0 - _exact_error(cfg.n_copies, cfg.per_copy_success)
    return -expm1(majority_log_error(cfg))


def voting_curve(n_max: int, ens: SignalEnsemble, noise: NoiseModel) -> List[float]:
    q = per_copy_q(ens, noise)
    return [majority_prob(VoteConfig(n, q)) for n in range(1, n_max + 1)]


def chernoff_exponent(q: float) -> float:
    """Decay rate in nats per copy for telling Bernoulli(q) from Bernoulli(1 - q)"""
    if not 0.5 <= q <= 1.0:
        raise ValueError(f"q must lie in [1/2, 1], got {q}")
    if q == 1.0:
        logger.warning("Perfect copies: the Chernoff exponent is infinite")
        return inf
    return -log(2.0 * sqrt(q * (1.0 - q)))


def fitted_exponent(q: float, n_values: Iterable[int]) -> float:
    """Least-squares slope of -ln(error) against n"""
    ns = np.array(list(n_values), dtype=float)
    logs = np.array([majority_log_error(VoteConfig(int(n), q)) for n in ns])
    slope, _ = np.polyfit(ns, -logs, 1)
    return float(slope)
