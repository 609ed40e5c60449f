"""
Seeded Monte Carlo engine sampling complete measurement trajectories for every scheme.

Trials are cut into fixed-size blocks. Block b draws from a Philox stream seeded with
SeedSequence(seed, spawn_key=(b,)), so its content depends only on the seed and its index, and
block counts are merged in block order. Aggregates are therefore identical for any number of
workers.
"""
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import inf, sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import adaptive, qdg, voting
from .curves import check_scheme, exact_value
from .helstrom import bound_pure_multi
from .metrics import BLOCKS, COPIES_CONSUMED, QDG_HERALDED, QDG_RESTARTS, TRIALS
from .states import NoiseModel, SignalEnsemble

logger = logging.getLogger(__name__)

BLOCK_SIZE = 65536
SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class TrialPlan:
    scheme: str
    ensemble: SignalEnsemble
    noise: NoiseModel
    n_copies: int
    trials: int
    seed: int
    workers: int = 1
    budget_factor: int = 4

    def __post_init__(self):
        check_scheme(self.scheme)
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.n_copies < 1:
            raise ValueError(f"n_copies must be at least 1, got {self.n_copies}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.budget_factor < 1:
            raise ValueError(f"budget factor must be at least 1, got {self.budget_factor}")

    @property
    def budget(self) -> int:
        return self.budget_factor * self.n_copies


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    std_err: float
    trials: int

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "Estimate":
        p_hat = successes / trials
        return cls(p_hat=p_hat, std_err=sqrt(p_hat * (1.0 - p_hat) / trials), trials=trials)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    z: float
    k_sigma: float


def compare(est: Estimate, reference: float, k_sigma: float = 3.0) -> Verdict:
    """Pass when the estimate lies within k_sigma standard errors of the reference"""
    if k_sigma <= 0:
        raise ValueError(f"k_sigma must be positive, got {k_sigma}")
    diff = est.p_hat - reference
    if est.std_err > 0:
        z = diff / est.std_err
    else:
        # all trials agree: only an exact match passes
        z = 0.0 if diff == 0 else (inf if diff > 0 else -inf)
    return Verdict(passed=abs(z) <= k_sigma, z=z, k_sigma=k_sigma)


def block_rng(seed: int, block: int) -> np.random.Generator:
    stream = np.random.SeedSequence(seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(stream))


def block_sizes(trials: int) -> List[int]:
    full, rest = divmod(trials, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _hypotheses(ens: SignalEnsemble, rng: np.random.Generator, size: int) -> np.ndarray:
    return (rng.random(size) >= ens.prior0).astype(int)


def _majority(ones: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    coin = (rng.random(ones.size) < 0.5).astype(int)
    return np.where(2 * ones > n, 1, np.where(2 * ones < n, 0, coin))


def _adaptive_block(plan: TrialPlan, rng: np.random.Generator, size: int) -> Dict[str, int]:
    ens, noise = plan.ensemble, plan.noise
    k = _hypotheses(ens, rng, size)
    last = np.zeros(size, dtype=int)
    ones = np.zeros(size, dtype=int)
    for n in range(1, plan.n_copies + 1):
        table = adaptive.step_table(n, ens, noise)
        outcome = (rng.random(size) >= table[k, last]).astype(int)
        ones += outcome
        last = outcome
    if plan.scheme == "adaptive-majority":
        decision = _majority(ones, plan.n_copies, rng)
    else:
        decision = last
    return {"successes": int((decision == k).sum())}


def _bayes_block(plan: TrialPlan, rng: np.random.Generator, size: int) -> Dict[str, int]:
    ens, noise = plan.ensemble, plan.noise
    k = _hypotheses(ens, rng, size)
    w0 = np.full(size, ens.prior0)
    w1 = np.full(size, ens.prior1)
    for _ in range(plan.n_copies):
        q0, q1 = adaptive.posterior_basis_probs(w0, w1, ens, noise)
        zero = rng.random(size) < np.where(k == 0, q0, q1)
        w0 = w0 * np.where(zero, q0, 1.0 - q0)
        w1 = w1 * np.where(zero, q1, 1.0 - q1)
        total = w0 + w1
        w0, w1 = w0 / total, w1 / total
    coin = (rng.random(size) < 0.5).astype(int)
    decision = np.where(w0 > w1, 0, np.where(w1 > w0, 1, coin))
    return {"successes": int((decision == k).sum())}


def _voting_block(plan: TrialPlan, rng: np.random.Generator, size: int) -> Dict[str, int]:
    q = voting.per_copy_q(plan.ensemble, plan.noise)
    correct = rng.binomial(plan.n_copies, q, size)
    n = plan.n_copies
    coin = rng.random(size) < 0.5
    success = np.where(2 * correct > n, True, np.where(2 * correct < n, False, coin))
    return {"successes": int(success.sum())}


def _qdg_block(plan: TrialPlan, rng: np.random.Generator, size: int) -> Dict[str, int]:
    postselect = plan.scheme == "qdg-postselect"
    result = qdg.sample_probe_chain(plan.n_copies, plan.ensemble, plan.noise, rng, size,
                                    postselect=postselect,
                                    budget=plan.budget if postselect else None)
    return {"successes": int(result["success"].sum()),
            "copies": int(result["copies"].sum()),
            "restarts": int(result["restarts"].sum()),
            "heralded": int(result["heralded"].sum())}


def _helstrom_pure_block(plan: TrialPlan, rng: np.random.Generator,
                         size: int) -> Dict[str, int]:
    p = bound_pure_multi(plan.ensemble, plan.n_copies)
    return {"successes": int((rng.random(size) < p).sum())}


SAMPLERS = {
    "adaptive": _adaptive_block,
    "adaptive-majority": _adaptive_block,
    "bayes": _bayes_block,
    "qdg": _qdg_block,
    "qdg-postselect": _qdg_block,
    "voting": _voting_block,
    "helstrom-pure": _helstrom_pure_block,
}


def sample_block(plan: TrialPlan, block: int, size: int) -> Dict[str, int]:
    """Sample one block of trials; runs in a worker process when workers > 1"""
    counts = SAMPLERS[plan.scheme](plan, block_rng(plan.seed, block), size)
    counts["trials"] = size
    return counts


class Simulator:
    def __init__(self, plan: TrialPlan) -> None:
        self.plan = plan
        self.totals: Dict[str, int] = {}

    async def run(self) -> Estimate:
        """Run every block, in worker processes when requested, and merge in block order"""
        sizes = block_sizes(self.plan.trials)
        logger.info(f"Sampling {self.plan.trials} trials of '{self.plan.scheme}' "
                    f"in {len(sizes)} blocks on {self.plan.workers} worker(s)")
        if self.plan.workers == 1:
            results = [sample_block(self.plan, b, size) for b, size in enumerate(sizes)]
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=self.plan.workers) as executor:
                futures = [loop.run_in_executor(executor, sample_block, self.plan, b, size)
                           for b, size in enumerate(sizes)]
                results = await asyncio.gather(*futures)
        self.totals = {}
        for counts in results:
            self.record_block(counts)
            for key, value in counts.items():
                self.totals[key] = self.totals.get(key, 0) + value
        estimate = Estimate.from_counts(self.totals["successes"], self.totals["trials"])
        logger.debug(f"Estimate for '{self.plan.scheme}': {estimate}")
        return estimate

    def record_block(self, counts: Dict[str, int]) -> None:
        scheme = {"scheme": self.plan.scheme}
        TRIALS.add(scheme, counts["trials"])
        BLOCKS.inc(scheme)
        if self.plan.scheme == "qdg-postselect":
            QDG_RESTARTS.add(scheme, counts["restarts"])
            QDG_HERALDED.add(scheme, counts["heralded"])
            COPIES_CONSUMED.observe(scheme, counts["copies"] / counts["trials"])


def run(plan: TrialPlan) -> Estimate:
    return asyncio.run(Simulator(plan).run())


def run_with_totals(plan: TrialPlan) -> Tuple[Estimate, Dict[str, int]]:
    simulator = Simulator(plan)
    estimate = asyncio.run(simulator.run())
    return estimate, simulator.totals


def exact_reference(plan: TrialPlan, bayes_cap: int = adaptive.BAYES_CAP) -> Optional[float]:
    """Exact success probability the Monte Carlo estimate should reproduce, if one exists"""
    return exact_value(plan.scheme, plan.ensemble, plan.noise, plan.n_copies, bayes_cap)
