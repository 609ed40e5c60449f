"""
Quantum data gathering: a single probe qubit interacts with each copy in turn and is measured once.

The probe state after n copies is tracked three independent ways:

 - the explicit two-qubit unitary U_n applied to (fresh copy) x (probe) followed by a partial
   trace over the copy (the oracle, used as ground truth),
 - the Kraus-averaged update of the coefficients (A_n, B_n) in the probe's natural basis,
 - the closed forms for A_N and B_N.

The probe's natural basis after n copies is |psi^(n)_k> = cos(theta_n)|0> + (-1)^k sin(theta_n)|1>
with cos(2 theta_n) = cos^n(2 theta), and |psi^(n)_k_perp> follows the sign convention of
qdiscrim.states. The probe density matrix is written
A |psi^(n)_k><psi^(n)_k| + (1 - A) |perp><perp| + B (|psi^(n)_k><perp| + |perp><psi^(n)_k|).
"""
import logging
from dataclasses import dataclass
from math import acos, cos, sin, sqrt
from typing import List, Optional, Tuple

import numpy as np

from .errors import IllDefinedProtocolError, UnsupportedConfigurationError
from .states import Density2, NoiseModel, SignalEnsemble, TOL, make_mixed, rotated_pure

logger = logging.getLogger(__name__)

ROUTES = ("oracle", "kraus", "closed")
SERIES_GUARD = 1e-8


@dataclass(frozen=True)
class ProbeCoeffs:
    a: float
    b: float
    step: int
    k: int = 0

    def __post_init__(self):
        if (self.a - 0.5) ** 2 + self.b ** 2 > 0.25 + TOL:
            raise ValueError(f"probe coefficients a={self.a}, b={self.b} are not a valid state")


@dataclass(frozen=True)
class ProbeBasis:
    n: int
    theta_n: float
    cos2n: float
    sin2n: float

    def state(self, k: int) -> Tuple[float, float]:
        sign = -1.0 if k else 1.0
        return cos(self.theta_n), sign * sin(self.theta_n)

    def perp(self, k: int) -> Tuple[float, float]:
        sign = -1.0 if k else 1.0
        return sin(self.theta_n), -sign * cos(self.theta_n)


@dataclass(frozen=True)
class TwoQubitUnitary:
    """Real orthogonal 4x4 matrix on |s a>, s the copy and a the probe, index 2*s + a"""
    matrix: np.ndarray
    n: int

    def __post_init__(self):
        deviation = np.abs(self.matrix.T @ self.matrix - np.eye(4)).max()
        if deviation > TOL:
            raise ValueError(f"U_{self.n} deviates from orthogonality by {deviation}")


@dataclass(frozen=True)
class PostselectOutcome:
    success: int
    copies_consumed: int
    restarts: int
    heralded_failure: bool


def probe_basis(n: int, theta: float) -> ProbeBasis:
    if n < 1:
        raise ValueError(f"probe step must be at least 1, got {n}")
    overlap = cos(2 * theta) ** n
    cos_theta_n = sqrt(0.5 * (1.0 + overlap))
    return ProbeBasis(n=n, theta_n=acos(min(cos_theta_n, 1.0)), cos2n=overlap,
                      sin2n=sqrt(max(1.0 - overlap * overlap, 0.0)))


def _half_angles(n: int, theta: float) -> Tuple[float, float]:
    """(cos theta_n, sin theta_n) computed without going through the angle"""
    overlap = cos(2 * theta) ** n
    return sqrt(0.5 * (1.0 + overlap)), sqrt(max(0.5 * (1.0 - overlap), 0.0))


def _require_distinct(theta: float) -> None:
    if theta <= 0.0:
        raise IllDefinedProtocolError(
            "theta=0: the data gathering unitary would have to map orthogonal states onto the "
            "same state")


def build_unitary(n: int, theta: float) -> TwoQubitUnitary:
    """
    U_n merging copy n into a probe that has absorbed n - 1 copies, so that
    U_n |psi_k>|psi^(n-1)_k> = |0>|psi^(n)_k>.
    """
    if n < 2:
        raise ValueError(f"the interaction unitary starts at n=2 (n=1 is a SWAP), got {n}")
    _require_distinct(theta)
    c, s = cos(theta), sin(theta)
    cp, sp = _half_angles(n - 1, theta)
    cn, sn = _half_angles(n, theta)
    u = np.zeros((4, 4))
    # columns |00>, |01>, |10>, |11>
    u[:, 0] = (c * cp / cn, 0.0, s * sp / cn, 0.0)
    u[:, 1] = (0.0, c * sp / sn, 0.0, -s * cp / sn)
    u[:, 2] = (0.0, s * cp / sn, 0.0, c * sp / sn)
    u[:, 3] = (s * sp / cn, 0.0, -c * cp / cn, 0.0)
    return TwoQubitUnitary(matrix=u, n=n)


def kraus_operators(n: int, ens: SignalEnsemble, k: int,
                    delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """M_{i,k} = <i|_S U_n |psi~_k>_S for a copy displaced by `delta`, acting on the probe"""
    u = build_unitary(n, ens.theta).matrix.reshape(2, 2, 2, 2)
    copy = rotated_pure(ens, k, delta)
    vec = np.array([copy.amp0, copy.amp1])
    ops = np.einsum("iajb,j->iab", u, vec)
    return ops[0], ops[1]


def _as_array(rho: Density2) -> np.ndarray:
    return np.array(rho.as_rows())


def oracle_pre_trace(rho_probe: Density2, n: int, ens: SignalEnsemble, k: int,
                     noise: NoiseModel) -> np.ndarray:
    """Joint 4x4 state of (copy, probe) after U_n, before the copy is discarded"""
    u = build_unitary(n, ens.theta).matrix
    joint = np.kron(_as_array(make_mixed(ens, k, noise)), _as_array(rho_probe))
    return u @ joint @ u.T


def resource_outcome_probs(joint: np.ndarray) -> Tuple[float, float]:
    """Probabilities of finding the copy in |0> and |1> after the interaction"""
    blocks = joint.reshape(2, 2, 2, 2)
    p1 = float(np.trace(blocks[1, :, 1, :]))
    return 1.0 - p1, p1


def _density(matrix: np.ndarray) -> Density2:
    return Density2(float(matrix[0, 0]), float(0.5 * (matrix[0, 1] + matrix[1, 0])),
                    float(matrix[1, 1]))


def oracle_step(rho_probe: Density2, n: int, ens: SignalEnsemble, noise: NoiseModel,
                k: int = 0) -> Density2:
    """Probe state after interacting with copy n of the noisy state k"""
    joint = oracle_pre_trace(rho_probe, n, ens, k, noise)
    probe = np.einsum("sasb->ab", joint.reshape(2, 2, 2, 2))
    return _density(probe)


def oracle_chain(n_max: int, ens: SignalEnsemble, noise: NoiseModel,
                 k: int = 0) -> List[Density2]:
    """Probe states after 1..n_max copies; the first copy is swapped in"""
    rho = make_mixed(ens, k, noise)
    chain = [rho]
    for n in range(2, n_max + 1):
        rho = oracle_step(rho, n, ens, noise, k)
        chain.append(rho)
    return chain


def coeffs_from_state(rho: Density2, n: int, theta: float, k: int = 0) -> ProbeCoeffs:
    basis = probe_basis(n, theta)
    q, q_perp = basis.state(k), basis.perp(k)
    return ProbeCoeffs(a=rho.expectation(q), b=rho.coherence(q, q_perp), step=n, k=k)


def kraus_step(coeffs: ProbeCoeffs, ens: SignalEnsemble, noise: NoiseModel) -> ProbeCoeffs:
    """Noise-averaged update of (A, B) when the probe absorbs one more copy"""
    if coeffs.step < 1:
        raise ValueError(f"probe step must be at least 1, got {coeffs.step}")
    _require_distinct(ens.theta)
    n = coeffs.step + 1
    g, c2, s2 = noise.contrast, ens.cos2, ens.sin2
    prev, new = probe_basis(n - 1, ens.theta), probe_basis(n, ens.theta)
    a = noise.fidelity - (1.0 - coeffs.a) * g * c2 * c2
    b = (g * c2 * prev.sin2n / new.sin2n * coeffs.b
         - (1.0 - coeffs.a) * g * s2 * s2 * new.cos2n / new.sin2n)
    return ProbeCoeffs(a=a, b=b, step=n, k=coeffs.k)


def kraus_chain(n_max: int, ens: SignalEnsemble, noise: NoiseModel,
                k: int = 0) -> List[ProbeCoeffs]:
    coeffs = ProbeCoeffs(a=noise.fidelity, b=0.0, step=1, k=k)
    chain = [coeffs]
    for _ in range(2, n_max + 1):
        coeffs = kraus_step(coeffs, ens, noise)
        chain.append(coeffs)
    return chain


def _geometric(ratio: float, terms: int) -> float:
    """sum_{i=0}^{terms-1} ratio^i"""
    if terms <= 0:
        return 0.0
    if abs(1.0 - ratio) < SERIES_GUARD:
        return float(sum(ratio ** i for i in range(terms)))
    return (1.0 - ratio ** terms) / (1.0 - ratio)


def closed_a(n: int, ens: SignalEnsemble, noise: NoiseModel) -> float:
    g, c_sq = noise.contrast, ens.cos2 ** 2
    return 1.0 - (1.0 - noise.fidelity) * _geometric(g * c_sq, n)


def closed_b(n: int, ens: SignalEnsemble, noise: NoiseModel) -> float:
    """Closed form for B_N in its summed-series shape, evaluated without simplification"""
    if n == 1:
        return 0.0
    _require_distinct(ens.theta)
    g, c2, s2 = noise.contrast, ens.cos2, ens.sin2
    basis = probe_basis(n, ens.theta)
    bracket = (_geometric(g, n - 1)
               - c2 ** (n + 1) * g ** (n - 1) * _geometric(c2 * c2, n - 1))
    return (1.0 - noise.fidelity) * s2 * s2 * c2 ** (n - 1) / basis.sin2n * bracket


def coeffs_closed(n: int, ens: SignalEnsemble, noise: NoiseModel, k: int = 0) -> ProbeCoeffs:
    if n < 1:
        raise ValueError(f"probe step must be at least 1, got {n}")
    return ProbeCoeffs(a=closed_a(n, ens, noise), b=closed_b(n, ens, noise), step=n, k=k)


def coeffs_series(n: int, ens: SignalEnsemble, noise: NoiseModel) -> Tuple[float, float]:
    """A_N and B_N from the explicit sums, before the geometric series are evaluated"""
    f, g, c2, s2 = noise.fidelity, noise.contrast, ens.cos2, ens.sin2
    a = (f * c2 ** (2 * n - 2) * g ** (n - 1)
         + (f - g * c2 * c2) * sum(c2 ** (2 * i) * g ** i for i in range(n - 1)))
    if n == 1:
        return a, 0.0
    _require_distinct(ens.theta)
    bases = {m: probe_basis(m, ens.theta) for m in range(1, n + 1)}
    total = 0.0
    for i in range(1, n):
        term = bases[i + 1].cos2n / bases[i + 1].sin2n
        for j in range(i + 2, n + 1):
            term *= g * c2 * bases[j - 1].sin2n / bases[j].sin2n
        total += term
    return a, g * s2 * s2 * total


def two_copy_sigma_x_coefficient(ens: SignalEnsemble, noise: NoiseModel) -> float:
    """Closed-form sigma_x coefficient of the two-copy probe state"""
    _require_distinct(ens.theta)
    c2, s2 = ens.cos2, ens.sin2
    return (1.0 - noise.fidelity) * c2 * c2 * s2 * s2 / probe_basis(2, ens.theta).sin2n ** 2


def helstrom_probe_vectors(n: int, theta: float,
                           k: int = 0) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """
    Final measurement vectors (correct, wrong) for a probe prepared from state k: the
    eigenvectors of |psi^(n)_0><psi^(n)_0| - |psi^(n)_1><psi^(n)_1| with eigenvalue sign
    matching k.
    """
    basis = probe_basis(n, theta)
    q, q_perp = basis.state(k), basis.perp(k)
    hi = sqrt(0.5 * (1.0 + basis.sin2n))
    lo = sqrt(max(0.5 * (1.0 - basis.sin2n), 0.0))
    plus = (hi * q[0] - lo * q_perp[0], hi * q[1] - lo * q_perp[1])
    minus = (lo * q[0] + hi * q_perp[0], lo * q[1] + hi * q_perp[1])
    return plus, minus


def success_from_coeffs(coeffs: ProbeCoeffs, theta: float) -> float:
    basis = probe_basis(coeffs.step, theta)
    return (0.5 * (1.0 - basis.sin2n) + coeffs.a * basis.sin2n
            - coeffs.b * basis.cos2n)


def success_from_state(rho: Density2, n: int, theta: float, k: int = 0) -> float:
    plus, _ = helstrom_probe_vectors(n, theta, k)
    return rho.expectation(plus)


def _require_equal_priors(ens: SignalEnsemble) -> None:
    if not ens.equal_priors:
        raise UnsupportedConfigurationError(
            "quantum data gathering is only evaluated for equiprobable preparation (p0 = 1/2)")


def success_curve(n_max: int, ens: SignalEnsemble, noise: NoiseModel,
                  route: str = "oracle") -> List[float]:
    """Success probability of data gathering for N = 1..n_max along one evaluation route"""
    _require_equal_priors(ens)
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}, expected one of {ROUTES}")
    if route == "oracle":
        per_k = [[success_from_state(rho, n, ens.theta, k)
                  for n, rho in enumerate(oracle_chain(n_max, ens, noise, k), start=1)]
                 for k in (0, 1)]
        return [0.5 * (p0 + p1) for p0, p1 in zip(*per_k)]
    if route == "kraus":
        return [success_from_coeffs(c, ens.theta) for c in kraus_chain(n_max, ens, noise)]
    return [success_from_coeffs(coeffs_closed(n, ens, noise), ens.theta)
            for n in range(1, n_max + 1)]


def success_prob(n_copies: int, ens: SignalEnsemble, noise: NoiseModel,
                 route: str = "oracle") -> float:
    if n_copies < 1:
        raise ValueError(f"n_copies must be at least 1, got {n_copies}")
    return success_curve(n_copies, ens, noise, route)[-1]


def _batch_joint(unitary: np.ndarray, copies: np.ndarray, probes: np.ndarray) -> np.ndarray:
    """U (copy x probe) U^T for a batch of 2x2 copy and probe states"""
    joint = np.einsum("tij,tkl->tikjl", copies, probes).reshape(-1, 4, 4)
    return np.einsum("ab,tbc,dc->tad", unitary, joint, unitary)


def sample_probe_chain(n_copies: int, ens: SignalEnsemble, noise: NoiseModel,
                       rng: np.random.Generator, trials: int, postselect: bool = False,
                       budget: Optional[int] = None) -> dict:
    """
    Monte Carlo trajectories of the data gathering protocol with the copy measured in the
    computational basis after each interaction.

    Without post-selection the outcome is only recorded, so the averaged probe follows the
    unmeasured chain. With post-selection an outcome 1 discards the probe and the protocol
    restarts on the next fresh copy; a trial whose budget of copies runs out before the probe
    has absorbed n_copies copies is a heralded failure and is decided from the probe it holds.

    :returns: dict of numpy arrays: success, copies, restarts, heralded
    """
    _require_equal_priors(ens)
    if n_copies > 1:
        _require_distinct(ens.theta)
    budget = budget if budget is not None else (4 * n_copies if postselect else n_copies)
    if budget < n_copies:
        raise ValueError(f"copy budget {budget} is smaller than the {n_copies} copies needed")
    mixed = np.array([_as_array(make_mixed(ens, k, noise)) for k in (0, 1)])
    unitaries = {n: build_unitary(n, ens.theta).matrix for n in range(2, n_copies + 1)}
    hypotheses = (rng.random(trials) >= ens.prior0).astype(int)
    probes = np.zeros((trials, 2, 2))
    steps = np.zeros(trials, dtype=int)
    copies = np.zeros(trials, dtype=int)
    restarts = np.zeros(trials, dtype=int)
    for _ in range(budget):
        active = steps < n_copies
        if not active.any():
            break
        copies[active] += 1
        current = steps.copy()
        fresh = active & (current == 0)
        probes[fresh] = mixed[hypotheses[fresh]]
        steps[fresh] = 1
        for m in range(1, n_copies):
            group = np.flatnonzero(active & (current == m))
            if group.size == 0:
                continue
            joint = _batch_joint(unitaries[m + 1], mixed[hypotheses[group]], probes[group])
            blocks = joint.reshape(-1, 2, 2, 2, 2)
            p1 = np.clip(np.einsum("taa->t", blocks[:, 1, :, 1, :]), 0.0, 1.0)
            bad = rng.random(group.size) < p1
            outcome = bad.astype(int)
            conditional = blocks[np.arange(group.size), outcome, :, outcome, :]
            norm = np.einsum("taa->t", conditional)
            probes[group] = conditional / np.where(norm > 0, norm, 1.0)[:, None, None]
            steps[group] = m + 1
            if postselect:
                restarted = group[bad]
                steps[restarted] = 0
                restarts[restarted] += 1
    heralded = steps < n_copies
    success = np.zeros(trials, dtype=int)
    draws = rng.random(trials)
    for m in range(0, n_copies + 1):
        group = np.flatnonzero(steps == m)
        if group.size == 0:
            continue
        if m == 0:
            # nothing absorbed: a guess
            success[group] = (draws[group] < 0.5).astype(int)
            continue
        for k in (0, 1):
            members = group[hypotheses[group] == k]
            plus = np.array(helstrom_probe_vectors(m, ens.theta, k)[0])
            p_correct = np.einsum("i,tij,j->t", plus, probes[members], plus)
            success[members] = (draws[members] < p_correct).astype(int)
    return {"success": success, "copies": copies, "restarts": restarts, "heralded": heralded}


def postselect_run(n_copies: int, ens: SignalEnsemble, noise: NoiseModel,
                   rng: np.random.Generator, budget: Optional[int] = None) -> PostselectOutcome:
    """One post-selected run: restart on every copy found in |1>"""
    result = sample_probe_chain(n_copies, ens, noise, rng, trials=1, postselect=True,
                                budget=budget)
    return PostselectOutcome(success=int(result["success"][0]),
                             copies_consumed=int(result["copies"][0]),
                             restarts=int(result["restarts"][0]),
                             heralded_failure=bool(result["heralded"][0]))
