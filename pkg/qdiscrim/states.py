"""
Qubit states on a single great circle of the Bloch sphere.

Every state handled by qdiscrim has real amplitudes, so pure states are real unit 2-vectors and
density matrices are real symmetric 2x2 matrices. The signal states are

    |psi_k>      = cos(theta)|0> + (-1)^k sin(theta)|1>
    |psi_k_perp> = sin(theta)|0> - (-1)^k cos(theta)|1>

The sign of the orthogonal state is fixed so that a state displaced by an angle delta satisfies
cos(theta + delta)|0> + (-1)^k sin(theta + delta)|1> = cos(delta)|psi_k> - sin(delta)|psi_k_perp>.
"""
import logging
from dataclasses import dataclass
from math import atan2, cos, pi, sin, sqrt
from typing import Iterable, Tuple

logger = logging.getLogger(__name__)

# tolerance used for every unit-norm, unit-trace and positivity check
TOL = 1e-12


@dataclass(frozen=True)
class SignalEnsemble:
    """The two signal states (half angle theta) and their prior probabilities"""
    theta: float
    prior0: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.theta <= pi / 4 + TOL:
            raise ValueError(f"theta must lie in [0, pi/4], got {self.theta}")
        if not 0.0 <= self.prior0 <= 1.0:
            raise ValueError(f"prior0 must lie in [0, 1], got {self.prior0}")

    @property
    def prior1(self) -> float:
        return 1.0 - self.prior0

    def prior(self, k: int) -> float:
        return self.prior0 if k == 0 else self.prior1

    @property
    def equal_priors(self) -> bool:
        return self.prior0 == 0.5

    @property
    def cos2(self) -> float:
        """cos(2 theta), the overlap of the two signal states"""
        return cos(2 * self.theta)

    @property
    def sin2(self) -> float:
        return sin(2 * self.theta)


@dataclass(frozen=True)
class NoiseModel:
    """Preparation noise characterised by the fidelity F of each prepared copy"""
    fidelity: float = 1.0

    def __post_init__(self):
        if not 0.5 <= self.fidelity <= 1.0:
            raise ValueError(f"fidelity must lie in [1/2, 1], got {self.fidelity}")

    @property
    def mean_cos_sq(self) -> float:
        return self.fidelity

    @property
    def mean_sin_sq(self) -> float:
        return 1.0 - self.fidelity

    @property
    def contrast(self) -> float:
        """<cos(2 delta)> = 2F - 1, the factor by which every Bloch vector is shrunk"""
        return 2.0 * self.fidelity - 1.0

    @property
    def mean_sin_2delta(self) -> float:
        # symmetric displacement distribution
        return 0.0


@dataclass(frozen=True)
class PureState2:
    amp0: float
    amp1: float

    def __post_init__(self):
        if abs(self.amp0 ** 2 + self.amp1 ** 2 - 1.0) > TOL:
            raise ValueError(f"state ({self.amp0}, {self.amp1}) is not normalised")

    def inner(self, other: "PureState2") -> float:
        return self.amp0 * other.amp0 + self.amp1 * other.amp1


@dataclass(frozen=True)
class Density2:
    """Real symmetric 2x2 density matrix [[m00, m01], [m01, m11]]"""
    m00: float
    m01: float
    m11: float

    def __post_init__(self):
        if abs(self.m00 + self.m11 - 1.0) > TOL:
            raise ValueError(f"density matrix trace is {self.m00 + self.m11}, expected 1")
        if self.m00 < -TOL or self.m11 < -TOL or self.det < -TOL:
            raise ValueError(f"density matrix {self} is not positive semidefinite")

    @property
    def m10(self) -> float:
        return self.m01

    @property
    def trace(self) -> float:
        return self.m00 + self.m11

    @property
    def det(self) -> float:
        return self.m00 * self.m11 - self.m01 * self.m01

    def expectation(self, vec: Tuple[float, float]) -> float:
        """<v|rho|v> for a real vector v"""
        v0, v1 = vec
        return self.m00 * v0 * v0 + 2.0 * self.m01 * v0 * v1 + self.m11 * v1 * v1

    def coherence(self, u: Tuple[float, float], v: Tuple[float, float]) -> float:
        """<u|rho|v> for real vectors u, v"""
        return (self.m00 * u[0] * v[0] + self.m01 * (u[0] * v[1] + u[1] * v[0])
                + self.m11 * u[1] * v[1])

    def as_rows(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return (self.m00, self.m01), (self.m01, self.m11)


@dataclass(frozen=True)
class MeasBasis:
    """Projective basis |w0> = cos(phi)|0> + sin(phi)|1>, |w1> = sin(phi)|0> - cos(phi)|1>"""
    phi: float

    @property
    def w0(self) -> Tuple[float, float]:
        return cos(self.phi), sin(self.phi)

    @property
    def w1(self) -> Tuple[float, float]:
        return sin(self.phi), -cos(self.phi)

    @property
    def cos2(self) -> float:
        return cos(2 * self.phi)

    @property
    def sin2(self) -> float:
        return sin(2 * self.phi)

    @classmethod
    def from_cos2(cls, cos2phi: float, sin2phi: float) -> "MeasBasis":
        return cls(0.5 * atan2(sin2phi, cos2phi))


def symmetric_eigen(m00: float, m01: float, m11: float) -> Tuple[float, float, float]:
    """
    Closed-form eigen decomposition of a real symmetric 2x2 matrix.

    :returns: (larger eigenvalue, smaller eigenvalue, phi) where (cos phi, sin phi) is the
     eigenvector of the larger eigenvalue
    """
    half_sum = 0.5 * (m00 + m11)
    radius = 0.5 * sqrt((m00 - m11) ** 2 + 4.0 * m01 * m01)
    phi = 0.5 * atan2(2.0 * m01, m00 - m11)
    return half_sum + radius, half_sum - radius, phi


def make_pure(ens: SignalEnsemble, k: int) -> PureState2:
    if k not in (0, 1):
        raise ValueError(f"hypothesis label must be 0 or 1, got {k}")
    sign = -1.0 if k else 1.0
    return PureState2(cos(ens.theta), sign * sin(ens.theta))


def orthogonal(state: PureState2, k: int) -> PureState2:
    """|psi_k_perp> for the signal state |psi_k> = state"""
    if k not in (0, 1):
        raise ValueError(f"hypothesis label must be 0 or 1, got {k}")
    sign = -1.0 if k else 1.0
    # state.amp1 = sign*sin(theta), so sign*state.amp1 = sin(theta)
    return PureState2(sign * state.amp1, -sign * state.amp0)


def overlap(a: PureState2, b: PureState2) -> float:
    return a.inner(b)


def rotated_pure(ens: SignalEnsemble, k: int, delta: float) -> PureState2:
    """Signal state k prepared with an angular error delta"""
    sign = -1.0 if k else 1.0
    return PureState2(cos(ens.theta + delta), sign * sin(ens.theta + delta))


def projector(state: PureState2) -> Density2:
    a, b = state.amp0, state.amp1
    return Density2(a * a, a * b, b * b)


def mixture(weights: Iterable[float], states: Iterable[Density2]) -> Density2:
    m00 = m01 = m11 = 0.0
    for w, rho in zip(weights, states):
        m00 += w * rho.m00
        m01 += w * rho.m01
        m11 += w * rho.m11
    return Density2(m00, m01, m11)


def make_mixed(ens: SignalEnsemble, k: int, noise: NoiseModel) -> Density2:
    """rho_k = F |psi_k><psi_k| + (1-F) |psi_k_perp><psi_k_perp|"""
    psi = make_pure(ens, k)
    perp = orthogonal(psi, k)
    f = noise.fidelity
    return mixture((f, 1.0 - f), (projector(psi), projector(perp)))


def average_rotated(ens: SignalEnsemble, k: int, deltas: Iterable[float],
                    weights: Iterable[float]) -> Density2:
    """Average of |psi~_k><psi~_k| over a discrete distribution of displacement angles"""
    deltas = list(deltas)
    return mixture(weights, [projector(rotated_pure(ens, k, d)) for d in deltas])


def outcome_probs(rho: Density2, basis: MeasBasis) -> Tuple[float, float]:
    """Born-rule probabilities of the two outcomes of a projective measurement"""
    p0 = rho.expectation(basis.w0)
    return p0, 1.0 - p0
