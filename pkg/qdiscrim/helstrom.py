"""
Helstrom (minimum-error) bounds and measurements for two qubit hypotheses.
"""
import logging
from dataclasses import dataclass
from math import sqrt
from typing import Tuple

from .states import Density2, MeasBasis, SignalEnsemble, symmetric_eigen

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class HelstromResult:
    p_success: float
    basis: MeasBasis
    # hypothesis announced for outcome w0 and for outcome w1
    outcome_map: Tuple[int, int] = (0, 1)
    degenerate: bool = False


def bound_pure_single(ens: SignalEnsemble) -> float:
    return bound_pure_multi(ens, 1)


def bound_pure_multi(ens: SignalEnsemble, n_copies: int) -> float:
    """Helstrom bound for N copies of the pure signal states"""
    if n_copies < 1:
        raise ValueError(f"n_copies must be at least 1, got {n_copies}")
    radicand = 1.0 - 4.0 * ens.prior0 * ens.prior1 * ens.cos2 ** (2 * n_copies)
    return 0.5 * (1.0 + sqrt(max(radicand, 0.0)))


def optimal_measurement(p0: float, rho0: Density2, rho1: Density2) -> HelstromResult:
    """
    Minimum-error measurement for rho0 (prior p0) against rho1 (prior 1 - p0).

    The basis is the eigenbasis of p0*rho0 - p1*rho1 with w0 the eigenvector of the larger
    eigenvalue. An outcome is assigned to hypothesis 0 when its eigenvalue is positive; ties go
    to hypothesis 0.
    """
    p1 = 1.0 - p0
    lam_hi, lam_lo, phi = symmetric_eigen(p0 * rho0.m00 - p1 * rho1.m00,
                                          p0 * rho0.m01 - p1 * rho1.m01,
                                          p0 * rho0.m11 - p1 * rho1.m11)
    if lam_hi - lam_lo <= DEGENERACY_TOL:
        hypothesis = 0 if p0 >= p1 else 1
        logger.warning("Weighted states are identical, measurement basis is arbitrary")
        return HelstromResult(p_success=max(p0, p1), basis=MeasBasis(0.0),
                              outcome_map=(hypothesis, hypothesis), degenerate=True)
    outcome_map = (0 if lam_hi >= 0 else 1, 0 if lam_lo > 0 else 1)
    p_success = 0.5 * (1.0 + abs(lam_hi) + abs(lam_lo))
    return HelstromResult(p_success=min(p_success, 1.0), basis=MeasBasis(phi),
                          outcome_map=outcome_map)
