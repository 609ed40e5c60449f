"""
Cross-route verification of every scheme on a grid of (theta, F) points.

Each check yields one CheckEntry. Asserted checks end in "pass" or "fail"; checks that only
document a comparison end in "report". The report as a whole passes when no entry failed.
"""
import logging
import platform
from dataclasses import dataclass, field
from itertools import product
from math import acos, cos, inf, log, pi, sin, sqrt
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import orjson
import scipy

from . import __version__, adaptive, qdg, sim, voting
from .curves import parse_angle
from .errors import QDiscrimError
from .helstrom import bound_pure_multi, optimal_measurement
from .metrics import CHECKS
from .states import (Density2, MeasBasis, NoiseModel, SignalEnsemble, average_rotated, make_mixed,
                     make_pure, orthogonal, rotated_pure, symmetric_eigen)

logger = logging.getLogger(__name__)

DEFAULT_THETAS = (pi / 12, pi / 8, pi / 6, pi / 5)
DEFAULT_FIDELITIES = (0.8, 0.95, 0.99, 0.999, 1.0)
DEFAULT_N_MAX = 200
QDG_N_MAX = 100
PLATEAU_TOL = 1e-6
KRAUS_TOL = 1e-10
CHERNOFF_REL_TOL = 0.02
B_TABLE_STEPS = (2, 3, 5, 10)


@dataclass(frozen=True)
class Grid:
    thetas: Tuple[float, ...] = DEFAULT_THETAS
    fidelities: Tuple[float, ...] = DEFAULT_FIDELITIES
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if not self.thetas or not self.fidelities:
            raise ValueError("grid needs at least one theta and one fidelity")
        if any(t <= 0 for t in self.thetas):
            raise ValueError("grid angles must be positive")
        if self.n_max < 2:
            raise ValueError(f"grid n_max must be at least 2, got {self.n_max}")

    @classmethod
    def from_json(cls, data: bytes) -> "Grid":
        """Grid file: {"thetas": [0.5, "pi/6"], "fidelities": [0.95], "n_max": 50}"""
        try:
            obj = orjson.loads(data)
            thetas = tuple(parse_angle(t) if isinstance(t, str) else float(t)
                           for t in obj.get("thetas", DEFAULT_THETAS))
            fidelities = tuple(float(f) for f in obj.get("fidelities", DEFAULT_FIDELITIES))
            n_max = int(obj.get("n_max", DEFAULT_N_MAX))
        except (orjson.JSONDecodeError, AttributeError, TypeError) as e:
            raise ValueError(f"malformed grid file: {e}")
        return cls(thetas=thetas, fidelities=fidelities, n_max=n_max)

    def points(self) -> List[Tuple[SignalEnsemble, NoiseModel]]:
        return [(SignalEnsemble(t), NoiseModel(f))
                for t, f in product(self.thetas, self.fidelities)]

    def noisy_points(self) -> List[Tuple[SignalEnsemble, NoiseModel]]:
        return [(ens, noise) for ens, noise in self.points() if noise.fidelity < 1.0]


@dataclass
class CheckEntry:
    check_id: str
    inputs: Dict
    values: Dict
    max_deviation: float
    verdict: str
    note: str = ""


@dataclass
class VerificationReport:
    entries: List[CheckEntry]
    environment: Dict[str, str]
    seed: int
    b_channel: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.verdict != "fail" for e in self.entries)

    @property
    def failures(self) -> List[str]:
        return [e.check_id for e in self.entries if e.verdict == "fail"]

    def to_json(self) -> bytes:
        payload = {
            "passed": self.passed,
            "seed": self.seed,
            "environment": self.environment,
            "checks": [{"id": e.check_id, "inputs": e.inputs, "values": e.values,
                        "max_deviation": _finite(e.max_deviation), "verdict": e.verdict,
                        "note": e.note} for e in self.entries],
            "b_channel": self.b_channel,
        }
        return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY)


def _finite(value: float) -> Optional[float]:
    return value if np.isfinite(value) else None


def environment_stamp() -> Dict[str, str]:
    return {"python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "qdiscrim": __version__}


def _point(ens: SignalEnsemble, noise: NoiseModel) -> str:
    return f"theta={ens.theta:.6g},F={noise.fidelity:g}"


class Verifier:
    def __init__(self, grid: Grid = Grid(), seed: int = 0, tol: float = 1e-12,
                 mc_trials: int = 10 ** 6, mc_points: int = 12, k_sigma: float = 3.0,
                 workers: int = 1) -> None:
        self.grid = grid
        self.seed = seed
        self.tol = tol
        self.mc_trials = mc_trials
        self.mc_points = mc_points
        self.k_sigma = k_sigma
        self.workers = workers
        self.entries: List[CheckEntry] = []
        self.b_channel: List[Dict] = []

    @property
    def checks(self) -> List[Callable[[], None]]:
        return [
            self.check_rotation_identity,
            self.check_mixed_average,
            self.check_density_valid,
            self.check_basis_independent_of_fidelity,
            self.check_beats_random_bases,
            self.check_bound_monotone,
            self.check_adaptive_routes,
            self.check_adaptive_monte_carlo,
            self.check_noiseless_priors,
            self.check_plateau_convergence,
            self.check_failure_monotone,
            self.check_record_majority_decay,
            self.check_noiseless_optimality,
            self.check_maximal_noise,
            self.check_qdg_a_channel,
            self.check_qdg_b_channel,
            self.check_qdg_asymptotics,
            self.check_unitarity_identities,
            self.check_kraus_completeness,
            self.check_oracle_consistency,
            self.check_local_beats_collective,
            self.check_voting_monotone,
            self.check_chernoff_fit,
            self.check_fig1_shape,
            self.check_sim_determinism,
            self.check_worker_invariance,
            self.check_coverage,
        ]

    def record(self, check_id: str, inputs: Dict, values: Dict, deviation: float,
               tol: Optional[float] = None, verdict: Optional[str] = None,
               note: str = "") -> None:
        if verdict is None:
            verdict = "pass" if deviation <= (self.tol if tol is None else tol) else "fail"
        self.entries.append(CheckEntry(check_id, inputs, values, deviation, verdict, note))
        CHECKS.inc({"verdict": verdict})
        if verdict == "fail":
            logger.warning(f"Check {check_id} failed: max deviation {deviation} {note}")
        else:
            logger.info(f"Check {check_id}: {verdict} (max deviation {deviation:.3g})")

    def run(self) -> VerificationReport:
        for check in self.checks:
            try:
                check()
            except (QDiscrimError, ValueError, ArithmeticError) as e:
                logger.exception(f"Check {check.__name__} raised")
                self.record(check.__name__.replace("check_", ""), {}, {}, inf, verdict="fail",
                            note=f"raised {type(e).__name__}: {e}")
        return VerificationReport(entries=self.entries, environment=environment_stamp(),
                                  seed=self.seed, b_channel=self.b_channel)

    # states

    def check_rotation_identity(self) -> None:
        deviation = 0.0
        for theta in self.grid.thetas:
            ens = SignalEnsemble(theta)
            for k in (0, 1):
                psi = make_pure(ens, k)
                perp = orthogonal(psi, k)
                for delta in np.linspace(-pi, pi, 37):
                    displaced = rotated_pure(ens, k, delta)
                    deviation = max(deviation,
                                    abs(displaced.amp0 - (cos(delta) * psi.amp0
                                                          - sin(delta) * perp.amp0)),
                                    abs(displaced.amp1 - (cos(delta) * psi.amp1
                                                          - sin(delta) * perp.amp1)))
        self.record("states.rotation_identity", {"thetas": list(self.grid.thetas)}, {},
                    deviation)

    def check_mixed_average(self) -> None:
        deviation = 0.0
        for ens, noise in self.grid.points():
            f = noise.fidelity
            two_point = acos(sqrt(f))
            # point mass at 0 plus a symmetric pair with the remaining weight
            spread = acos(sqrt((f - f / 2) / (1 - f / 2)))
            distributions = [((two_point, -two_point), (0.5, 0.5)),
                             ((0.0, spread, -spread), (f / 2, (1 - f / 2) / 2, (1 - f / 2) / 2))]
            for k in (0, 1):
                target = make_mixed(ens, k, noise)
                for deltas, weights in distributions:
                    averaged = average_rotated(ens, k, deltas, weights)
                    deviation = max(deviation, abs(averaged.m00 - target.m00),
                                    abs(averaged.m01 - target.m01),
                                    abs(averaged.m11 - target.m11))
        self.record("states.mixed_average", {"grid": "all points"}, {}, deviation,
                    tol=1e-10)

    def check_density_valid(self) -> None:
        deviation = 0.0
        for ens, noise in self.grid.points():
            for k in (0, 1):
                rho = make_mixed(ens, k, noise)
                deviation = max(deviation, _density_violation(rho))
        self.record("states.density_valid", {"grid": "all points"}, {}, deviation)

    # helstrom

    def check_basis_independent_of_fidelity(self) -> None:
        deviation = 0.0
        for theta in self.grid.thetas:
            ens = SignalEnsemble(theta)
            pure = optimal_measurement(0.5, make_mixed(ens, 0, NoiseModel(1.0)),
                                       make_mixed(ens, 1, NoiseModel(1.0))).basis
            for f in self.grid.fidelities:
                noise = NoiseModel(f)
                basis = optimal_measurement(0.5, make_mixed(ens, 0, noise),
                                            make_mixed(ens, 1, noise)).basis
                deviation = max(deviation, abs(basis.cos2 - pure.cos2),
                                abs(basis.sin2 - pure.sin2))
        self.record("helstrom.basis_independent_of_fidelity", {"p0": 0.5}, {}, deviation)

    def check_beats_random_bases(self) -> None:
        rng = np.random.default_rng(self.seed)
        deviation = -inf
        for (ens, noise), p0 in product(self.grid.points(), (0.3, 0.5, 0.7)):
            rho0, rho1 = make_mixed(ens, 0, noise), make_mixed(ens, 1, noise)
            best = optimal_measurement(p0, rho0, rho1).p_success
            for phi in rng.uniform(0.0, pi, 64):
                basis = MeasBasis(phi)
                p = p0 * rho0.expectation(basis.w0) + (1 - p0) * rho1.expectation(basis.w1)
                deviation = max(deviation, p - best, (1.0 - p) - best)
        self.record("helstrom.beats_random_bases", {"bases": 64, "priors": [0.3, 0.5, 0.7]},
                    {}, deviation)

    def check_bound_monotone(self) -> None:
        deviation = 0.0
        ns = range(1, self.grid.n_max + 1)
        thetas = sorted(self.grid.thetas)
        table = [[bound_pure_multi(SignalEnsemble(t), n) for n in ns] for t in thetas]
        for row in table:
            deviation = max(deviation, max(a - b for a, b in zip(row, row[1:])))
        for upper, lower in zip(table, table[1:]):
            deviation = max(deviation, max(a - b for a, b in zip(upper, lower)))
        self.record("helstrom.bound_monotone", {"thetas": thetas, "n_max": self.grid.n_max},
                    {}, max(deviation, 0.0))

    # adaptive

    def check_adaptive_routes(self) -> None:
        deviation = 0.0
        worst = {}
        for ens, noise in self.grid.points():
            n_max = self.grid.n_max
            dp = adaptive.success_dp_curve(n_max, ens, noise)
            recursion = adaptive.success_recursion_curve(n_max, ens, noise)
            closed = [adaptive.success_closed(n, ens, noise) for n in range(1, n_max + 1)]
            here = max(max(abs(a - b), abs(a - c), abs(b - c))
                       for a, b, c in zip(dp, recursion, closed))
            if here >= deviation:
                deviation = here
                worst = {"point": _point(ens, noise), "dp": dp[-1], "recursion": recursion[-1],
                         "closed": closed[-1]}
        self.record("adaptive.route_equivalence", {"n_max": self.grid.n_max}, worst, deviation)

    def check_adaptive_monte_carlo(self) -> None:
        if self.mc_trials <= 0 or self.mc_points <= 0:
            self.record("adaptive.monte_carlo", {}, {}, 0.0, verdict="report",
                        note="skipped: no Monte Carlo trials requested")
            return
        points = self.grid.points()
        stride = max(1, len(points) // self.mc_points)
        chosen = points[::stride][:self.mc_points]
        values = {}
        deviation = 0.0
        for i, (ens, noise) in enumerate(chosen):
            plan = sim.TrialPlan("adaptive", ens, noise, n_copies=3, trials=self.mc_trials,
                                 seed=self.seed + i, workers=self.workers)
            estimate = sim.run(plan)
            verdict = sim.compare(estimate, adaptive.success_dp(3, ens, noise), self.k_sigma)
            values[_point(ens, noise)] = {"p_hat": estimate.p_hat, "z": verdict.z}
            deviation = max(deviation, abs(verdict.z))
        self.record("adaptive.monte_carlo", {"N": 3, "trials": self.mc_trials}, values,
                    deviation, tol=self.k_sigma)

    def check_noiseless_priors(self) -> None:
        deviation = 0.0
        n_max = min(30, self.grid.n_max)
        for theta, p0 in product(self.grid.thetas, (0.3, 0.5, 0.7)):
            ens = SignalEnsemble(theta, p0)
            dp = adaptive.success_dp_curve(n_max, ens, NoiseModel(1.0))
            deviation = max(deviation, max(abs(p - bound_pure_multi(ens, n))
                                           for n, p in enumerate(dp, start=1)))
        self.record("adaptive.noiseless_priors", {"priors": [0.3, 0.5, 0.7], "n_max": n_max},
                    {}, deviation)

    def check_plateau_convergence(self) -> None:
        """
        |closed(N) - limit| <= cos^{2N}(2 theta) / sin(2 theta) for every N, and the value at
        the largest N lies within PLATEAU_TOL of the limit.
        """
        excess = 0.0
        final = 0.0
        values = {}
        for ens, noise in self.grid.noisy_points():
            limit = adaptive.asymptotic_limit(ens.theta, noise)
            for n in range(1, self.grid.n_max + 1):
                diff = abs(adaptive.success_closed(n, ens, noise) - limit)
                excess = max(excess, diff - ens.cos2 ** (2 * n) / ens.sin2)
            last = abs(adaptive.success_closed(self.grid.n_max, ens, noise) - limit)
            values[_point(ens, noise)] = last
            final = max(final, last)
        verdict = "pass" if excess <= self.tol and final <= PLATEAU_TOL else "fail"
        self.record("adaptive.plateau_convergence", {"n_max": self.grid.n_max}, values, final,
                    verdict=verdict, note=f"largest excess over the decay bound: {excess:.3g}")

    def check_failure_monotone(self) -> None:
        values = {}
        deviation = 0.0
        for ens, noise in self.grid.points():
            closed = [adaptive.success_closed(n, ens, noise)
                      for n in range(1, self.grid.n_max + 1)]
            rises = [(n + 2, a - b) for n, (a, b) in enumerate(zip(closed, closed[1:]))
                     if a - b > self.tol]
            if rises:
                n_first, _ = rises[0]
                largest = max(r for _, r in rises)
                values[_point(ens, noise)] = {"first_rise_at": n_first, "largest_rise": largest}
                deviation = max(deviation, largest)
        self.record("adaptive.failure_monotone", {"n_max": self.grid.n_max}, values, deviation,
                    verdict="report",
                    note="failure rises towards the plateau once the success overshoots it")

    def check_record_majority_decay(self) -> None:
        values = {}
        ok = True
        for ens, noise in self.grid.noisy_points():
            errors = adaptive.record_majority_error_curve(161, ens, noise)
            e81, e161 = errors[80], errors[160]
            plateau = 1.0 - adaptive.asymptotic_limit(ens.theta, noise)
            decays = e161 == 0.0 or e161 < e81
            below = e161 < plateau
            ok = ok and decays and below
            values[_point(ens, noise)] = {
                "log_error_drop": log(e161) - log(e81) if e161 > 0 and e81 > 0 else None,
                "error_161": e161, "plateau": plateau}
        self.record("adaptive.record_majority_decay", {"N": [81, 161]}, values, 0.0,
                    verdict="pass" if ok else "fail")

    def check_noiseless_optimality(self) -> None:
        deviation = 0.0
        n_max = min(50, self.grid.n_max)
        noise = NoiseModel(1.0)
        for theta in self.grid.thetas:
            ens = SignalEnsemble(theta)
            bound = [bound_pure_multi(ens, n) for n in range(1, n_max + 1)]
            routes = (adaptive.success_dp_curve(n_max, ens, noise),
                      [adaptive.success_closed(n, ens, noise) for n in range(1, n_max + 1)],
                      qdg.success_curve(n_max, ens, noise, "oracle"))
            for curve in routes:
                deviation = max(deviation, max(abs(a - b) for a, b in zip(curve, bound)))
        self.record("noiseless.optimality", {"n_max": n_max}, {}, deviation)

    def check_maximal_noise(self) -> None:
        deviation = 0.0
        noise = NoiseModel(0.5)
        n_max = min(20, self.grid.n_max)
        for theta in self.grid.thetas:
            ens = SignalEnsemble(theta)
            curves = (adaptive.success_dp_curve(n_max, ens, noise),
                      adaptive.success_recursion_curve(n_max, ens, noise),
                      [adaptive.success_closed(n, ens, noise) for n in range(1, n_max + 1)],
                      adaptive.record_majority_curve(n_max, ens, noise),
                      adaptive.bayes_curve(min(n_max, 10), ens, noise),
                      qdg.success_curve(n_max, ens, noise, "oracle"),
                      voting.voting_curve(n_max, ens, noise))
            for curve in curves:
                deviation = max(deviation, max(abs(p - 0.5) for p in curve))
        self.record("noise.maximal", {"F": 0.5, "n_max": n_max}, {}, deviation)

    # qdg

    def _qdg_routes(self, ens: SignalEnsemble, noise: NoiseModel, n_max: int):
        oracle = [qdg.coeffs_from_state(rho, n, ens.theta)
                  for n, rho in enumerate(qdg.oracle_chain(n_max, ens, noise), start=1)]
        kraus = qdg.kraus_chain(n_max, ens, noise)
        closed = [(qdg.closed_a(n, ens, noise), qdg.closed_b(n, ens, noise))
                  for n in range(1, n_max + 1)]
        return oracle, kraus, closed

    def check_qdg_a_channel(self) -> None:
        deviation = 0.0
        n_max = min(QDG_N_MAX, self.grid.n_max)
        for ens, noise in self.grid.points():
            oracle, kraus, closed = self._qdg_routes(ens, noise, n_max)
            for o, k, c in zip(oracle, kraus, closed):
                deviation = max(deviation, abs(o.a - k.a), abs(o.a - c[0]), abs(k.a - c[0]))
        self.record("qdg.a_channel", {"n_max": n_max}, {}, deviation)

    def check_qdg_b_channel(self) -> None:
        """Compare the coherence coefficient across routes; reported, not asserted"""
        deviation = 0.0
        steps = [n for n in B_TABLE_STEPS if n <= self.grid.n_max]
        for ens, noise in self.grid.noisy_points():
            oracle, kraus, closed = self._qdg_routes(ens, noise, max(steps))
            for n in steps:
                series = qdg.coeffs_series(n, ens, noise)[1]
                row = {"theta": ens.theta, "fidelity": noise.fidelity, "N": n,
                       "oracle": oracle[n - 1].b, "update_rule": kraus[n - 1].b,
                       "closed_form": closed[n - 1][1], "series": series,
                       "two_copy_sigma_x": (qdg.two_copy_sigma_x_coefficient(ens, noise)
                                        if n == 2 else None)}
                forms = {name: row[name] for name in ("update_rule", "closed_form", "series",
                                                      "two_copy_sigma_x")
                         if row[name] is not None}
                row["matches_oracle"] = sorted(
                    name for name, value in forms.items() if abs(value - row["oracle"]) <= 1e-9)
                row["matches_oracle_up_to_sign"] = sorted(
                    name for name, value in forms.items()
                    if abs(value + row["oracle"]) <= 1e-9 and name not in row["matches_oracle"])
                spread = max(abs(a - b) for a, b in product(forms.values(), repeat=2))
                row["max_pairwise_deviation"] = max(
                    spread, max(abs(v - row["oracle"]) for v in forms.values()))
                deviation = max(deviation, row["max_pairwise_deviation"])
                self.b_channel.append(row)
        matched = set.intersection(*(set(r["matches_oracle"]) for r in self.b_channel)) \
            if self.b_channel else set()
        note = (f"closed forms matching the oracle at every row: "
                f"{', '.join(sorted(matched)) or 'none'}")
        self.record("qdg.b_channel", {"steps": steps}, {"rows": len(self.b_channel)},
                    deviation, verdict="report", note=note)

    def check_qdg_asymptotics(self) -> None:
        values = {}
        deviation = 0.0
        for ens, noise in self.grid.noisy_points():
            p = qdg.success_prob(self.grid.n_max, ens, noise, "oracle")
            diff = abs(p - adaptive.asymptotic_limit(ens.theta, noise))
            values[_point(ens, noise)] = diff
            deviation = max(deviation, diff)
        self.record("qdg.asymptotics", {"N": self.grid.n_max}, values, deviation,
                    tol=PLATEAU_TOL)

    def check_unitarity_identities(self) -> None:
        deviation = 0.0
        for theta in self.grid.thetas:
            c2 = cos(2 * theta)
            for n in range(1, self.grid.n_max + 1):
                basis = qdg.probe_basis(n, theta)
                deviation = max(deviation, abs(cos(2 * basis.theta_n) - c2 ** n),
                                abs(sin(2 * basis.theta_n) - sqrt(1 - c2 ** (2 * n))))
                if n >= 2:
                    u = qdg.build_unitary(n, theta).matrix
                    deviation = max(deviation, float(np.abs(u.T @ u - np.eye(4)).max()))
        self.record("qdg.unitarity_identities", {"n_max": self.grid.n_max}, {}, deviation)

    def check_kraus_completeness(self) -> None:
        deviation = 0.0
        rng = np.random.default_rng(self.seed)
        for theta, n, k in product(self.grid.thetas, range(2, 11), (0, 1)):
            ens = SignalEnsemble(theta)
            for delta in rng.uniform(-pi / 2, pi / 2, 8):
                m0, m1 = qdg.kraus_operators(n, ens, k, delta)
                total = m0.T @ m0 + m1.T @ m1
                deviation = max(deviation, float(np.abs(total - np.eye(2)).max()))
        self.record("qdg.kraus_completeness", {"n": [2, 10], "deltas": 8}, {}, deviation,
                    tol=KRAUS_TOL)

    def check_oracle_consistency(self) -> None:
        deviation = 0.0
        n_max = min(QDG_N_MAX, self.grid.n_max)
        for (ens, noise), k in product(self.grid.points(), (0, 1)):
            for rho in qdg.oracle_chain(n_max, ens, noise, k):
                deviation = max(deviation, _density_violation(rho))
        self.record("qdg.oracle_consistency", {"n_max": n_max}, {}, deviation)

    def check_local_beats_collective(self) -> None:
        n_max = min(QDG_N_MAX, self.grid.n_max)
        margin = inf
        for ens, noise in self.grid.noisy_points():
            local = adaptive.success_dp_curve(n_max, ens, noise)
            collective = qdg.success_curve(n_max, ens, noise, "oracle")
            margin = min(margin, min(a - b for a, b in zip(local, collective)))
        margin = 0.0 if margin == inf else margin
        self.record("qdg.local_beats_collective", {"n_max": n_max}, {"min_margin": margin},
                    max(-margin, 0.0))

    # voting

    def check_voting_monotone(self) -> None:
        deviation = 0.0
        for ens, noise in self.grid.noisy_points():
            q = voting.per_copy_q(ens, noise)
            errors = [voting.majority_error(voting.VoteConfig(n, q)) for n in range(1, 202)]
            odd = errors[0::2]
            deviation = max(deviation, max(b - a for a, b in zip(odd, odd[1:])))
            for m in range(1, 100):
                deviation = max(deviation, errors[2 * m] - errors[2 * m - 1])
        self.record("voting.error_monotone", {"n_max": 201}, {}, max(deviation, 0.0))

    def check_chernoff_fit(self) -> None:
        values = {}
        deviation = 0.0
        for ens, noise in self.grid.noisy_points():
            q = voting.per_copy_q(ens, noise)
            exact = voting.chernoff_exponent(q)
            fitted = voting.fitted_exponent(q, range(201, 2002, 2))
            rel = abs(fitted - exact) / exact
            values[_point(ens, noise)] = {"exponent": exact, "fitted": fitted}
            deviation = max(deviation, rel)
        self.record("voting.chernoff_fit", {"n": [201, 2001]}, values, deviation,
                    tol=CHERNOFF_REL_TOL)

    def check_fig1_shape(self) -> None:
        low_noise = SignalEnsemble(pi / 12), NoiseModel(0.999)
        q = voting.per_copy_q(*low_noise)
        adaptive_errors = [1.0 - p for p in adaptive.success_dp_curve(5, *low_noise)]
        voting_worse = all(voting.majority_error(voting.VoteConfig(n, q)) > adaptive_errors[n - 1]
                           for n in range(2, 6))
        high_noise = SignalEnsemble(pi / 6), NoiseModel(0.95)
        plateau = 1.0 - adaptive.asymptotic_limit(high_noise[0].theta, high_noise[1])
        q = voting.per_copy_q(*high_noise)
        crossing = next((n for n in range(1, 1002)
                         if voting.majority_error(voting.VoteConfig(n, q)) < plateau), None)
        self.record("voting.fig1_shape", {}, {"voting_worse_for_N_2_to_5": voting_worse,
                                              "first_N_below_plateau": crossing},
                    0.0, verdict="pass" if voting_worse and crossing is not None else "fail")

    # sim

    def _small_plan(self, workers: int = 1, seed: Optional[int] = None) -> sim.TrialPlan:
        return sim.TrialPlan("adaptive", SignalEnsemble(pi / 6), NoiseModel(0.95), n_copies=3,
                             trials=2 * sim.BLOCK_SIZE + 1000,
                             seed=self.seed if seed is None else seed, workers=workers)

    def check_sim_determinism(self) -> None:
        first, second = sim.run(self._small_plan()), sim.run(self._small_plan())
        self.record("sim.determinism", {}, {"p_hat": first.p_hat},
                    abs(first.p_hat - second.p_hat), tol=0.0)

    def check_worker_invariance(self) -> None:
        estimates = {str(w): sim.run(self._small_plan(workers=w)).p_hat for w in (1, 4, 8)}
        self.record("sim.worker_invariance", {"workers": [1, 4, 8]}, estimates,
                    max(estimates.values()) - min(estimates.values()), tol=0.0)

    def check_coverage(self) -> None:
        ens, noise = SignalEnsemble(pi / 6), NoiseModel(1.0)
        reference = bound_pure_multi(ens, 2)
        outliers = 0
        for i in range(200):
            plan = sim.TrialPlan("helstrom-pure", ens, noise, n_copies=2, trials=10000,
                                 seed=(self.seed + 7919 * (i + 1)) % sim.SEED_LIMIT)
            if not sim.compare(sim.run(plan), reference, 3.0).passed:
                outliers += 1
        self.record("sim.coverage", {"seeds": 200, "k_sigma": 3.0}, {"outliers": outliers},
                    float(outliers), tol=2.0)


def _density_violation(rho: Density2) -> float:
    _, lam_lo, _ = symmetric_eigen(rho.m00, rho.m01, rho.m11)
    return max(abs(rho.trace - 1.0), max(-lam_lo, 0.0))


def verify(grid: Grid = Grid(), **kwargs) -> VerificationReport:
    return Verifier(grid, **kwargs).run()

