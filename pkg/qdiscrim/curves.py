"""
Success curves of every scheme over N = 1..n_max, and their CSV / JSON files.

CSV rows follow the header `scheme,N,theta,fidelity,p0,p_success,p_error`, one row per
(scheme, N), with floats written as their shortest round-trip decimal so that reading a file back
reproduces the curve exactly.
"""
import csv
import io
import logging
import re
from dataclasses import dataclass
from math import pi
from typing import Iterable, List, Optional, Tuple

import orjson

from . import adaptive, qdg, voting
from .errors import CurveParseError, UnknownSchemeError, UnsupportedConfigurationError
from .helstrom import bound_pure_multi
from .states import NoiseModel, SignalEnsemble

logger = logging.getLogger(__name__)

SCHEMES = ("adaptive", "adaptive-majority", "bayes", "qdg", "qdg-postselect", "voting",
           "helstrom-pure")
CSV_HEADER = ["scheme", "N", "theta", "fidelity", "p0", "p_success", "p_error"]
ERROR_TOL = 1e-15

_ANGLE = re.compile(r"^\s*(?P<mult>[0-9.]*)\s*\*?\s*pi\s*(/\s*(?P<div>[0-9.]+))?\s*$")


def check_scheme(scheme: str) -> str:
    if scheme not in SCHEMES:
        raise UnknownSchemeError(f"unknown scheme {scheme!r}, expected one of {', '.join(SCHEMES)}")
    return scheme


def parse_schemes(text: str) -> List[str]:
    return [check_scheme(s.strip()) for s in text.split(",") if s.strip()]


def parse_angle(text: str) -> float:
    """Accept radians ('0.5236') or multiples of pi ('pi/6', '2pi/12', 'pi')"""
    match = _ANGLE.match(text)
    if match:
        mult = float(match.group("mult")) if match.group("mult") else 1.0
        div = float(match.group("div")) if match.group("div") else 1.0
        if div == 0:
            raise ValueError(f"division by zero in angle {text!r}")
        return mult * pi / div
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}; use radians or a form like pi/6")


@dataclass(frozen=True)
class CurveRow:
    n: int
    p_success: float
    p_error: float


@dataclass(frozen=True)
class SchemeCurve:
    scheme: str
    theta: float
    fidelity: float
    prior0: float
    rows: Tuple[CurveRow, ...]

    def __post_init__(self):
        check_scheme(self.scheme)
        for row in self.rows:
            if abs(row.p_error - (1.0 - row.p_success)) > ERROR_TOL:
                raise ValueError(f"p_error {row.p_error} does not complement "
                                 f"p_success {row.p_success} at N={row.n}")
        ns = [row.n for row in self.rows]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError(f"N values of the {self.scheme} curve are not strictly increasing")

    @property
    def successes(self) -> List[float]:
        return [row.p_success for row in self.rows]

    @property
    def errors(self) -> List[float]:
        return [row.p_error for row in self.rows]


def scheme_values(scheme: str, ens: SignalEnsemble, noise: NoiseModel, n_max: int,
                  bayes_cap: int = adaptive.BAYES_CAP, qdg_route: str = "oracle") -> List[float]:
    """Exact success probabilities for N = 1..n_max"""
    check_scheme(scheme)
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    if scheme == "adaptive":
        return adaptive.success_dp_curve(n_max, ens, noise)
    if scheme == "adaptive-majority":
        return adaptive.record_majority_curve(n_max, ens, noise)
    if scheme == "bayes":
        return adaptive.bayes_curve(n_max, ens, noise, bayes_cap)
    if scheme == "qdg":
        return qdg.success_curve(n_max, ens, noise, qdg_route)
    if scheme == "voting":
        return voting.voting_curve(n_max, ens, noise)
    if scheme == "helstrom-pure":
        return [bound_pure_multi(ens, n) for n in range(1, n_max + 1)]
    raise UnsupportedConfigurationError(
        f"scheme {scheme!r} has no exact evaluation; estimate it with the mc command")


def evaluate(scheme: str, ens: SignalEnsemble, noise: NoiseModel, n_max: int,
             bayes_cap: int = adaptive.BAYES_CAP, qdg_route: str = "oracle") -> SchemeCurve:
    values = scheme_values(scheme, ens, noise, n_max, bayes_cap, qdg_route)
    rows = tuple(CurveRow(n=n, p_success=p, p_error=1.0 - p)
                 for n, p in enumerate(values, start=1))
    logger.debug(f"Evaluated {scheme} at theta={ens.theta}, F={noise.fidelity}: "
                 f"p_success(N={n_max}) = {values[-1]}")
    return SchemeCurve(scheme=scheme, theta=ens.theta, fidelity=noise.fidelity,
                       prior0=ens.prior0, rows=rows)


def exact_value(scheme: str, ens: SignalEnsemble, noise: NoiseModel, n_copies: int,
                bayes_cap: int = adaptive.BAYES_CAP) -> Optional[float]:
    """Exact success probability at N = n_copies, or None when only Monte Carlo applies"""
    if scheme == "qdg-postselect" or (scheme == "bayes" and n_copies > bayes_cap):
        return None
    return scheme_values(scheme, ens, noise, n_copies, bayes_cap)[-1]


def write_csv(curves: Iterable[SchemeCurve]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for curve in curves:
        for row in curve.rows:
            writer.writerow([curve.scheme, row.n, repr(curve.theta), repr(curve.fidelity),
                             repr(curve.prior0), repr(row.p_success), repr(row.p_error)])
    return buffer.getvalue()


def parse_csv(text: str) -> List[SchemeCurve]:
    """Read curves back, grouped by (scheme, theta, fidelity, p0) in order of first appearance"""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise CurveParseError("empty curve file", line=1)
    if [h.strip() for h in header] != CSV_HEADER:
        raise CurveParseError(f"expected header {','.join(CSV_HEADER)}", line=1)
    groups = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise CurveParseError(f"expected {len(CSV_HEADER)} fields, got {len(row)}", line=line)
        try:
            scheme = check_scheme(row[0])
            n = int(row[1])
            theta, fidelity, p0, p_success, p_error = (float(v) for v in row[2:])
        except ValueError as e:
            raise CurveParseError(str(e), line=line)
        key = (scheme, theta, fidelity, p0)
        groups.setdefault(key, []).append((line, CurveRow(n, p_success, p_error)))
    if not groups:
        raise CurveParseError("curve file holds no data rows", line=reader.line_num)
    curves = []
    for (scheme, theta, fidelity, p0), entries in groups.items():
        try:
            curves.append(SchemeCurve(scheme, theta, fidelity, p0,
                                      tuple(row for _, row in entries)))
        except ValueError as e:
            raise CurveParseError(str(e), line=entries[-1][0])
    return curves


def curves_to_json(curves: Iterable[SchemeCurve]) -> bytes:
    payload = [{"scheme": c.scheme, "theta": c.theta, "fidelity": c.fidelity, "p0": c.prior0,
                "rows": [{"N": r.n, "p_success": r.p_success, "p_error": r.p_error}
                         for r in c.rows]}
               for c in curves]
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2)
