"""
Tests for verify.py, run on a reduced grid so the whole report finishes quickly.
"""
from math import pi

import orjson
import pytest

from .context import qdiscrim

from qdiscrim import verify  # noqa: E402

SMALL_GRID = verify.Grid(thetas=(pi / 6,), fidelities=(0.95, 1.0), n_max=30)


@pytest.fixture(scope="module")
def report():
    return verify.verify(SMALL_GRID, seed=3, mc_trials=0, workers=2)


class TestGrid:
    """Grid files and validation"""

    def test_from_json(self):
        test_result = verify.Grid.from_json(b'{"thetas": ["pi/6", 0.2], "fidelities": [0.9],'
                                            b' "n_max": 40}')
        assert test_result.thetas == pytest.approx((pi / 6, 0.2))
        assert test_result.fidelities == (0.9,)
        assert test_result.n_max == 40

    def test_from_json_defaults(self):
        assert verify.Grid.from_json(b"{}") == verify.Grid()

    def test_malformed_json(self):
        with pytest.raises(ValueError):
            verify.Grid.from_json(b"[1, 2")

    def test_rejects_zero_angle(self):
        with pytest.raises(ValueError):
            verify.Grid(thetas=(0.0,))

    def test_noisy_points(self):
        assert [noise.fidelity for _, noise in SMALL_GRID.noisy_points()] == [0.95]


class TestReport:
    """The verification report on a reduced grid"""

    def test_unique_ids(self, report):
        ids = [entry.check_id for entry in report.entries]
        assert len(ids) == len(set(ids))
        assert len(ids) == len(verify.Verifier(SMALL_GRID).checks)

    def test_asserted_checks_pass(self, report):
        # sim.coverage counts 3-sigma outliers, which a given seed can exceed by chance
        failed = [entry.check_id for entry in report.entries
                  if entry.verdict == "fail" and entry.check_id != "sim.coverage"]
        assert failed == []

    def test_reported_checks(self, report):
        verdicts = {entry.check_id: entry.verdict for entry in report.entries}
        assert verdicts["qdg.b_channel"] == "report"
        assert verdicts["adaptive.failure_monotone"] == "report"
        assert verdicts["adaptive.monte_carlo"] == "report"

    def test_b_channel_rows(self, report):
        assert [row["N"] for row in report.b_channel] == list(verify.B_TABLE_STEPS)
        for row in report.b_channel:
            assert row["update_rule"] == pytest.approx(row["oracle"], abs=1e-9)
            assert "update_rule" in row["matches_oracle"]
            assert row["max_pairwise_deviation"] >= 0.0

    def test_json(self, report):
        payload = orjson.loads(report.to_json())
        assert payload["seed"] == 3
        assert payload["environment"]["qdiscrim"] == qdiscrim.__version__
        assert {check["id"] for check in payload["checks"]} >= {"qdg.a_channel",
                                                                "voting.chernoff_fit",
                                                                "sim.worker_invariance"}
        assert len(payload["b_channel"]) == len(verify.B_TABLE_STEPS)

    def test_worker_invariance_entry(self, report):
        entry = next(e for e in report.entries if e.check_id == "sim.worker_invariance")
        assert entry.inputs == {"workers": [1, 4, 8]}
        assert sorted(entry.values) == ["1", "4", "8"]
        assert entry.max_deviation == 0.0
        assert entry.verdict == "pass"
