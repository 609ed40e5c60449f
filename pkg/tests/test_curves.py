"""
Unit tests for curves.py
"""
from math import pi

import orjson
import pytest

from .context import qdiscrim

curves = qdiscrim.curves
adaptive = qdiscrim.adaptive
states = qdiscrim.states
errors = qdiscrim.errors

PI_6 = states.SignalEnsemble(pi / 6)
NOISY = states.NoiseModel(0.95)


class TestParsing:
    """Angle and scheme tokens from the command line"""

    @pytest.mark.parametrize("text,expected", [("pi/6", pi / 6), ("2pi/12", pi / 6),
                                               ("pi", pi), (" pi / 12 ", pi / 12),
                                               ("0.25", 0.25)])
    def test_parse_angle(self, text, expected):
        assert curves.parse_angle(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["pi/0", "sixth", ""])
    def test_parse_angle_rejects(self, text):
        with pytest.raises(ValueError):
            curves.parse_angle(text)

    def test_parse_schemes(self):
        assert curves.parse_schemes("adaptive, qdg,voting") == ["adaptive", "qdg", "voting"]

    def test_unknown_scheme(self):
        with pytest.raises(errors.UnknownSchemeError):
            curves.parse_schemes("adaptive,oracle")


class TestEvaluate:
    """Exact curves for every scheme"""

    def test_adaptive_curve(self):
        test_result = curves.evaluate("adaptive", PI_6, NOISY, 3)
        assert [row.n for row in test_result.rows] == [1, 2, 3]
        assert test_result.successes == pytest.approx([0.8897114, 0.9269964, 0.9339268],
                                                      abs=1e-6)
        assert all(row.p_error == 1.0 - row.p_success for row in test_result.rows)

    def test_qdg_matches_adaptive(self):
        adaptive_curve = curves.evaluate("adaptive", PI_6, NOISY, 30)
        qdg_curve = curves.evaluate("qdg", PI_6, NOISY, 30)
        assert qdg_curve.errors == pytest.approx(adaptive_curve.errors, abs=1e-12)

    @pytest.mark.parametrize("theta", [pi / 6, pi / 12])
    @pytest.mark.parametrize("f", [0.95, 0.99, 0.999])
    def test_voting_overtakes_adaptive(self, theta, f):
        """Voting error keeps falling while the adaptive error settles on its plateau"""
        ens, noise = states.SignalEnsemble(theta), states.NoiseModel(f)
        adaptive_curve = curves.evaluate("adaptive", ens, noise, 200)
        voting_curve = curves.evaluate("voting", ens, noise, 200)
        assert voting_curve.errors[-1] < adaptive_curve.errors[-1]
        assert adaptive_curve.errors[-1] == pytest.approx(
            1.0 - adaptive.asymptotic_limit(theta, noise), abs=1e-6)

    def test_helstrom_pure(self):
        test_result = curves.evaluate("helstrom-pure", PI_6, NOISY, 3)
        assert test_result.successes[-1] == pytest.approx(0.9960784, abs=1e-7)

    def test_postselect_has_no_exact_curve(self):
        with pytest.raises(errors.UnsupportedConfigurationError):
            curves.evaluate("qdg-postselect", PI_6, NOISY, 3)

    def test_qdg_unequal_priors(self):
        with pytest.raises(errors.UnsupportedConfigurationError):
            curves.evaluate("qdg", states.SignalEnsemble(pi / 6, 0.3), NOISY, 3)

    def test_bayes_cap(self):
        with pytest.raises(errors.EnumerationCapError):
            curves.evaluate("bayes", PI_6, NOISY, 5, bayes_cap=4)

    def test_exact_value(self):
        assert curves.exact_value("qdg-postselect", PI_6, NOISY, 3) is None
        assert curves.exact_value("bayes", PI_6, NOISY, 30) is None
        assert curves.exact_value("adaptive", PI_6, NOISY, 1) == pytest.approx(0.8897114,
                                                                               abs=1e-7)

    def test_curve_rejects_inconsistent_error(self):
        with pytest.raises(ValueError):
            curves.SchemeCurve("adaptive", pi / 6, 0.95, 0.5, (curves.CurveRow(1, 0.9, 0.2),))


class TestFiles:
    """CSV and JSON serialisation"""

    def test_csv_layout(self):
        text = curves.write_csv([curves.evaluate("voting", PI_6, NOISY, 2)])
        lines = text.splitlines()
        assert lines[0] == "scheme,N,theta,fidelity,p0,p_success,p_error"
        assert len(lines) == 3
        assert lines[1].startswith("voting,1,")

    def test_csv_round_trip(self):
        written = [curves.evaluate("adaptive", PI_6, NOISY, 10),
                   curves.evaluate("voting", PI_6, NOISY, 10),
                   curves.evaluate("adaptive", states.SignalEnsemble(pi / 12),
                                   states.NoiseModel(0.99), 10)]
        assert curves.parse_csv(curves.write_csv(written)) == written

    def test_empty_file(self):
        with pytest.raises(errors.CurveParseError) as excinfo:
            curves.parse_csv("")
        assert excinfo.value.line == 1

    def test_header_only(self):
        with pytest.raises(errors.CurveParseError):
            curves.parse_csv("scheme,N,theta,fidelity,p0,p_success,p_error\n")

    def test_bad_header(self):
        with pytest.raises(errors.CurveParseError):
            curves.parse_csv("scheme,N,theta\nadaptive,1,0.5\n")

    def test_bad_value(self):
        text = ("scheme,N,theta,fidelity,p0,p_success,p_error\n"
                "adaptive,1,0.5,0.95,0.5,0.9,0.1\n"
                "adaptive,two,0.5,0.95,0.5,0.9,0.1\n")
        with pytest.raises(errors.CurveParseError) as excinfo:
            curves.parse_csv(text)
        assert excinfo.value.line == 3

    def test_short_row(self):
        text = "scheme,N,theta,fidelity,p0,p_success,p_error\nadaptive,1,0.5\n"
        with pytest.raises(errors.CurveParseError) as excinfo:
            curves.parse_csv(text)
        assert excinfo.value.line == 2

    def test_unknown_scheme_row(self):
        text = "scheme,N,theta,fidelity,p0,p_success,p_error\nguess,1,0.5,0.95,0.5,0.9,0.1\n"
        with pytest.raises(errors.CurveParseError):
            curves.parse_csv(text)

    def test_non_increasing_n(self):
        text = ("scheme,N,theta,fidelity,p0,p_success,p_error\n"
                "adaptive,2,0.5,0.95,0.5,0.5,0.5\n"
                "adaptive,1,0.5,0.95,0.5,0.5,0.5\n")
        with pytest.raises(errors.CurveParseError):
            curves.parse_csv(text)

    def test_json(self):
        payload = orjson.loads(curves.curves_to_json([curves.evaluate("adaptive", PI_6, NOISY,
                                                                      2)]))
        assert payload[0]["scheme"] == "adaptive"
        assert [row["N"] for row in payload[0]["rows"]] == [1, 2]
        assert payload[0]["rows"][0]["p_success"] == pytest.approx(0.8897114, abs=1e-7)
