"""Tests for report serialization, rendering and re-verification (reporting.py)."""

import json

import pytest

from infodom.exceptions import InputFormatError
from infodom.signals import arrival_signal
from infodom.dominance import (
    DiscountSequence,
    dominates_as,
    dominates_discounted,
    dominates_discounted_family,
    dominates_geometric,
    increasing_beta_counterexample,
)
from infodom.reporting import (
    ReportConfig,
    counterexample_to_dict,
    family_to_dict,
    render_report,
    verdict_to_dict,
    verify_report,
    write_report,
)


def _round_trip(doc):
    return json.loads(render_report(doc, "json"))


@pytest.fixture
def failing_as(late_signal, early_signal, uniform_prior):
    return verdict_to_dict(dominates_as(late_signal, early_signal, uniform_prior))


@pytest.fixture
def arrival_pair(revealing_experiment, spread_lottery, middle_lottery):
    return arrival_signal(revealing_experiment, spread_lottery), arrival_signal(revealing_experiment, middle_lottery)


class TestVerdictToDict:
    def test_holding_as(self, early_signal, noise_signal, uniform_prior):
        doc = verdict_to_dict(dominates_as(early_signal, noise_signal, uniform_prior))
        assert doc["class"] == "as"
        assert doc["holds"] is True
        assert doc["certificate"] == {"kind": "per_period_couplings"}
        assert [c["period"] for c in doc["per_period"]] == [1, 2]
        assert all("coupling" in c for c in doc["per_period"])
        assert doc["counterexample_problem"] is None

    def test_failing_as(self, failing_as):
        assert failing_as["holds"] is False
        assert failing_as["certificate"]["kind"] == "witness"
        assert failing_as["certificate"]["period"] == 1
        assert failing_as["counterexample_problem"]["horizon"] == 2
        assert set(failing_as["values"]) == {"W1", "W2"}

    def test_discounted_mixture(self, arrival_pair, uniform_prior):
        doc = verdict_to_dict(dominates_discounted(*arrival_pair, uniform_prior, DiscountSequence.of(1, 2, 4)))
        assert doc["class"] == "discounted"
        assert doc["mixture"]["lambda"] == {"1": "1/7", "2": "2/7", "3": "4/7"}
        assert doc["mixture"]["betas"] == ["1", "2", "4"]
        assert doc["per_period"] == []

    def test_rationals_are_strings(self, failing_as):
        text = render_report(failing_as, "json")
        assert "0.5" not in text
        assert '"1/2"' in text


class TestVerifyReport:
    def test_round_trip_failing(self, failing_as):
        assert verify_report(_round_trip(failing_as)) == []

    def test_round_trip_discounted(self, arrival_pair, uniform_prior):
        for beta in (DiscountSequence.of(1, "1/2", "1/4"), DiscountSequence.of(1, 2, 4)):
            doc = verdict_to_dict(dominates_discounted(*arrival_pair, uniform_prior, beta))
            assert verify_report(_round_trip(doc)) == []

    def test_family_and_counterexample(self, arrival_pair, uniform_prior):
        family = dominates_discounted_family(
            *arrival_pair, uniform_prior, [DiscountSequence.of(1, 1, 1), DiscountSequence.of(1, 2, 4)]
        )
        assert verify_report(_round_trip({"command": "dominates", **family_to_dict(family)})) == []
        found = counterexample_to_dict(increasing_beta_counterexample(3))
        assert verify_report(_round_trip({"increasing_beta_counterexample": found})) == []

    def test_tampered_values(self, failing_as):
        doc = _round_trip(failing_as)
        doc["values"]["W1"] = doc["values"]["W2"]
        problems = verify_report(doc)
        assert any("do not reverse" in p for p in problems)

    def test_tampered_counterexample_problem(self, failing_as):
        doc = _round_trip(failing_as)
        for table in doc["counterexample_problem"]["utilities"].values():
            for row in table.values():
                for s in row:
                    row[s] = "7"
        problems = verify_report(doc)
        assert any("do not match the witness" in p for p in problems)

    def test_tampered_discounted_problem(self, arrival_pair, uniform_prior):
        doc = _round_trip(verdict_to_dict(dominates_discounted(*arrival_pair, uniform_prior, DiscountSequence.of(1, 2, 4))))
        assert doc["holds"] is False
        for row in doc["counterexample_problem"]["utilities"]["3"].values():
            for s in row:
                row[s] = "1000"
        problems = verify_report(doc)
        assert any("utilities of period 3" in p for p in problems)

    def test_myopic_problem_verifies(self, late_signal, early_signal, uniform_prior):
        doc = _round_trip(verdict_to_dict(dominates_geometric(late_signal, early_signal, uniform_prior, 0)))
        assert doc["holds"] is False
        assert verify_report(doc) == []

    def test_tampered_coupling(self, early_signal, noise_signal, uniform_prior):
        doc = _round_trip(verdict_to_dict(dominates_as(early_signal, noise_signal, uniform_prior)))
        doc["per_period"][0]["coupling"]["matrix"][0] = ["1", "0"]
        assert verify_report(doc)

    def test_flipped_verdict(self, failing_as):
        doc = _round_trip(failing_as)
        doc["holds"] = True
        assert any("does not match" in p for p in verify_report(doc))

    def test_no_verdicts(self):
        assert verify_report({"command": "posteriors"}) == ["report contains no verdicts"]

    def test_malformed(self):
        with pytest.raises(InputFormatError):
            verify_report({"class": "as", "holds": True, "per_period": [{"holds": True}]})


class TestRendering:
    def test_text_tables(self, failing_as):
        text = render_report({"command": "dominates", **failing_as}, "text")
        assert text.startswith("# dominates")
        assert "| field" in text
        assert "## per_period" in text

    def test_deterministic(self, failing_as):
        assert render_report(failing_as, "json") == render_report(failing_as, "json")

    def test_unknown_format(self, failing_as):
        with pytest.raises(InputFormatError):
            render_report(failing_as, "yaml")

    def test_write_to_file(self, tmp_path, failing_as):
        out = tmp_path / "report.json"
        text = write_report(failing_as, ReportConfig(output_format="json", out=str(out)))
        assert out.read_text(encoding="utf-8") == text
        assert json.loads(text)["class"] == "as"
