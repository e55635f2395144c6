"""Tests for input documents and command-line values (utils.py)."""

from fractions import Fraction

import pytest

from infodom.exceptions import InputFormatError
from infodom.prob_core import BeliefVector
from infodom.utils import (
    load_experiment,
    load_lottery,
    load_prior,
    load_problem,
    load_signal,
    parse_beta,
    parse_rational_list,
    problem_from_dict,
    read_json,
)
from tests.conftest import STATES, write_json


class TestReadJson:
    def test_missing_file(self, tmp_path):
        path = str(tmp_path / "absent.json")
        with pytest.raises(InputFormatError) as exc:
            read_json(path)
        assert exc.value.path == path

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InputFormatError, match="Invalid JSON"):
            read_json(str(path))

    def test_decimals_stay_exact(self, tmp_path):
        path = write_json(tmp_path / "prior.json", [0.1, 0.9])
        assert load_prior(path) == BeliefVector.of("1/10", "9/10")


class TestSignalFiles:
    def test_load(self, tmp_path, signal_doc):
        signal = load_signal(write_json(tmp_path / "pi.json", signal_doc))
        assert signal.states == STATES
        assert signal.horizon == 2
        assert signal.kernel_for("theta1").weight(("a", "b")) == Fraction(1, 4)

    def test_bad_probability_names_file_and_field(self, tmp_path, signal_doc):
        signal_doc["kernel"]["theta1"][0]["p"] = "half"
        path = write_json(tmp_path / "pi.json", signal_doc)
        with pytest.raises(InputFormatError) as exc:
            load_signal(path)
        assert exc.value.path == path
        assert exc.value.field == "kernel.theta1[0].p"

    def test_unnormalized_kernel_becomes_input_error(self, tmp_path, signal_doc):
        signal_doc["kernel"]["theta2"][0]["p"] = "1/4"
        path = write_json(tmp_path / "pi.json", signal_doc)
        with pytest.raises(InputFormatError) as exc:
            load_signal(path)
        assert exc.value.path == path

    def test_missing_field(self, tmp_path, signal_doc):
        del signal_doc["alphabets"]
        with pytest.raises(InputFormatError) as exc:
            load_signal(write_json(tmp_path / "pi.json", signal_doc))
        assert exc.value.field == "alphabets"

    @pytest.mark.parametrize(
        "edit, field",
        [
            (lambda doc: doc.update(alphabets=[[["a"]], ["a", "b"]]), "alphabets[0]"),
            (lambda doc: doc.update(alphabets=[5, ["a", "b"]]), "alphabets[0]"),
            (lambda doc: doc["kernel"]["theta1"][0].update(path=7), "kernel.theta1[0].path"),
            (lambda doc: doc["kernel"]["theta1"][0].update(path=[["a"], "a"]), "kernel.theta1[0].path"),
        ],
    )
    def test_malformed_shapes_name_file_and_field(self, tmp_path, signal_doc, edit, field):
        edit(signal_doc)
        path = write_json(tmp_path / "pi.json", signal_doc)
        with pytest.raises(InputFormatError) as exc:
            load_signal(path)
        assert exc.value.path == path
        assert exc.value.field == field


class TestOtherFiles:
    def test_experiment(self, tmp_path):
        doc = {"states": list(STATES), "kernel": {"theta1": {"z1": "3/4", "z2": "1/4"},
                                                   "theta2": {"z1": "1/4", "z2": "3/4"}}}
        xi = load_experiment(write_json(tmp_path / "xi.json", doc))
        assert xi.realizations == ("z1", "z2")

    def test_lottery_forms(self, tmp_path):
        by_masses = load_lottery(write_json(tmp_path / "h.json", {"masses": ["1/2", 0, "1/2"]}))
        by_pmf = load_lottery(write_json(tmp_path / "h2.json", {"horizon": 3, "pmf": {"1": "1/2", "3": "1/2"}}))
        assert by_masses == by_pmf

    def test_lottery_horizon_mismatch(self, tmp_path):
        with pytest.raises(InputFormatError):
            load_lottery(write_json(tmp_path / "h.json", {"horizon": 4, "masses": [1, 0, 0]}))

    def test_lottery_bad_period(self, tmp_path):
        with pytest.raises(InputFormatError):
            load_lottery(write_json(tmp_path / "h.json", {"horizon": 2, "pmf": {"first": 1}}))

    def test_prior_forms(self, tmp_path):
        assert load_prior(write_json(tmp_path / "a.json", ["1/3", "2/3"])) == \
            load_prior(write_json(tmp_path / "b.json", {"prior": ["1/3", "2/3"]}))

    def test_problem_uses_signal_states(self, tmp_path):
        doc = {"horizon": 1, "actions": [["l", "r"]],
               "utilities": {"1": {"l": {"theta1": 1, "theta2": 0}, "r": {"theta1": 0, "theta2": 1}}}}
        problem = load_problem(write_json(tmp_path / "u.json", doc), states=list(STATES))
        assert problem.states == STATES
        assert problem.utilities == (((1, 0), (0, 1)),)

    def test_problem_without_states(self):
        with pytest.raises(InputFormatError):
            problem_from_dict({"horizon": 1, "actions": [["l"]], "utilities": {"1": {"l": {"s": 1}}}})

    def test_problem_action_count(self):
        doc = {"states": ["s"], "horizon": 2, "actions": [["l"]], "utilities": {"1": {"l": {"s": 1}}}}
        with pytest.raises(InputFormatError, match="action sets"):
            problem_from_dict(doc)

    def test_problem_columns_follow_signal_order(self, tmp_path):
        doc = {"states": ["theta2", "theta1"], "horizon": 1, "actions": [["bet"]],
               "utilities": {"1": {"bet": {"theta2": 0, "theta1": 1}}}}
        problem = load_problem(write_json(tmp_path / "u.json", doc), states=list(STATES))
        assert problem.states == STATES
        assert problem.utilities == (((1, 0),),)

    def test_problem_states_differ_from_signal(self, tmp_path):
        doc = {"states": ["x", "y"], "horizon": 1, "actions": [["bet"]],
               "utilities": {"1": {"bet": {"x": 0, "y": 1}}}}
        path = write_json(tmp_path / "u.json", doc)
        with pytest.raises(InputFormatError) as exc:
            load_problem(path, states=list(STATES))
        assert exc.value.path == path
        assert exc.value.field == "states"

    def test_problem_unknown_state_label(self):
        doc = {"horizon": 1, "actions": [["bet"]],
               "utilities": {"1": {"bet": {"theta1": 1, "theta2": 0, "theta3": 5}}}}
        with pytest.raises(InputFormatError, match="Unknown states") as exc:
            problem_from_dict(doc, states=list(STATES))
        assert exc.value.field == "utilities.1.bet"


class TestCommandLineValues:
    def test_rational_list(self):
        assert parse_rational_list("1, 1/2,0.25", "beta") == [1, Fraction(1, 2), Fraction(1, 4)]

    def test_empty_entry(self):
        with pytest.raises(InputFormatError):
            parse_rational_list("1,,2", "beta")

    def test_beta(self):
        assert parse_beta("1,2,4").betas == (1, 2, 4)

    def test_beta_must_be_positive(self):
        with pytest.raises(InputFormatError):
            parse_beta("1,0")
