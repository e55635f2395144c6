"""Tests for the command-line front end (cli.py)."""

import json

import pytest

from infodom import cli
from infodom.cli import EXIT_ERROR, EXIT_FAILS, EXIT_HOLDS, main
from infodom.signals import arrival_signal
from infodom.selftest import run_selftest
from infodom.reporting import experiment_to_dict, lottery_to_dict, signal_to_dict
from tests.conftest import STATES, write_json


@pytest.fixture
def files(tmp_path, revealing_doc, noise_doc, revealing_experiment, spread_lottery, middle_lottery):
    """Input files by role."""
    matching = {
        "horizon": 2,
        "actions": [list(STATES), list(STATES)],
        "utilities": {
            str(t): {a: {s: 1 if a == s else 0 for s in STATES} for a in STATES} for t in (1, 2)
        },
    }
    return {
        "reveal": write_json(tmp_path / "reveal.json", revealing_doc),
        "noise": write_json(tmp_path / "noise.json", noise_doc),
        "prior": write_json(tmp_path / "prior.json", ["1/2", "1/2"]),
        "matching": write_json(tmp_path / "matching.json", matching),
        "spread": write_json(tmp_path / "spread.json", signal_to_dict(arrival_signal(revealing_experiment, spread_lottery))),
        "middle": write_json(tmp_path / "middle.json", signal_to_dict(arrival_signal(revealing_experiment, middle_lottery))),
        "xi": write_json(tmp_path / "xi.json", experiment_to_dict(revealing_experiment)),
        "h_spread": write_json(tmp_path / "h_spread.json", lottery_to_dict(spread_lottery)),
        "h_middle": write_json(tmp_path / "h_middle.json", lottery_to_dict(middle_lottery)),
        "h_first": write_json(tmp_path / "h_first.json", {"masses": [1, 0, 0]}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDominates:
    def test_identical_signals(self, capsys, files):
        code, out, _ = run(capsys, "dominates", "--class", "as", files["reveal"], files["reveal"], "--prior", files["prior"])
        assert code == EXIT_HOLDS
        report = json.loads(out)
        assert report["command"] == "dominates"
        assert report["holds"] is True

    def test_noise_does_not_dominate(self, capsys, files):
        code, out, _ = run(capsys, "dominates", files["noise"], files["reveal"])
        assert code == EXIT_FAILS
        report = json.loads(out)
        assert report["certificate"]["kind"] == "witness"
        assert report["counterexample_problem"] is not None

    def test_geometric_delta(self, capsys, files):
        code, out, _ = run(capsys, "dominates", "--class", "discounted", "--delta", "1/2", files["spread"], files["middle"])
        assert code == EXIT_HOLDS
        assert json.loads(out)["certificate"]["kind"] == "mixture_coupling"

    def test_increasing_beta(self, capsys, files):
        code, out, _ = run(capsys, "dominates", "--class", "discounted", "--beta", "1,2,4", files["spread"], files["middle"])
        assert code == EXIT_FAILS
        report = json.loads(out)
        assert report["certificate"]["kind"] == "witness"
        assert report["mixture"]["betas"] == ["1", "2", "4"]

    def test_family(self, capsys, files):
        code, out, _ = run(
            capsys, "dominates", "--class", "discounted-family",
            "--beta", "1,1/2,1/4", "--beta", "1,2,4", files["spread"], files["middle"],
        )
        assert code == EXIT_FAILS
        report = json.loads(out)
        assert [m["verdict"]["holds"] for m in report["members"]] == [True, False]
        assert "one-sided" in report["note"]

    @pytest.mark.parametrize("extra", [
        ["--class", "as", "--beta", "1,1"],
        ["--class", "discounted"],
        ["--class", "discounted", "--beta", "1,1", "--delta", "1/2"],
        ["--class", "discounted-family"],
        ["--class", "arrival"],
    ])
    def test_class_parameters(self, capsys, files, extra):
        code, out, err = run(capsys, "dominates", *extra, files["reveal"], files["noise"])
        assert code == EXIT_ERROR
        assert out == ""
        assert err.startswith("error:")

    def test_seed_only_on_selftest(self, capsys, files):
        with pytest.raises(SystemExit) as exc:
            main(["dominates", "--seed", "1", files["reveal"], files["noise"]])
        assert exc.value.code == EXIT_ERROR
        assert "--seed" in capsys.readouterr().err
        assert cli.build_parser().parse_args(["selftest", "--seed", "4"]).seed == 4

    def test_missing_file_is_named(self, capsys, files, tmp_path):
        absent = str(tmp_path / "absent.json")
        code, _, err = run(capsys, "dominates", files["reveal"], absent)
        assert code == EXIT_ERROR
        assert absent in err

    def test_text_format(self, capsys, files):
        code, out, _ = run(capsys, "dominates", "--format", "text", files["reveal"], files["noise"])
        assert code == EXIT_HOLDS
        assert out.startswith("# dominates")

    def test_byte_deterministic(self, capsys, files):
        first = run(capsys, "dominates", files["noise"], files["reveal"])
        second = run(capsys, "dominates", files["noise"], files["reveal"])
        assert first == second

    def test_signal_states_in_other_order(self, capsys, tmp_path):
        kernel = {"theta1": [{"path": ["a"], "p": "1"}],
                  "theta2": [{"path": ["a"], "p": "1/2"}, {"path": ["b"], "p": "1/2"}]}
        docs = [{"states": order, "horizon": 1, "alphabets": [["a", "b"]], "kernel": kernel}
                for order in (list(STATES), list(STATES[::-1]))]
        pi1 = write_json(tmp_path / "pi1.json", docs[0])
        pi2 = write_json(tmp_path / "pi2.json", docs[1])
        prior = write_json(tmp_path / "prior.json", ["1/3", "2/3"])
        code, out, _ = run(capsys, "dominates", pi1, pi2, "--prior", prior)
        assert code == EXIT_HOLDS
        assert json.loads(out)["holds"] is True


class TestPosteriorsAndValue:
    def test_noise_posteriors(self, capsys, files):
        code, out, _ = run(capsys, "posteriors", files["noise"])
        assert code == EXIT_HOLDS
        periods = json.loads(out)["periods"]
        assert [len(p["posteriors"]) for p in periods] == [1, 1]
        assert periods[0]["posteriors"][0] == {"belief": ["1/2", "1/2"], "weight": "1"}

    def test_value_with_oracle(self, capsys, files):
        code, out, _ = run(capsys, "value", files["reveal"], files["matching"], "--oracle")
        assert code == EXIT_HOLDS
        report = json.loads(out)
        assert report["W"] == "2"
        assert report["oracle"] == "2"
        assert report["agree"] is True

    def test_noise_value(self, capsys, files):
        _, out, _ = run(capsys, "value", files["noise"], files["matching"])
        assert json.loads(out)["W"] == "1"

    def test_problem_states_in_other_order(self, capsys, files, tmp_path):
        prior = write_json(tmp_path / "skewed.json", ["1/4", "3/4"])
        bet = {"states": ["theta2", "theta1"], "horizon": 2, "actions": [["bet"], ["bet"]],
               "utilities": {t: {"bet": {"theta2": 0, "theta1": 1}} for t in ("1", "2")}}
        problem = write_json(tmp_path / "bet.json", bet)
        code, out, _ = run(capsys, "value", files["noise"], problem, "--prior", prior, "--oracle")
        assert code == EXIT_HOLDS
        report = json.loads(out)
        assert report["W"] == "1/2"
        assert report["agree"] is True


class TestMalformedInputs:
    @pytest.mark.parametrize("edit", [
        lambda doc: doc.update(alphabets=[[["n"]], ["n"]]),
        lambda doc: doc.update(alphabets=[5, ["n"]]),
        lambda doc: doc["kernel"]["theta1"][0].update(path=7),
    ])
    def test_exit_code_names_file(self, capsys, tmp_path, noise_doc, edit):
        edit(noise_doc)
        path = write_json(tmp_path / "bad.json", noise_doc)
        code, out, err = run(capsys, "posteriors", path)
        assert code == EXIT_ERROR
        assert out == ""
        assert err.startswith("error:")
        assert path in err


class TestArrival:
    def test_earlier_is_better(self, capsys, files):
        code, out, _ = run(capsys, "arrival", files["xi"], files["h_first"], files["h_middle"])
        assert code == EXIT_HOLDS
        assert json.loads(out)["earlier_is_better"]["fosd"] is True

    def test_risk_loving(self, capsys, files):
        code, out, _ = run(capsys, "arrival", files["xi"], files["h_spread"], files["h_middle"], "--beta", "1,1/2,1/4")
        assert code == EXIT_HOLDS
        report = json.loads(out)
        assert report["earlier_is_better"]["verdict"]["holds"] is False
        assert report["risk_loving"]["sosd"] is True
        assert report["risk_loving"]["splittings"] == [
            {"z1": 1, "y2": 2, "z3": 3, "eta1": "1/2", "eta3": "1/2"}
        ]

    def test_increasing_beta_rejected(self, capsys, files):
        code, _, err = run(capsys, "arrival", files["xi"], files["h_spread"], files["h_middle"], "--beta", "1,2,4")
        assert code == EXIT_ERROR
        assert "not decreasing" in err

    def test_search(self, capsys):
        code, out, _ = run(capsys, "arrival", "--search-increasing", "3")
        assert code == EXIT_HOLDS
        found = json.loads(out)["increasing_beta_counterexample"]
        assert found["beta"] == ["1", "2", "4"]
        assert found["revealed_mass"] == {"h": "11/14", "p": "6/7"}

    def test_missing_inputs(self, capsys):
        code, _, _ = run(capsys, "arrival")
        assert code == EXIT_ERROR


class TestVerify:
    def test_round_trip(self, capsys, files, tmp_path):
        report = str(tmp_path / "report.json")
        code, out, _ = run(capsys, "dominates", "--out", report, files["noise"], files["reveal"])
        assert code == EXIT_FAILS
        assert out == ""
        code, out, _ = run(capsys, "verify", report)
        assert code == EXIT_HOLDS
        assert json.loads(out)["valid"] is True

    def test_tampered(self, capsys, files, tmp_path):
        report = tmp_path / "report.json"
        run(capsys, "dominates", "--out", str(report), files["noise"], files["reveal"])
        doc = json.loads(report.read_text(encoding="utf-8"))
        doc["values"]["W1"] = "100"
        report.write_text(json.dumps(doc), encoding="utf-8")
        code, out, _ = run(capsys, "verify", str(report))
        assert code == EXIT_FAILS
        assert json.loads(out)["problems"]


class TestSelftest:
    def test_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "run_selftest", lambda seed, quick: run_selftest(seed, quick, only=["fixtures"]))
        code, out, _ = run(capsys, "selftest", "--seed", "3", "--quick")
        assert code == EXIT_HOLDS
        report = json.loads(out)
        assert report["seed"] == 3
        assert report["quick"] is True
