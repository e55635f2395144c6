# infodom/cli.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Command-line front end.

Subcommands: ``dominates``, ``posteriors``, ``value``, ``arrival``,
``verify`` and ``selftest``.  Exit codes: 0 when the queried relation
holds, 1 when it fails, 2 on input or internal errors.
"""

import argparse
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from infodom import __version__
from infodom.logger import get_logger
from infodom.exceptions import CertificateError, InfodomError, InputFormatError
from infodom.prob_core import BeliefVector, format_rational, to_rational
from infodom.signals import DynamicSignal, posterior_sequence
from infodom.decision import signal_value, signal_value_direct
from infodom.dominance import (
    DiscountSequence,
    dominates_as,
    dominates_discounted,
    dominates_discounted_family,
    dominates_geometric,
    earlier_is_better,
    increasing_beta_counterexample,
    risk_loving_check,
)
from infodom.stochastic_orders import fosd_check
from infodom.reporting import (
    REPORT_FORMATS,
    ReportConfig,
    belief_to_list,
    counterexample_to_dict,
    family_to_dict,
    posterior_to_list,
    risk_loving_to_dict,
    verdict_to_dict,
    verify_report,
    write_report,
)
from infodom.selftest import results_to_dict, run_selftest
from infodom.utils import (
    load_experiment,
    load_lottery,
    load_prior,
    load_problem,
    load_signal,
    parse_beta,
    read_json,
)

logger = get_logger(__name__)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_ERROR = 2

QUERY_CLASSES = ("as", "discounted", "discounted-family", "arrival")


@dataclass
class RunConfig:
    """One CLI invocation.

    Attributes:
        command: Subcommand name.
        inputs: Input files by role (``pi1``, ``pi2``, ``signal``, ...).
        query_class: Dominance class for ``dominates``.
        betas: Discount sequences from ``--beta``.
        delta: Geometric discount from ``--delta``.
        prior_path: Prior file; the uniform prior is used when absent.
        seed: Seed for ``selftest``.
        oracle: Cross-check values against the strategy oracle.
        quick: Reduced selftest.
        search_horizon: Horizon for the increasing-beta search.
        report: Output options.
    """
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    query_class: Optional[str] = None
    betas: List[DiscountSequence] = field(default_factory=list)
    delta: Optional[object] = None
    prior_path: Optional[str] = None
    seed: int = 0
    oracle: bool = False
    quick: bool = False
    search_horizon: Optional[int] = None
    report: ReportConfig = field(default_factory=ReportConfig)

    def validate(self) -> None:
        """Check that class-specific parameters appear exactly when required.

        Raises:
            InputFormatError: On a missing or superfluous parameter.
        """
        if self.command == "dominates":
            if self.query_class == "as" and (self.betas or self.delta is not None):
                raise InputFormatError("--beta/--delta do not apply to --class as", field="class")
            if self.query_class == "discounted" and (len(self.betas) + (self.delta is not None)) != 1:
                raise InputFormatError("--class discounted needs exactly one --beta or --delta", field="class")
            if self.query_class == "discounted-family" and (not self.betas or self.delta is not None):
                raise InputFormatError("--class discounted-family needs one or more --beta", field="class")
            if self.query_class == "arrival":
                raise InputFormatError("use the 'arrival' subcommand for arrival lotteries", field="class")
        if self.command == "arrival":
            if self.delta is not None or len(self.betas) > 1:
                raise InputFormatError("arrival accepts at most one --beta", field="beta")
            if self.search_horizon is None and any(self.inputs.get(k) is None for k in ("xi", "h", "p")):
                raise InputFormatError("arrival needs XI H P files or --search-increasing T", field="inputs")

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        inputs = {k: getattr(ns, k) for k in ("pi1", "pi2", "signal", "problem", "xi", "h", "p", "report_file")
                  if hasattr(ns, k)}
        config = cls(
            command=ns.command,
            inputs=inputs,
            query_class=getattr(ns, "query_class", None),
            betas=[parse_beta(b) for b in (getattr(ns, "beta", None) or [])],
            delta=to_rational(ns.delta, field="delta") if getattr(ns, "delta", None) is not None else None,
            prior_path=getattr(ns, "prior", None),
            seed=getattr(ns, "seed", 0),
            oracle=getattr(ns, "oracle", False),
            quick=getattr(ns, "quick", False),
            search_horizon=getattr(ns, "search_increasing", None),
            report=ReportConfig(output_format=ns.format, out=ns.out),
        )
        config.validate()
        return config


def _prior(config: RunConfig, signal_states: int) -> BeliefVector:
    if config.prior_path:
        return load_prior(config.prior_path)
    return BeliefVector.uniform(signal_states)


# ---------- Commands ----------

def cmd_dominates(config: RunConfig) -> tuple:
    pi1 = load_signal(config.inputs["pi1"])
    pi2 = load_signal(config.inputs["pi2"])
    prior = _prior(config, pi1.n_states)
    if config.query_class == "discounted-family":
        family = dominates_discounted_family(pi1, pi2, prior, config.betas)
        body, holds = family_to_dict(family), family.holds
    else:
        if config.query_class == "as":
            verdict = dominates_as(pi1, pi2, prior)
        elif config.delta is not None:
            verdict = dominates_geometric(pi1, pi2, prior, config.delta)
        else:
            verdict = dominates_discounted(pi1, pi2, prior, config.betas[0])
        body, holds = verdict_to_dict(verdict), verdict.holds
    report = {"command": "dominates", "prior": belief_to_list(prior), **body}
    return report, EXIT_HOLDS if holds else EXIT_FAILS


def cmd_posteriors(config: RunConfig) -> tuple:
    signal = load_signal(config.inputs["signal"])
    prior = _prior(config, signal.n_states)
    periods = [
        {"period": t, "posteriors": posterior_to_list(F)}
        for t, F in enumerate(posterior_sequence(signal, prior), start=1)
    ]
    return {"command": "posteriors", "prior": belief_to_list(prior), "periods": periods}, EXIT_HOLDS


def cmd_value(config: RunConfig) -> tuple:
    signal: DynamicSignal = load_signal(config.inputs["signal"])
    problem = load_problem(config.inputs["problem"], states=list(signal.states))
    prior = _prior(config, signal.n_states)
    value = signal_value(signal, prior, problem)
    report = {"command": "value", "prior": belief_to_list(prior), "W": format_rational(value)}
    if config.oracle:
        direct = signal_value_direct(signal, prior, problem)
        report["oracle"] = format_rational(direct)
        report["agree"] = direct == value
        if direct != value:
            raise CertificateError(f"Posterior value {value} differs from oracle value {direct}")
    return report, EXIT_HOLDS


def cmd_arrival(config: RunConfig) -> tuple:
    if config.search_horizon is not None:
        found = increasing_beta_counterexample(
            config.search_horizon, betas=config.betas or None
        )
        return {"command": "arrival", "increasing_beta_counterexample": counterexample_to_dict(found)}, EXIT_HOLDS
    xi = load_experiment(config.inputs["xi"])
    h = load_lottery(config.inputs["h"])
    p = load_lottery(config.inputs["p"])
    prior = _prior(config, xi.n_states)
    earlier = earlier_is_better(xi, h, p, prior)
    report = {
        "command": "arrival",
        "prior": belief_to_list(prior),
        "earlier_is_better": {"fosd": fosd_check(h, p), "verdict": verdict_to_dict(earlier)},
    }
    holds = earlier.holds
    if config.betas:
        # With --beta the queried relation is the discounted one.
        risk = risk_loving_check(xi, h, p, prior, config.betas[0])
        report["risk_loving"] = risk_loving_to_dict(risk)
        holds = risk.verdict.holds
    return report, EXIT_HOLDS if holds else EXIT_FAILS


def cmd_verify(config: RunConfig) -> tuple:
    problems = verify_report(read_json(config.inputs["report_file"]))
    report = {"command": "verify", "valid": not problems, "problems": problems}
    return report, EXIT_HOLDS if not problems else EXIT_FAILS


def cmd_selftest(config: RunConfig) -> tuple:
    results = run_selftest(seed=config.seed, quick=config.quick)
    report = results_to_dict(results, config.seed, config.quick)
    return report, EXIT_HOLDS if report["passed"] else EXIT_FAILS


COMMANDS = {
    "dominates": cmd_dominates,
    "posteriors": cmd_posteriors,
    "value": cmd_value,
    "arrival": cmd_arrival,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


# ---------- Parser ----------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=REPORT_FORMATS, default="json", help="Report format")
    common.add_argument("--out", default=None, help="Write the report to this file instead of stdout")

    with_prior = argparse.ArgumentParser(add_help=False)
    with_prior.add_argument("--prior", default=None, help="Prior file (uniform prior when omitted)")

    parser = argparse.ArgumentParser(
        prog="infodom", description="Dominance between dynamic information structures, with certificates."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dominates", parents=[common, with_prior], help="Test whether PI1 dominates PI2")
    p.add_argument("pi1")
    p.add_argument("pi2")
    p.add_argument("--class", dest="query_class", choices=QUERY_CLASSES, default="as")
    p.add_argument("--beta", action="append", help="Comma-separated discount weights, e.g. 1,1/2,1/4")
    p.add_argument("--delta", default=None, help="Geometric discount factor in [0, 1]")

    p = sub.add_parser("posteriors", parents=[common, with_prior], help="Print F_1..F_T of a signal")
    p.add_argument("signal")

    p = sub.add_parser("value", parents=[common, with_prior], help="Value W of a signal in a problem")
    p.add_argument("signal")
    p.add_argument("problem")
    p.add_argument("--oracle", action="store_true", help="Cross-check with strategy enumeration")

    p = sub.add_parser("arrival", parents=[common, with_prior], help="Arrival-lottery comparisons")
    p.add_argument("xi", nargs="?")
    p.add_argument("h", nargs="?")
    p.add_argument("p", nargs="?")
    p.add_argument("--beta", action="append", help="Decreasing discount weights for the risk-loving check")
    p.add_argument("--delta", default=None, help=argparse.SUPPRESS)
    p.add_argument("--search-increasing", type=int, default=None, metavar="T",
                   help="Search for an increasing-beta counterexample with horizon T")

    p = sub.add_parser("verify", parents=[common], help="Re-verify the certificates of a report")
    p.add_argument("report_file", metavar="REPORT")

    p = sub.add_parser("selftest", parents=[common], help="Run the randomized acceptance suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="Reduced instance counts")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_args(args)
        report, code = COMMANDS[config.command](config)
        text = write_report(report, config.report)
    except CertificateError as e:
        logger.error(f"Internal error: {e}")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except InfodomError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if not config.report.out:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
