# infodom/selftest.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Seeded randomized validation of every decision procedure.

Each suite draws its own ``numpy`` generator from ``(seed, suite index)``
so suites are reproducible on their own.  Instance counts come from the
``SELFTEST`` block of ``defaults.yaml``.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from infodom.config import GENERATOR_CONFIG, SELFTEST_CONFIG
from infodom.logger import get_logger
from infodom.exceptions import InfodomError, NotAnMpsError
from infodom.prob_core import BeliefVector, barycenter
from infodom.signals import (
    ArrivalLottery,
    arrival_posteriors,
    arrival_signal,
    induced_posteriors,
    posterior_sequence,
    revealing_signal,
    uninformative_signal,
)
from infodom.stochastic_orders import (
    apply_all,
    decompose_splittings,
    fosd_check,
    mps_check,
    mps_check_binary,
    sosd_check,
)
from infodom.decision import (
    SamplerConfig,
    matching_problem,
    sample_discounted_problems,
    sample_problems,
    signal_value,
    signal_value_direct,
)
from infodom.dominance import (
    DiscountSequence,
    dominates_as,
    dominates_discounted,
    dominates_geometric,
    increasing_beta_counterexample,
    lambda_geometric,
    lambda_weights,
    risk_loving_check,
)
from infodom.sampling import (
    random_beta,
    random_decreasing_beta,
    random_experiment,
    random_lottery,
    random_prior,
    random_signal,
    random_signal_pair,
    random_spread,
    state_labels,
)
from infodom.reporting import render_report, verdict_to_dict, verify_report

logger = get_logger(__name__)

_SCALED_KEYS = ("pairs", "instances", "signals", "problems_per_pair", "betas_per_pair")


@dataclass
class SuiteResult:
    """Outcome of one suite.

    Attributes:
        name: Suite name as in ``defaults.yaml``.
        cases: Number of instances checked.
        failures: One message per failing instance.
    """
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            logger.error(f"[{self.name}] {message}")
            self.failures.append(message)


def suite_sizes(quick: bool = False) -> Dict[str, Dict[str, int]]:
    """Suite parameters from the packaged config; ``quick`` divides the instance counts."""
    divisor = int(SELFTEST_CONFIG.get("quick_divisor", 20)) if quick else 1
    sizes = {}
    for name, params in SELFTEST_CONFIG.get("suites", {}).items():
        sizes[name] = {
            k: max(1, int(v) // divisor) if k in _SCALED_KEYS else int(v) for k, v in params.items()
        }
    return sizes


def _shape(rng: np.random.Generator):
    n = int(rng.choice(GENERATOR_CONFIG.get("n_states", [2, 3])))
    T = int(rng.choice(GENERATOR_CONFIG.get("horizons", [2, 3])))
    return state_labels(n), T


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**31 - 1))


def _report_round_trip(verdict, result: SuiteResult, where: str) -> None:
    doc = json.loads(render_report(verdict_to_dict(verdict), "json"))
    problems = verify_report(doc)
    result.check(not problems, f"{where}: report does not re-verify: {problems}")


# ---------- Suites ----------

def as_equivalence(rng: np.random.Generator, pairs: int, problems_per_pair: int) -> SuiteResult:
    """AS verdicts against sampled problems and their own counterexamples."""
    result = SuiteResult("as_equivalence")
    for k in range(pairs):
        states, T = _shape(rng)
        pi1, pi2 = random_signal_pair(rng, states, T)
        prior = random_prior(rng, len(states))
        verdict = dominates_as(pi1, pi2, prior)
        result.cases += 1
        if verdict.holds:
            stream = sample_problems(SamplerConfig(states, T), _seed(rng))
            for _, problem in zip(range(problems_per_pair), stream):
                w1, w2 = signal_value(pi1, prior, problem), signal_value(pi2, prior, problem)
                result.check(w1 >= w2, f"pair {k}: dominance holds but W1={w1} < W2={w2}")
        else:
            w1 = signal_value(pi1, prior, verdict.counterexample)
            w2 = signal_value(pi2, prior, verdict.counterexample)
            result.check(w1 < w2, f"pair {k}: counterexample does not reverse ({w1} vs {w2})")
    return result


def discounted_equivalence(
    rng: np.random.Generator, pairs: int, betas_per_pair: int, problems_per_beta: int
) -> SuiteResult:
    """Discounted verdicts against sampled ``u_t = beta_t * v`` problems."""
    result = SuiteResult("discounted_equivalence")
    for k in range(pairs):
        states, T = _shape(rng)
        pi1, pi2 = random_signal_pair(rng, states, T)
        prior = random_prior(rng, len(states))
        for _ in range(betas_per_pair):
            beta = random_beta(rng, T)
            verdict = dominates_discounted(pi1, pi2, prior, beta)
            result.cases += 1
            if verdict.holds:
                stream = sample_discounted_problems(SamplerConfig(states, T), _seed(rng), beta.betas)
                for _, problem in zip(range(problems_per_beta), stream):
                    w1, w2 = signal_value(pi1, prior, problem), signal_value(pi2, prior, problem)
                    result.check(w1 >= w2, f"pair {k}, beta {beta}: W1={w1} < W2={w2}")
            else:
                w1 = signal_value(pi1, prior, verdict.counterexample)
                w2 = signal_value(pi2, prior, verdict.counterexample)
                result.check(w1 < w2, f"pair {k}, beta {beta}: counterexample does not reverse")
    return result


def oracle(rng: np.random.Generator, instances: int) -> SuiteResult:
    """Posterior-based value against brute-force strategy optimization."""
    result = SuiteResult("oracle")
    for k in range(instances):
        states, T = _shape(rng)
        signal = random_signal(rng, states, T)
        prior = random_prior(rng, len(states))
        problem = next(sample_problems(SamplerConfig(states, T), _seed(rng)))
        result.cases += 1
        w, w_direct = signal_value(signal, prior, problem), signal_value_direct(signal, prior, problem)
        result.check(w == w_direct, f"instance {k}: W={w} but oracle gives {w_direct}")
    return result


def refinement(rng: np.random.Generator, signals: int) -> SuiteResult:
    """Posteriors refine over time and average to the prior."""
    result = SuiteResult("refinement")
    for k in range(signals):
        states, T = _shape(rng)
        signal = random_signal(rng, states, T)
        prior = random_prior(rng, len(states))
        Fs = posterior_sequence(signal, prior)
        result.cases += 1
        for t, F in enumerate(Fs, start=1):
            result.check(barycenter(F) == prior, f"signal {k}: barycenter of F_{t} is not the prior")
        for t in range(1, T):
            verdict = mps_check(Fs[t], Fs[t - 1])
            result.check(verdict.holds, f"signal {k}: F_{t + 1} is not a spread of F_{t}")
            if len(states) == 2:
                binary = mps_check_binary(Fs[t], Fs[t - 1])
                result.check(binary.holds == verdict.holds, f"signal {k}: binary check disagrees")
    return result


def _delayed(rng: np.random.Generator, lottery: ArrivalLottery) -> ArrivalLottery:
    """Move every atom to a random time no earlier than it, so the original arrives earlier."""
    T = lottery.horizon
    masses: Dict[int, Fraction] = {}
    for t, w in lottery.pmf:
        later = int(rng.integers(t, T + 1))
        masses[later] = masses.get(later, Fraction(0)) + w
    return ArrivalLottery.from_mapping(masses, T)


def earlier_is_better_suite(rng: np.random.Generator, instances: int, max_horizon: int) -> SuiteResult:
    """FOSD of arrival times against per-period convex order, plus the closed form."""
    result = SuiteResult("earlier_is_better")
    for k in range(instances):
        states, _ = _shape(rng)
        T = int(rng.integers(1, max_horizon + 1))
        xi = random_experiment(rng, states)
        prior = random_prior(rng, len(states))
        h = random_lottery(rng, T)
        p = _delayed(rng, h) if rng.random() < 0.5 else random_lottery(rng, T)
        result.cases += 1
        per_period = True
        for t in range(1, T + 1):
            F, G = arrival_posteriors(xi, h, prior, t), arrival_posteriors(xi, p, prior, t)
            per_period = per_period and mps_check(F, G).holds
            closed = induced_posteriors(arrival_signal(xi, h), prior, t)
            result.check(closed == F, f"instance {k}: closed form differs from enumeration at t={t}")
        result.check(fosd_check(h, p) == per_period, f"instance {k}: FOSD and per-period order disagree")
    return result


def risk_loving_suite(rng: np.random.Generator, instances: int, max_horizon: int) -> SuiteResult:
    """Spread-out arrival never loses under a decreasing beta."""
    result = SuiteResult("risk_loving")
    for k in range(instances):
        states, _ = _shape(rng)
        T = int(rng.integers(1, max_horizon + 1))
        P, H = random_spread(rng, T)
        xi = random_experiment(rng, states)
        prior = random_prior(rng, len(states))
        beta = random_decreasing_beta(rng, T)
        result.cases += 1
        result.check(sosd_check(H, P), f"instance {k}: generated spread is not SOSD")
        report = risk_loving_check(xi, H, P, prior, beta)
        result.check(report.verdict.holds, f"instance {k}: mixtures not ordered under beta {beta}")
    return result


def increasing_beta(horizon: int) -> SuiteResult:
    """The increasing-beta search finds a verified reversal."""
    result = SuiteResult("increasing_beta", cases=1)
    found = increasing_beta_counterexample(horizon)
    result.check(found.revealed_mass[0] < found.revealed_mass[1], "no revealed-mass gap")
    result.check(found.values[0] < found.values[1], "no strict value reversal")
    result.check(not found.verdict.holds, "discounted dominance does not fail")
    result.check(sosd_check(found.h, found.p), "h is not a spread of p")
    if horizon == 3:
        result.check(found.beta == DiscountSequence.of(1, 2, 4), f"unexpected beta {found.beta}")
        result.check(found.revealed_mass == (Fraction(11, 14), Fraction(12, 14)), "unexpected revealed mass")
    return result


def splittings(rng: np.random.Generator, pairs: int, max_horizon: int) -> SuiteResult:
    """Decompositions round-trip and succeed exactly on SOSD pairs."""
    result = SuiteResult("splittings")
    for k in range(pairs):
        T = int(rng.integers(1, max_horizon + 1))
        if rng.random() < 0.5:
            P, H = random_spread(rng, T)
        else:
            P, H = random_lottery(rng, T), random_lottery(rng, T)
        result.cases += 1
        try:
            steps = decompose_splittings(P, H)
            decomposed = True
        except NotAnMpsError:
            decomposed = False
        result.check(sosd_check(H, P) == decomposed, f"pair {k}: SOSD and decomposition disagree")
        if decomposed:
            result.check(apply_all(P, steps) == H, f"pair {k}: splittings do not reproduce H")
            result.check(len(steps) <= len(P.pmf) + len(H.pmf), f"pair {k}: too many splittings")
    return result


def certificates(rng: np.random.Generator, pairs: int) -> SuiteResult:
    """Every emitted report re-verifies after a JSON round trip."""
    result = SuiteResult("certificates")
    for k in range(pairs):
        states, T = _shape(rng)
        pi1, pi2 = random_signal_pair(rng, states, T)
        prior = random_prior(rng, len(states))
        delta = Fraction(int(rng.integers(0, 5)), 4)
        for verdict in (dominates_as(pi1, pi2, prior), dominates_geometric(pi1, pi2, prior, delta)):
            result.cases += 1
            _report_round_trip(verdict, result, f"pair {k}")
    return result


def fixtures() -> SuiteResult:
    """Known exact values."""
    result = SuiteResult("fixtures")
    checks = [
        (lambda_geometric(1, 4).weights == (Fraction(1, 4),) * 4, "lambda(delta=1, T=4)"),
        (lambda_geometric(Fraction(1, 2), 3).weights == (Fraction(4, 7), Fraction(2, 7), Fraction(1, 7)),
         "lambda(delta=1/2, T=3)"),
        (lambda_weights(DiscountSequence.of(1, 2, 4)).weights == (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)),
         "lambda(beta=(1,2,4))"),
    ]
    states = ("theta1", "theta2")
    prior = BeliefVector.uniform(2)
    problem = matching_problem(states, 2)
    values = [
        (revealing_signal(states, 2, 1), Fraction(2)),
        (revealing_signal(states, 2, 2), Fraction(3, 2)),
        (uninformative_signal(states, 2), Fraction(1)),
    ]
    for signal, expected in values:
        checks.append((signal_value(signal, prior, problem) == expected, f"W = {expected}"))
        checks.append((signal_value_direct(signal, prior, problem) == expected, f"oracle W = {expected}"))
    for ok, name in checks:
        result.cases += 1
        result.check(ok, f"fixture {name} failed")
    return result


def run_selftest(seed: int = 0, quick: bool = False, only: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    """Run the acceptance suites.

    Args:
        seed: Base seed; each suite derives its generator from ``(seed, index)``.
        quick: Divide instance counts by ``quick_divisor``.
        only: Restrict to these suite names.

    Returns:
        List[SuiteResult]: One result per suite, in a fixed order.
    """
    sizes = suite_sizes(quick)
    plan: List[tuple] = [
        ("as_equivalence", lambda rng, s: as_equivalence(rng, s["pairs"], s["problems_per_pair"])),
        ("discounted_equivalence", lambda rng, s: discounted_equivalence(
            rng, s["pairs"], s["betas_per_pair"], s["problems_per_beta"])),
        ("oracle", lambda rng, s: oracle(rng, s["instances"])),
        ("refinement", lambda rng, s: refinement(rng, s["signals"])),
        ("earlier_is_better", lambda rng, s: earlier_is_better_suite(rng, s["instances"], s["max_horizon"])),
        ("risk_loving", lambda rng, s: risk_loving_suite(rng, s["instances"], s["max_horizon"])),
        ("increasing_beta", lambda rng, s: increasing_beta(s["horizon"])),
        ("splittings", lambda rng, s: splittings(rng, s["pairs"], s["max_horizon"])),
        ("certificates", lambda rng, s: certificates(rng, s["pairs"])),
        ("fixtures", lambda rng, s: fixtures()),
    ]
    results = []
    for index, (name, run) in enumerate(plan):
        if only and name not in only:
            continue
        rng = np.random.default_rng([seed, index])
        logger.info(f"Running suite {name}")
        try:
            outcome = run(rng, sizes.get(name, {}))
        except InfodomError as e:
            logger.error(f"Suite {name} raised {type(e).__name__}: {e}")
            outcome = SuiteResult(name, failures=[f"{type(e).__name__}: {e}"])
        results.append(outcome)
    return results


def results_to_dict(results: Sequence[SuiteResult], seed: int, quick: bool) -> Dict[str, Any]:
    return {
        "command": "selftest",
        "seed": seed,
        "quick": quick,
        "passed": all(r.passed for r in results),
        "suites": [
            {"name": r.name, "cases": r.cases, "passed": r.passed, "failures": len(r.failures)}
            for r in results
        ],
        "failures": [f"{r.name}: {msg}" for r in results for msg in r.failures],
    }
