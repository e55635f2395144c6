# infodom/decision.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Decision problems, value functions and the value of a signal.

``W(pi) = sum_t E_{F_t} V_t`` is computed from posterior distributions
(:func:`signal_value`) and, independently, by optimizing over pure
prefix-measurable strategies (:func:`signal_value_direct`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from infodom.config import SAMPLER_CONFIG, get_max_oracle_pairs
from infodom.exceptions import (
    DimensionMismatchError,
    HorizonMismatchError,
    InputFormatError,
    InstanceTooLargeError,
    PeriodOutOfRangeError,
)
from infodom.logger import get_logger
from infodom.prob_core import (
    ZERO,
    AffineMaximum,
    BeliefVector,
    PosteriorDistribution,
    RationalLike,
    expectation,
    to_rational,
)
from infodom.signals import DynamicSignal, check_prior, posterior_sequence

logger = get_logger(__name__)

Utilities = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


@dataclass(frozen=True)
class DecisionProblem:
    """An additively separable problem ``u(a, theta) = sum_t u_t(a_t, theta)``.

    Attributes:
        states: State labels, in belief-coordinate order.
        actions: Per-period action labels ``A_1..A_T``.
        utilities: ``utilities[t-1][a][theta]`` in the order of *actions*
            and *states*.
    """

    states: Tuple[Hashable, ...]
    actions: Tuple[Tuple[Hashable, ...], ...]
    utilities: Utilities

    def __post_init__(self) -> None:
        if not self.actions:
            raise InputFormatError("A decision problem needs at least one period", field="actions")
        if len(self.utilities) != len(self.actions):
            raise InputFormatError("One utility table per period is required", field="utilities")
        converted = []
        for t, (acts, table) in enumerate(zip(self.actions, self.utilities), start=1):
            if not acts:
                raise InputFormatError(f"Period {t} has no actions", field=f"actions.{t}")
            if len(set(acts)) != len(acts):
                raise InputFormatError(f"Period {t} repeats an action label", field=f"actions.{t}")
            if len(table) != len(acts) or any(len(row) != len(self.states) for row in table):
                raise InputFormatError(f"Utility table of period {t} has the wrong shape", field=f"utilities.{t}")
            converted.append(tuple(
                tuple(to_rational(u, field=f"utilities.{t}") for u in row) for row in table
            ))
        object.__setattr__(self, "utilities", tuple(converted))

    @classmethod
    def from_mapping(
        cls,
        states: Sequence[Hashable],
        actions: Sequence[Sequence[Hashable]],
        utilities: Mapping[int, Mapping[Hashable, Mapping[Hashable, RationalLike]]],
    ) -> "DecisionProblem":
        """Build from ``{t: {action: {state: value}}}`` with periods numbered from 1."""
        tables = []
        for t, acts in enumerate(actions, start=1):
            if t not in utilities:
                raise InputFormatError(f"No utilities for period {t}", field=f"utilities.{t}")
            period = utilities[t]
            rows = []
            for a in acts:
                if a not in period:
                    raise InputFormatError(f"No utilities for action {a!r}", field=f"utilities.{t}.{a}")
                missing = [s for s in states if s not in period[a]]
                if missing:
                    raise InputFormatError(f"Missing states {missing}", field=f"utilities.{t}.{a}")
                rows.append(tuple(period[a][s] for s in states))
            tables.append(tuple(rows))
        return cls(tuple(states), tuple(tuple(a) for a in actions), tuple(tables))

    @property
    def horizon(self) -> int:
        return len(self.actions)

    def reindexed(self, states: Sequence[Hashable]) -> "DecisionProblem":
        """The same problem with utility columns in the order of *states*.

        Raises:
            DimensionMismatchError: If *states* is not a permutation of ``self.states``.
        """
        states = tuple(states)
        if states == self.states:
            return self
        if len(states) != len(self.states) or set(states) != set(self.states):
            logger.error("Problem states %s do not match %s", list(self.states), list(states))
            raise DimensionMismatchError(
                f"Problem states {list(self.states)} do not match signal states {list(states)}"
            )
        order = [self.states.index(s) for s in states]
        tables = tuple(tuple(tuple(row[i] for i in order) for row in table) for table in self.utilities)
        return DecisionProblem(states, self.actions, tables)

    def utility(self, t: int, action_index: int, state_index: int) -> Fraction:
        return self.utilities[t - 1][action_index][state_index]


@dataclass(frozen=True)
class ValueFunction(AffineMaximum):
    """``V_t(x) = max_a <u_t(a, .), x>``; pieces align with *actions*."""

    actions: Tuple[Hashable, ...] = field(default=())


@dataclass(frozen=True)
class Strategy:
    """A pure strategy: per period, the chosen action index for each reachable prefix."""

    choices: Tuple[Mapping[Tuple[Hashable, ...], int], ...]

    def action_index(self, t: int, prefix: Tuple[Hashable, ...]) -> int:
        return self.choices[t - 1][prefix]


def value_function(problem: DecisionProblem, t: int) -> ValueFunction:
    """The period-*t* value function; one affine piece per action."""
    if not isinstance(t, int) or not 1 <= t <= problem.horizon:
        raise PeriodOutOfRangeError(f"Period {t!r} is outside 1..{problem.horizon}")
    return ValueFunction(problem.utilities[t - 1], actions=problem.actions[t - 1])


def value_from_posteriors(posteriors: Sequence[PosteriorDistribution], problem: DecisionProblem) -> Fraction:
    """``sum_t E_{F_t} V_t`` for a given sequence of posterior distributions."""
    if len(posteriors) != problem.horizon:
        raise HorizonMismatchError(
            f"{len(posteriors)} posterior distributions for a {problem.horizon}-period problem"
        )
    return sum(
        (expectation(F, value_function(problem, t)) for t, F in enumerate(posteriors, start=1)),
        ZERO,
    )


def _checked_problem(signal: DynamicSignal, problem: DecisionProblem) -> DecisionProblem:
    """Check horizons and return *problem* with its columns in the signal's state order."""
    if signal.horizon != problem.horizon:
        logger.error("Horizon mismatch: signal %d, problem %d", signal.horizon, problem.horizon)
        raise HorizonMismatchError(
            f"Signal has horizon {signal.horizon}, problem has horizon {problem.horizon}"
        )
    return problem.reindexed(signal.states)


def signal_value(signal: DynamicSignal, prior: BeliefVector, problem: DecisionProblem) -> Fraction:
    """The value ``W(pi)`` of *signal* in *problem* under *prior*.

    Raises:
        HorizonMismatchError: If the horizons differ.
        DimensionMismatchError: If the problem and signal name different states.
    """
    problem = _checked_problem(signal, problem)
    return value_from_posteriors(posterior_sequence(signal, prior), problem)


def optimal_strategy(signal: DynamicSignal, prior: BeliefVector, problem: DecisionProblem) -> Strategy:
    """An optimal pure strategy by per-prefix argmax (ties to the lowest action index).

    Raises:
        InstanceTooLargeError: If the number of (prefix, action) pairs
            exceeds :func:`infodom.config.get_max_oracle_pairs`.
    """
    problem = _checked_problem(signal, problem)
    check_prior(prior, signal.n_states)
    tables = [signal.prefix_likelihoods(t) for t in range(1, signal.horizon + 1)]
    pairs = sum(len(table) * len(acts) for table, acts in zip(tables, problem.actions))
    limit = get_max_oracle_pairs()
    if pairs > limit:
        logger.error("Oracle instance has %d (prefix, action) pairs, limit %d", pairs, limit)
        raise InstanceTooLargeError(f"{pairs} (prefix, action) pairs exceed the oracle limit of {limit}")

    choices: List[Dict[Tuple[Hashable, ...], int]] = []
    for t, table in enumerate(tables, start=1):
        rows = problem.utilities[t - 1]
        period: Dict[Tuple[Hashable, ...], int] = {}
        for prefix, liks in table.items():
            joint = tuple(p * l for p, l in zip(prior.probabilities, liks))
            if not any(joint):
                continue
            scores = [sum((j * u for j, u in zip(joint, row)), ZERO) for row in rows]
            period[prefix] = scores.index(max(scores))
        choices.append(period)
    return Strategy(tuple(choices))


def strategy_value(
    signal: DynamicSignal, prior: BeliefVector, problem: DecisionProblem, strategy: Strategy
) -> Fraction:
    """Ex-ante expected utility ``E_mu E_pi sum_t u_t(alpha_t(s^t), theta)`` of a pure strategy."""
    problem = _checked_problem(signal, problem)
    total = ZERO
    for i, (mu, paths) in enumerate(zip(prior.probabilities, signal.kernel)):
        for path, w in paths:
            utility = sum(
                (problem.utility(t, strategy.action_index(t, path[:t]), i) for t in range(1, signal.horizon + 1)),
                ZERO,
            )
            total += mu * w * utility
    return total


def signal_value_direct(signal: DynamicSignal, prior: BeliefVector, problem: DecisionProblem) -> Fraction:
    """``W(pi)`` by brute-force strategy optimization; used as an oracle for :func:`signal_value`."""
    return strategy_value(signal, prior, problem, optimal_strategy(signal, prior, problem))


# ======================================================================
# Problem constructors
# ======================================================================


def separating_problem(
    witness: AffineMaximum, t_star: int, T: int, states: Optional[Sequence[Hashable]] = None
) -> DecisionProblem:
    """The problem that pays ``witness`` at period *t_star* and nothing elsewhere.

    Actions at *t_star* are the piece indices ``0..k-1``; every other
    period has the single zero-utility action ``0``.
    """
    if not 1 <= t_star <= T:
        raise PeriodOutOfRangeError(f"Period {t_star} is outside 1..{T}")
    states = tuple(states) if states is not None else tuple(range(witness.dim))
    zero = ((ZERO,) * witness.dim,)
    actions = []
    tables = []
    for t in range(1, T + 1):
        if t == t_star:
            actions.append(tuple(range(len(witness.pieces))))
            tables.append(witness.pieces)
        else:
            actions.append((0,))
            tables.append(zero)
    return DecisionProblem(states, tuple(actions), tuple(tables))


def discounted_problem(
    states: Sequence[Hashable],
    actions: Sequence[Hashable],
    v: Sequence[Sequence[RationalLike]],
    betas: Sequence[RationalLike],
) -> DecisionProblem:
    """``u_t = beta_t * v`` with a common action set; ``v`` has one row per action."""
    weights = [to_rational(b, field="beta") for b in betas]
    rows = [tuple(to_rational(u, field="v") for u in row) for row in v]
    tables = tuple(tuple(tuple(b * u for u in row) for row in rows) for b in weights)
    return DecisionProblem(tuple(states), tuple(tuple(actions) for _ in weights), tables)


def matching_problem(
    states: Sequence[Hashable], T: int, betas: Optional[Sequence[RationalLike]] = None
) -> DecisionProblem:
    """Guess the state: ``u_t(a, theta) = beta_t * 1[a = theta]`` (``beta_t = 1`` by default)."""
    identity = [[1 if a == s else 0 for s in states] for a in states]
    return discounted_problem(states, states, identity, betas if betas is not None else [1] * T)


# ======================================================================
# Sampling
# ======================================================================


@dataclass(frozen=True)
class SamplerConfig:
    """Bounds for :func:`sample_problems`.

    Attributes:
        states: State labels of the sampled problems.
        horizon: Number of periods.
        min_actions: Smallest action-set size.
        max_actions: Largest action-set size.
        utility_bound: Utilities lie in ``[-utility_bound, utility_bound]``.
        max_denominator: Utilities have denominators in ``1..max_denominator``.
    """

    states: Tuple[Hashable, ...]
    horizon: int
    min_actions: int = int(SAMPLER_CONFIG.get("min_actions", 1))
    max_actions: int = int(SAMPLER_CONFIG.get("max_actions", 4))
    utility_bound: int = int(SAMPLER_CONFIG.get("utility_bound", 5))
    max_denominator: int = int(SAMPLER_CONFIG.get("max_denominator", 4))

    def __post_init__(self) -> None:
        if not 1 <= self.min_actions <= self.max_actions:
            raise InputFormatError("Need 1 <= min_actions <= max_actions", field="max_actions")
        if self.utility_bound < 0 or self.max_denominator < 1 or self.horizon < 1:
            raise InputFormatError("Sampler bounds must be positive", field="utility_bound")


def sample_utility(rng: np.random.Generator, bound: int, max_denominator: int) -> Fraction:
    """A rational in ``[-bound, bound]`` with denominator at most *max_denominator*."""
    den = int(rng.integers(1, max_denominator + 1))
    num = int(rng.integers(-bound * den, bound * den + 1))
    return Fraction(num, den)


def sample_utility_rows(rng: np.random.Generator, config: SamplerConfig) -> Tuple[Tuple[Fraction, ...], ...]:
    """One utility row per action, with a random number of actions."""
    k = int(rng.integers(config.min_actions, config.max_actions + 1))
    return tuple(
        tuple(sample_utility(rng, config.utility_bound, config.max_denominator) for _ in config.states)
        for _ in range(k)
    )


def sample_problems(config: SamplerConfig, seed: int) -> Iterator[DecisionProblem]:
    """Endless, seed-deterministic stream of random additively separable problems."""
    rng = np.random.default_rng(seed)
    while True:
        tables = tuple(sample_utility_rows(rng, config) for _ in range(config.horizon))
        actions = tuple(tuple(range(len(table))) for table in tables)
        yield DecisionProblem(config.states, actions, tables)


def sample_discounted_problems(
    config: SamplerConfig, seed: int, betas: Sequence[RationalLike]
) -> Iterator[DecisionProblem]:
    """Endless stream of problems ``u_t = beta_t * v`` with random one-shot utility ``v``."""
    rng = np.random.default_rng(seed)
    while True:
        rows = sample_utility_rows(rng, config)
        yield discounted_problem(config.states, range(len(rows)), rows, betas)
