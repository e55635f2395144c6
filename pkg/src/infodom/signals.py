# infodom/signals.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Dynamic information structures and the posteriors they induce.

A :class:`DynamicSignal` stores, for each state, a pmf over full signal
paths ``(s_1, ..., s_T)``.  Period marginals and prefixes are derived
views.  Static experiments delivered at a random time
(:func:`arrival_signal`) are a special case.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Mapping, Optional, Sequence, Tuple

from infodom.exceptions import (
    DimensionMismatchError,
    InputFormatError,
    NegativeWeightError,
    PeriodOutOfRangeError,
    PriorNotInteriorError,
    ZeroProbabilityEventError,
)
from infodom.logger import get_logger
from infodom.prob_core import (
    ONE,
    ZERO,
    BeliefVector,
    FinitePmf,
    PosteriorDistribution,
    RationalLike,
    make_pmf,
    make_posterior,
    to_rational,
)

logger = get_logger(__name__)

#: Signal realization meaning "nothing observed yet".
NULL_SIGNAL = "∅"

Path = Tuple[Hashable, ...]


def _check_period(horizon: int, t: int) -> None:
    if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= horizon:
        logger.error("Period %r outside 1..%d", t, horizon)
        raise PeriodOutOfRangeError(f"Period {t!r} is outside 1..{horizon}")


def check_prior(prior: BeliefVector, n_states: int) -> None:
    """Validate that *prior* is a full-support belief over *n_states* states.

    Raises:
        DimensionMismatchError: If the dimensions differ.
        PriorNotInteriorError: If some state has zero prior probability.
    """
    if prior.dim != n_states:
        raise DimensionMismatchError(f"Prior has {prior.dim} states, expected {n_states}")
    if not prior.is_interior():
        raise PriorNotInteriorError(f"Prior {prior} does not have full support")


# ======================================================================
# DynamicSignal
# ======================================================================


@dataclass(frozen=True)
class DynamicSignal:
    """A state-conditional distribution over signal paths.

    Attributes:
        states: State labels, in belief-coordinate order.
        horizon: Number of periods ``T``.
        alphabets: Per-period signal alphabets ``S_1..S_T``.
        kernel: One pmf over full paths per state, in state order.
    """

    states: Tuple[Hashable, ...]
    horizon: int
    alphabets: Tuple[Tuple[Hashable, ...], ...]
    kernel: Tuple[FinitePmf, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise InputFormatError(f"Horizon must be a positive integer, got {self.horizon!r}", field="horizon")
        if len(set(self.states)) != len(self.states) or not self.states:
            raise InputFormatError("States must be nonempty and distinct", field="states")
        if len(self.alphabets) != self.horizon:
            raise InputFormatError(
                f"Expected {self.horizon} alphabets, got {len(self.alphabets)}", field="alphabets"
            )
        if len(self.kernel) != len(self.states):
            raise InputFormatError(
                f"Expected one path distribution per state ({len(self.states)}), got {len(self.kernel)}",
                field="kernel",
            )
        alphabet_sets = [set(a) for a in self.alphabets]
        for state, paths in zip(self.states, self.kernel):
            for path in paths.labels:
                if not isinstance(path, tuple) or len(path) != self.horizon:
                    raise InputFormatError(
                        f"Path {path!r} does not have length {self.horizon}", field=f"kernel.{state}"
                    )
                for t, s in enumerate(path):
                    if s not in alphabet_sets[t]:
                        raise InputFormatError(
                            f"Realization {s!r} at period {t + 1} is not in the alphabet",
                            field=f"kernel.{state}",
                        )

    @classmethod
    def from_kernel(
        cls,
        states: Sequence[Hashable],
        horizon: int,
        alphabets: Sequence[Sequence[Hashable]],
        kernel: Mapping[Hashable, Iterable[Tuple[Sequence[Hashable], RationalLike]]],
    ) -> "DynamicSignal":
        """Build a signal from a ``state -> [(path, probability), ...]`` mapping."""
        missing = [s for s in states if s not in kernel]
        if missing:
            raise InputFormatError(f"No path distribution for states {missing}", field="kernel")
        return cls(
            states=tuple(states),
            horizon=horizon,
            alphabets=tuple(tuple(a) for a in alphabets),
            kernel=tuple(make_pmf((tuple(path), p) for path, p in kernel[s]) for s in states),
        )

    @property
    def n_states(self) -> int:
        return len(self.states)

    def kernel_for(self, state: Hashable) -> FinitePmf:
        return self.kernel[self.states.index(state)]

    def reindexed(self, states: Sequence[Hashable]) -> "DynamicSignal":
        """The same signal with belief coordinates in the order of *states*.

        Raises:
            DimensionMismatchError: If *states* is not a permutation of ``self.states``.
        """
        states = tuple(states)
        if states == self.states:
            return self
        if len(states) != len(self.states) or set(states) != set(self.states):
            logger.error("Signal states %s do not match %s", list(self.states), list(states))
            raise DimensionMismatchError(
                f"State labels {list(states)} do not match the signal's states {list(self.states)}"
            )
        return replace(self, states=states, kernel=tuple(self.kernel_for(s) for s in states))

    def prefix_likelihoods(self, t: int) -> Dict[Path, Tuple[Fraction, ...]]:
        """Map each length-*t* prefix to its per-state probabilities ``pi(s^t | theta)``.

        Prefixes are listed in first-appearance order (states first, then paths).
        """
        _check_period(self.horizon, t)
        table: Dict[Path, list] = {}
        for i, paths in enumerate(self.kernel):
            for path, w in paths:
                row = table.setdefault(path[:t], [ZERO] * self.n_states)
                row[i] += w
        return {prefix: tuple(row) for prefix, row in table.items()}


def bayes_posterior(prior: BeliefVector, likelihoods: Sequence[RationalLike]) -> BeliefVector:
    """Bayes' rule: ``posterior_theta ∝ prior_theta * lik_theta``.

    Args:
        prior: Prior belief.
        likelihoods: Per-state probability of the observed event.

    Returns:
        BeliefVector: The exact posterior.

    Raises:
        ZeroProbabilityEventError: If the event has prior probability zero.
    """
    liks = tuple(to_rational(v, field="likelihood") for v in likelihoods)
    if len(liks) != prior.dim:
        raise DimensionMismatchError(f"Got {len(liks)} likelihoods for {prior.dim} states")
    if any(v < 0 for v in liks):
        raise NegativeWeightError("Likelihoods must be nonnegative")
    joint = tuple(p * v for p, v in zip(prior.probabilities, liks))
    total = sum(joint, ZERO)
    if total == 0:
        raise ZeroProbabilityEventError("Cannot condition on an event of probability zero")
    return BeliefVector(tuple(j / total for j in joint))


def induced_posteriors(signal: DynamicSignal, prior: BeliefVector, t: int) -> PosteriorDistribution:
    """The distribution of the period-*t* posterior belief.

    Enumerates every prefix ``s^t`` with positive marginal probability,
    updates by Bayes' rule and merges equal posteriors.  The barycenter
    of the result is the prior.

    Args:
        signal: The dynamic signal.
        prior: Full-support prior.
        t: Period, ``1 <= t <= T``.

    Returns:
        PosteriorDistribution: ``F_t``.

    Raises:
        PeriodOutOfRangeError: If *t* is outside ``1..T``.
    """
    _check_period(signal.horizon, t)
    check_prior(prior, signal.n_states)
    atoms = []
    for liks in signal.prefix_likelihoods(t).values():
        prob = prior.dot(liks)
        if prob > 0:
            atoms.append((bayes_posterior(prior, liks), prob))
    return make_posterior(atoms)


def posterior_sequence(signal: DynamicSignal, prior: BeliefVector) -> Tuple[PosteriorDistribution, ...]:
    """``(F_1, ..., F_T)`` for *signal* under *prior*."""
    return tuple(induced_posteriors(signal, prior, t) for t in range(1, signal.horizon + 1))


def revealing_signal(states: Sequence[Hashable], horizon: int, reveal_at: int = 1) -> DynamicSignal:
    """A signal that reveals the state at period *reveal_at* and keeps revealing it."""
    _check_period(horizon, reveal_at)
    alphabets = [(NULL_SIGNAL,) if t < reveal_at else tuple(states) for t in range(1, horizon + 1)]
    before = (NULL_SIGNAL,) * (reveal_at - 1)
    kernel = {s: [(before + (s,) * (horizon - reveal_at + 1), 1)] for s in states}
    return DynamicSignal.from_kernel(states, horizon, alphabets, kernel)


def uninformative_signal(states: Sequence[Hashable], horizon: int) -> DynamicSignal:
    """Pure noise: every state emits the same null path."""
    kernel = {s: [((NULL_SIGNAL,) * horizon, 1)] for s in states}
    return DynamicSignal.from_kernel(states, horizon, [(NULL_SIGNAL,)] * horizon, kernel)


# ======================================================================
# Static experiments and arrival lotteries
# ======================================================================


@dataclass(frozen=True)
class StaticExperiment:
    """A one-shot experiment ``xi: states -> pmf over realizations``.

    Realizations no state ever emits are pruned at construction, so every
    realization has positive probability under any full-support prior.
    """

    states: Tuple[Hashable, ...]
    realizations: Tuple[Hashable, ...]
    kernel: Tuple[FinitePmf, ...]

    def __post_init__(self) -> None:
        if len(set(self.states)) != len(self.states) or not self.states:
            raise InputFormatError("States must be nonempty and distinct", field="states")
        if len(self.kernel) != len(self.states):
            raise InputFormatError("Expected one realization pmf per state", field="kernel")
        declared = set(self.realizations)
        if len(declared) != len(self.realizations):
            raise InputFormatError("Realizations must be distinct", field="realizations")
        emitted = set()
        for state, pmf in zip(self.states, self.kernel):
            unknown = [z for z in pmf.labels if z not in declared]
            if unknown:
                raise InputFormatError(f"Undeclared realizations {unknown}", field=f"kernel.{state}")
            emitted.update(pmf.labels)
        pruned = tuple(z for z in self.realizations if z in emitted)
        if len(pruned) != len(self.realizations):
            logger.warning(
                "Dropping realizations never emitted: %s",
                [z for z in self.realizations if z not in emitted],
            )
        object.__setattr__(self, "realizations", pruned)

    @classmethod
    def from_kernel(
        cls,
        states: Sequence[Hashable],
        kernel: Mapping[Hashable, Mapping[Hashable, RationalLike]],
        realizations: Optional[Sequence[Hashable]] = None,
    ) -> "StaticExperiment":
        """Build from a ``state -> {realization: probability}`` mapping."""
        missing = [s for s in states if s not in kernel]
        if missing:
            raise InputFormatError(f"No realization pmf for states {missing}", field="kernel")
        if realizations is None:
            realizations = list(dict.fromkeys(z for s in states for z in kernel[s]))
        return cls(
            states=tuple(states),
            realizations=tuple(realizations),
            kernel=tuple(make_pmf(kernel[s].items()) for s in states),
        )

    @classmethod
    def fully_revealing(cls, states: Sequence[Hashable]) -> "StaticExperiment":
        return cls.from_kernel(states, {s: {s: 1} for s in states})

    @property
    def n_states(self) -> int:
        return len(self.states)

    def likelihoods(self, z: Hashable) -> Tuple[Fraction, ...]:
        return tuple(pmf.weight(z) for pmf in self.kernel)

    def posteriors(self, prior: BeliefVector) -> PosteriorDistribution:
        """The distribution over posteriors ``rho`` the experiment induces."""
        check_prior(prior, self.n_states)
        atoms = []
        for z in self.realizations:
            liks = self.likelihoods(z)
            atoms.append((bayes_posterior(prior, liks), prior.dot(liks)))
        return make_posterior(atoms)

    def is_trivial(self, prior: BeliefVector) -> bool:
        """True when no realization moves the belief away from *prior*."""
        return self.posteriors(prior).support == (prior,)


@dataclass(frozen=True)
class ArrivalLottery:
    """Distribution of the period at which a static experiment's realization arrives.

    Attributes:
        horizon: Number of periods ``T``.
        pmf: Pmf ``h`` over arrival periods ``1..T``.
    """

    horizon: int
    pmf: FinitePmf

    def __post_init__(self) -> None:
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise InputFormatError(f"Horizon must be a positive integer, got {self.horizon!r}", field="horizon")
        for y in self.pmf.labels:
            _check_period(self.horizon, y)

    @classmethod
    def from_masses(cls, masses: Sequence[RationalLike]) -> "ArrivalLottery":
        """Build from ``(h(1), ..., h(T))``."""
        return cls(len(masses), make_pmf((t, m) for t, m in enumerate(masses, start=1)))

    @classmethod
    def from_mapping(cls, pmf: Mapping[int, RationalLike], horizon: int) -> "ArrivalLottery":
        return cls(horizon, make_pmf(pmf.items()))

    @classmethod
    def point_mass(cls, t: int, horizon: int) -> "ArrivalLottery":
        return cls(horizon, make_pmf([(t, 1)]))

    @classmethod
    def uniform(cls, times: Sequence[int], horizon: int) -> "ArrivalLottery":
        return cls(horizon, make_pmf((t, Fraction(1, len(times))) for t in times))

    def h(self, y: int) -> Fraction:
        return self.pmf.weight(y)

    def cdf(self, y: int) -> Fraction:
        """``H(y) = sum_{i <= y} h(i)``."""
        return self.pmf.cdf(y)

    def cdf_values(self) -> Tuple[Fraction, ...]:
        return tuple(self.cdf(y) for y in range(1, self.horizon + 1))

    def masses(self) -> Tuple[Fraction, ...]:
        return tuple(self.h(y) for y in range(1, self.horizon + 1))

    def mean(self) -> Fraction:
        return self.pmf.mean()


def arrival_signal(xi: StaticExperiment, lottery: ArrivalLottery) -> DynamicSignal:
    """The dynamic signal delivering *xi*'s realization at a random time.

    Before arrival every period shows :data:`NULL_SIGNAL`; from arrival on
    the realization is repeated, so later periods keep the information.
    Arrival is independent of the state.
    """
    if NULL_SIGNAL in xi.realizations:
        raise InputFormatError(f"Realization label {NULL_SIGNAL!r} is reserved", field="realizations")
    T = lottery.horizon
    alphabets = [(NULL_SIGNAL,) + xi.realizations] * T
    kernel = {}
    for state, pmf in zip(xi.states, xi.kernel):
        kernel[state] = [
            ((NULL_SIGNAL,) * (y - 1) + (z,) * (T - y + 1), hy * pz)
            for y, hy in lottery.pmf
            for z, pz in pmf
        ]
    return DynamicSignal.from_kernel(xi.states, T, alphabets, kernel)


def arrival_posteriors(
    xi: StaticExperiment, lottery: ArrivalLottery, prior: BeliefVector, t: int
) -> PosteriorDistribution:
    """Closed form of ``F_t`` for an arrival signal.

    ``f_t(x) = H(t) rho(x)`` for ``x != prior`` and
    ``f_t(prior) = H(t) rho(prior) + 1 - H(t)``.
    """
    _check_period(lottery.horizon, t)
    rho = xi.posteriors(prior)
    H = lottery.cdf(t)
    atoms = [(x, H * w) for x, w in rho] + [(prior, ONE - H)]
    return make_posterior(atoms)


def arrival_posterior_sequence(
    xi: StaticExperiment, lottery: ArrivalLottery, prior: BeliefVector
) -> Tuple[PosteriorDistribution, ...]:
    return tuple(arrival_posteriors(xi, lottery, prior, t) for t in range(1, lottery.horizon + 1))
