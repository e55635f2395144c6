# infodom/dominance.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Dominance between dynamic signals.

- Additively separable class: ``pi1`` dominates ``pi2`` iff
  ``F_t ⪰ G_t`` in every period (:func:`dominates_as`).
- ``beta``-discounted class: iff the ``lambda_beta``-mixtures satisfy
  ``F^beta ⪰ G^beta`` (:func:`dominates_discounted`,
  :func:`dominates_geometric`).
- Arrival lotteries of a fixed static experiment: earlier arrival in the
  FOSD sense is better for every additively separable problem, and with a
  decreasing ``beta`` a mean-preserving spread of the arrival time is
  weakly preferred.

Every failing verdict carries a decision problem whose values are
recomputed to confirm ``W(pi1) < W(pi2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from infodom.config import SEARCH_CONFIG
from infodom.decision import DecisionProblem, discounted_problem, matching_problem, separating_problem, signal_value
from infodom.exceptions import (
    BetaNotDecreasingError,
    CertificateError,
    CounterexampleNotFoundError,
    EmptyFamilyError,
    HorizonMismatchError,
    InputFormatError,
    TrivialExperimentError,
)
from infodom.logger import get_logger
from infodom.prob_core import (
    ONE,
    ZERO,
    BeliefVector,
    FinitePmf,
    PosteriorDistribution,
    RationalLike,
    format_rational,
    make_pmf,
    to_rational,
)
from infodom.signals import (
    ArrivalLottery,
    DynamicSignal,
    StaticExperiment,
    arrival_signal,
    check_prior,
    posterior_sequence,
)
from infodom.stochastic_orders import (
    BinarySplitting,
    ConvexWitness,
    MpsResult,
    apply_splitting,
    decompose_splittings,
    fosd_check,
    mps_check,
    sosd_check,
    weighted_mixture,
)

logger = get_logger(__name__)

#: Attached to every family sweep.
ONE_SIDED_NOTE = (
    "A family sweep is one-sided: failure for any member refutes dominance for the "
    "discounted class, while passing every member does not prove it for all sequences."
)


# ======================================================================
# Discount sequences
# ======================================================================


@dataclass(frozen=True)
class DiscountSequence:
    """Strictly positive per-period weights ``beta_1..beta_T``."""

    betas: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        betas = tuple(to_rational(b, field="beta") for b in self.betas)
        if not betas:
            raise InputFormatError("A discount sequence needs at least one period", field="beta")
        if any(b <= 0 for b in betas):
            raise InputFormatError(f"Discount weights must be positive, got {betas}", field="beta")
        object.__setattr__(self, "betas", betas)

    @classmethod
    def of(cls, *betas: RationalLike) -> "DiscountSequence":
        return cls(tuple(betas))

    @classmethod
    def geometric(cls, delta: RationalLike, T: int) -> "DiscountSequence":
        """``beta_t = delta^(t-1)`` for ``0 < delta <= 1``."""
        delta = to_rational(delta, field="delta")
        if not 0 < delta <= 1:
            raise InputFormatError(f"Geometric discount needs 0 < delta <= 1, got {delta}", field="delta")
        return cls(tuple(delta ** (t - 1) for t in range(1, T + 1)))

    @property
    def horizon(self) -> int:
        return len(self.betas)

    @property
    def bar_beta(self) -> Fraction:
        return sum(self.betas, ZERO)

    @property
    def is_decreasing(self) -> bool:
        return all(a >= b for a, b in zip(self.betas, self.betas[1:]))

    @property
    def is_increasing(self) -> bool:
        return all(a <= b for a, b in zip(self.betas, self.betas[1:]))

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(b) for b in self.betas) + ")"


def lambda_weights(beta: DiscountSequence) -> FinitePmf:
    """``lambda_beta(t) = beta_t / bar_beta`` over periods ``1..T``."""
    total = beta.bar_beta
    return make_pmf((t, b / total) for t, b in enumerate(beta.betas, start=1))


def _geometric_betas(delta: Fraction, T: int) -> Tuple[Fraction, ...]:
    # 0 ** 0 == 1 for Fractions, so delta = 0 is the myopic sequence (1, 0, ..., 0).
    return tuple(delta ** (t - 1) for t in range(1, T + 1))


def lambda_geometric(delta: RationalLike, T: int) -> FinitePmf:
    """``lambda(t) = delta^(t-1) (1 - delta) / (1 - delta^T)``, and ``1/T`` when ``delta = 1``.

    ``delta = 0`` puts all weight on the first period.
    """
    delta = to_rational(delta, field="delta")
    if not 0 <= delta <= 1:
        raise InputFormatError(f"delta must lie in [0, 1], got {delta}", field="delta")
    if not isinstance(T, int) or T < 1:
        raise InputFormatError(f"Horizon must be a positive integer, got {T!r}", field="horizon")
    if delta == 1:
        return make_pmf((t, Fraction(1, T)) for t in range(1, T + 1))
    scale = (ONE - delta) / (ONE - delta ** T)
    return make_pmf((t, b * scale) for t, b in enumerate(_geometric_betas(delta, T), start=1))


# ======================================================================
# Verdicts
# ======================================================================


@dataclass(frozen=True)
class PeriodCheck:
    """One convex-order comparison inside a verdict.

    ``period`` is ``None`` for the comparison of discounted mixtures.
    """

    period: Optional[int]
    F: PosteriorDistribution
    G: PosteriorDistribution
    result: MpsResult


@dataclass(frozen=True)
class DominanceVerdict:
    """Whether ``pi1`` dominates ``pi2`` for a class of problems, with certificates.

    Attributes:
        query_class: ``"as"`` or ``"discounted"``.
        holds: The verdict.
        checks: Per-period comparisons (``"as"``) or the single mixture
            comparison (``"discounted"``).
        failing_period: Smallest failing period (``"as"`` only).
        counterexample: Problem with ``W(pi1) < W(pi2)`` when the verdict fails.
        values: ``(W(pi1), W(pi2))`` under *counterexample*.
        weights: ``lambda`` used for the mixtures (``"discounted"`` only).
        betas: The per-period weights behind *weights*.
    """

    query_class: str
    holds: bool
    checks: Tuple[PeriodCheck, ...]
    failing_period: Optional[int] = None
    counterexample: Optional[DecisionProblem] = None
    values: Optional[Tuple[Fraction, Fraction]] = None
    weights: Optional[FinitePmf] = None
    betas: Optional[Tuple[Fraction, ...]] = None

    def __bool__(self) -> bool:
        return self.holds

    @property
    def witness(self) -> Optional[ConvexWitness]:
        for check in self.checks:
            if not check.result.holds:
                return check.result.witness
        return None


def _prepare(pi1: DynamicSignal, pi2: DynamicSignal, prior: BeliefVector) -> DynamicSignal:
    """Validate the pair and return *pi2* with its states in *pi1*'s order."""
    if pi1.horizon != pi2.horizon:
        logger.error("Horizon mismatch: %d vs %d", pi1.horizon, pi2.horizon)
        raise HorizonMismatchError(f"Signals have horizons {pi1.horizon} and {pi2.horizon}")
    check_prior(prior, pi1.n_states)
    return pi2.reindexed(pi1.states)


def _confirm_reversal(
    pi1: DynamicSignal, pi2: DynamicSignal, prior: BeliefVector, problem: DecisionProblem
) -> Tuple[Fraction, Fraction]:
    w1, w2 = signal_value(pi1, prior, problem), signal_value(pi2, prior, problem)
    if not w1 < w2:
        logger.error("Counterexample does not reverse: W1=%s, W2=%s", w1, w2)
        raise CertificateError(
            f"Counterexample problem gives W(pi1) = {format_rational(w1)} >= W(pi2) = {format_rational(w2)}"
        )
    return w1, w2


def dominates_as(pi1: DynamicSignal, pi2: DynamicSignal, prior: BeliefVector) -> DominanceVerdict:
    """Dominance for every additively separable problem.

    Holds iff ``F_t ⪰ G_t`` for every period.  On failure the witness of
    the smallest failing period becomes the utility of that period and
    every other period pays zero.

    Raises:
        HorizonMismatchError: If the horizons differ.
        DimensionMismatchError: If the signals have different state labels.
        PriorNotInteriorError: If the prior lacks full support.
    """
    pi2 = _prepare(pi1, pi2, prior)
    Fs, Gs = posterior_sequence(pi1, prior), posterior_sequence(pi2, prior)
    checks = tuple(
        PeriodCheck(t, F, G, mps_check(F, G)) for t, (F, G) in enumerate(zip(Fs, Gs), start=1)
    )
    failing = next((c.period for c in checks if not c.result.holds), None)
    if failing is None:
        logger.info("AS dominance holds over %d periods", pi1.horizon)
        return DominanceVerdict("as", True, checks)
    witness = checks[failing - 1].result.witness
    problem = separating_problem(witness, failing, pi1.horizon, states=pi1.states)
    values = _confirm_reversal(pi1, pi2, prior, problem)
    logger.info("AS dominance fails at period %d", failing)
    return DominanceVerdict("as", False, checks, failing_period=failing, counterexample=problem, values=values)


def _discounted_verdict(
    pi1: DynamicSignal,
    pi2: DynamicSignal,
    prior: BeliefVector,
    lam: FinitePmf,
    betas: Tuple[Fraction, ...],
) -> DominanceVerdict:
    F_beta = weighted_mixture(posterior_sequence(pi1, prior), lam, pi1.horizon)
    G_beta = weighted_mixture(posterior_sequence(pi2, prior), lam, pi1.horizon)
    result = mps_check(F_beta, G_beta)
    check = PeriodCheck(None, F_beta, G_beta, result)
    if result.holds:
        return DominanceVerdict("discounted", True, (check,), weights=lam, betas=betas)
    pieces = result.witness.pieces
    problem = discounted_problem(pi1.states, range(len(pieces)), pieces, betas)
    values = _confirm_reversal(pi1, pi2, prior, problem)
    return DominanceVerdict(
        "discounted", False, (check,), counterexample=problem, values=values, weights=lam, betas=betas
    )


def dominates_discounted(
    pi1: DynamicSignal, pi2: DynamicSignal, prior: BeliefVector, beta: DiscountSequence
) -> DominanceVerdict:
    """Dominance for every problem ``u_t = beta_t * v``.

    Holds iff ``F^beta ⪰ G^beta`` with ``F^beta = sum_t lambda_beta(t) F_t``.
    On failure the witness pieces become the one-shot utility ``v``.
    """
    pi2 = _prepare(pi1, pi2, prior)
    if beta.horizon != pi1.horizon:
        raise HorizonMismatchError(f"Discount sequence has {beta.horizon} periods, signals have {pi1.horizon}")
    verdict = _discounted_verdict(pi1, pi2, prior, lambda_weights(beta), beta.betas)
    logger.info("Discounted dominance under beta=%s: %s", beta, verdict.holds)
    return verdict


def dominates_geometric(
    pi1: DynamicSignal, pi2: DynamicSignal, prior: BeliefVector, delta: RationalLike
) -> DominanceVerdict:
    """Dominance for the ``delta``-discounted class, ``beta_t = delta^(t-1)``, ``0 <= delta <= 1``."""
    pi2 = _prepare(pi1, pi2, prior)
    delta = to_rational(delta, field="delta")
    lam = lambda_geometric(delta, pi1.horizon)
    verdict = _discounted_verdict(pi1, pi2, prior, lam, _geometric_betas(delta, pi1.horizon))
    logger.info("Geometric dominance under delta=%s: %s", format_rational(delta), verdict.holds)
    return verdict


@dataclass(frozen=True)
class FamilyVerdict:
    """Per-sequence verdicts of a discount-family sweep; see :data:`ONE_SIDED_NOTE`."""

    members: Tuple[Tuple[DiscountSequence, DominanceVerdict], ...]
    note: str = ONE_SIDED_NOTE

    @property
    def holds(self) -> bool:
        return all(v.holds for _, v in self.members)

    def __bool__(self) -> bool:
        return self.holds

    @property
    def first_failure(self) -> Optional[Tuple[DiscountSequence, DominanceVerdict]]:
        return next(((b, v) for b, v in self.members if not v.holds), None)


def dominates_discounted_family(
    pi1: DynamicSignal, pi2: DynamicSignal, prior: BeliefVector, betas: Sequence[DiscountSequence]
) -> FamilyVerdict:
    """Run :func:`dominates_discounted` for every sequence of *betas*.

    Raises:
        EmptyFamilyError: If *betas* is empty.
    """
    if not betas:
        raise EmptyFamilyError("A discount family needs at least one sequence")
    return FamilyVerdict(tuple((beta, dominates_discounted(pi1, pi2, prior, beta)) for beta in betas))


# ======================================================================
# Arrival lotteries
# ======================================================================


def _check_arrival_inputs(xi: StaticExperiment, h: ArrivalLottery, p: ArrivalLottery, prior: BeliefVector) -> None:
    if h.horizon != p.horizon:
        raise HorizonMismatchError(f"Lotteries have horizons {h.horizon} and {p.horizon}")
    check_prior(prior, xi.n_states)


def earlier_is_better(
    xi: StaticExperiment, h: ArrivalLottery, p: ArrivalLottery, prior: BeliefVector
) -> DominanceVerdict:
    """Does receiving *xi* at time ``Y ~ h`` dominate receiving it at ``Y ~ p``?

    The answer is ``fosd_check(h, p)``; the AS dominance test on the two
    arrival signals is run as well and must agree.

    Raises:
        TrivialExperimentError: If *xi* never moves the prior.
        HorizonMismatchError: If the lotteries have different horizons.
        CertificateError: If the two procedures disagree.
    """
    _check_arrival_inputs(xi, h, p, prior)
    if xi.is_trivial(prior):
        raise TrivialExperimentError("The static experiment never moves the prior")
    earlier = fosd_check(h, p)
    verdict = dominates_as(arrival_signal(xi, h), arrival_signal(xi, p), prior)
    if verdict.holds != earlier:
        logger.error("FOSD says %s, per-period convex order says %s", earlier, verdict.holds)
        raise CertificateError("Arrival-time FOSD and per-period convex order disagree")
    return verdict


@dataclass(frozen=True)
class RiskLovingReport:
    """``sosd(h, p)`` next to the discounted verdict for decreasing ``beta``.

    Attributes:
        sosd: Whether *h* is a mean-preserving spread of *p*.
        verdict: Discounted dominance of the *h*-arrival signal over the *p*-arrival signal.
        splittings: Binary splittings turning *p* into *h* when *sosd* holds.
    """

    sosd: bool
    verdict: DominanceVerdict
    splittings: Tuple[BinarySplitting, ...] = ()

    @property
    def implication_holds(self) -> bool:
        return not self.sosd or self.verdict.holds


def risk_loving_check(
    xi: StaticExperiment, h: ArrivalLottery, p: ArrivalLottery, prior: BeliefVector, beta: DiscountSequence
) -> RiskLovingReport:
    """With decreasing *beta*, a spread-out arrival time is weakly preferred.

    Raises:
        BetaNotDecreasingError: If *beta* is not decreasing.
        HorizonMismatchError: If horizons disagree.
        CertificateError: If ``sosd`` holds but the mixtures are not ordered.
    """
    if not beta.is_decreasing:
        raise BetaNotDecreasingError(f"Discount sequence {beta} is not decreasing")
    _check_arrival_inputs(xi, h, p, prior)
    sosd = sosd_check(h, p)
    verdict = dominates_discounted(arrival_signal(xi, h), arrival_signal(xi, p), prior, beta)
    splittings: Tuple[BinarySplitting, ...] = ()
    if sosd:
        splittings = tuple(decompose_splittings(p, h))
        if not verdict.holds:
            logger.error("SOSD holds with decreasing beta %s but the mixtures are not ordered", beta)
            raise CertificateError("Spread-out arrival lost under a decreasing discount sequence")
    return RiskLovingReport(sosd, verdict, splittings)


@dataclass(frozen=True)
class IncreasingBetaCounterexample:
    """A spread of the arrival time that strictly hurts under an increasing ``beta``.

    ``h`` is a mean-preserving spread of ``p`` yet the matching problem
    with ``u_t = beta_t * 1[a = theta]`` values the ``h``-arrival signal
    strictly less.
    """

    beta: DiscountSequence
    xi: StaticExperiment
    h: ArrivalLottery
    p: ArrivalLottery
    prior: BeliefVector
    splitting: BinarySplitting
    verdict: DominanceVerdict
    revealed_mass: Tuple[Fraction, Fraction]
    values: Tuple[Fraction, Fraction]


def _search_grid(T: int, ratio_bound: int) -> Tuple[DiscountSequence, ...]:
    geometric = [
        DiscountSequence(tuple(Fraction(r) ** (t - 1) for t in range(1, T + 1)))
        for r in range(2, ratio_bound + 1)
    ]
    linear = DiscountSequence(tuple(Fraction(t) for t in range(1, T + 1)))
    return tuple(geometric + [linear])


def increasing_beta_counterexample(
    T: int,
    ratio_bound: Optional[int] = None,
    betas: Optional[Sequence[DiscountSequence]] = None,
) -> IncreasingBetaCounterexample:
    """Search for a mean-preserving spread of arrival that is strictly worse.

    The grid: geometric sequences ``r^(t-1)`` for ``r = 2..ratio_bound``
    followed by ``beta_t = t`` (or the caller's *betas*), point-mass
    arrivals at ``y2 in 2..T-1`` fully split onto ``z1 < y2 < z3``, and a
    fully revealing two-state experiment under the uniform prior.

    Raises:
        InputFormatError: If ``T < 3``.
        CounterexampleNotFoundError: If no grid point reverses the ranking.
    """
    if not isinstance(T, int) or T < 3:
        raise InputFormatError(f"A binary splitting needs T >= 3, got {T!r}", field="T")
    if betas is None:
        bound = ratio_bound if ratio_bound is not None else int(SEARCH_CONFIG.get("ratio_bound", 4))
        betas = _search_grid(T, bound)
    states = ("theta1", "theta2")
    xi = StaticExperiment.fully_revealing(states)
    prior = BeliefVector.uniform(2)
    for beta in betas:
        if beta.horizon != T:
            raise HorizonMismatchError(f"Discount sequence {beta} does not have {T} periods")
        lam = lambda_weights(beta)
        for y2 in range(2, T):
            p = ArrivalLottery.point_mass(y2, T)
            for z1 in range(y2 - 1, 0, -1):
                for z3 in range(y2 + 1, T + 1):
                    split = BinarySplitting(
                        z1, y2, z3, Fraction(z3 - y2, z3 - z1), Fraction(y2 - z1, z3 - z1)
                    )
                    h = apply_splitting(p, split)
                    revealed = (
                        sum((w * h.cdf(t) for t, w in lam), ZERO),
                        sum((w * p.cdf(t) for t, w in lam), ZERO),
                    )
                    if not revealed[0] < revealed[1]:
                        continue
                    pi1, pi2 = arrival_signal(xi, h), arrival_signal(xi, p)
                    verdict = dominates_discounted(pi1, pi2, prior, beta)
                    problem = matching_problem(states, T, beta.betas)
                    values = (signal_value(pi1, prior, problem), signal_value(pi2, prior, problem))
                    if verdict.holds or not values[0] < values[1] or not sosd_check(h, p):
                        logger.error("Grid point beta=%s, split=%s did not verify", beta, split)
                        raise CertificateError("Revealed-mass gap without a verified dominance reversal")
                    logger.info("Increasing-beta counterexample: beta=%s, split=%s", beta, split)
                    return IncreasingBetaCounterexample(
                        beta, xi, h, p, prior, split, verdict, revealed, values
                    )
    raise CounterexampleNotFoundError(f"No reversal found on a grid of {len(betas)} sequences for T={T}")
