# infodom/stochastic_orders.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Convex order with certificates, FOSD/SOSD on arrival lotteries, binary splittings.

Main entry points:
  - :func:`mps_check` / :func:`mps_check_binary` decide ``F ⪰ G`` and
    return a :class:`Holds` (martingale coupling) or a :class:`Fails`
    (convex witness).
  - :func:`fosd_check` / :func:`sosd_check` compare arrival lotteries.
  - :func:`apply_splitting` / :func:`decompose_splittings` move between a
    lottery and its mean-preserving spreads one binary splitting at a time.
  - :func:`weighted_mixture` forms ``sum_t lambda(t) F_t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from infodom.exceptions import (
    CertificateError,
    DimensionMismatchError,
    HorizonMismatchError,
    InsufficientMassError,
    InvalidSplitError,
    LengthMismatchError,
    NotAnMpsError,
    WrongDimensionError,
)
from infodom.logger import get_logger
from infodom.prob_core import (
    ONE,
    ZERO,
    AffineMaximum,
    BeliefVector,
    FinitePmf,
    PosteriorDistribution,
    barycenter,
    expectation,
    format_rational,
    make_pmf,
    mixture,
    to_rational,
)
from infodom.signals import ArrivalLottery
from infodom.simplex import solve_feasibility

logger = get_logger(__name__)

TimePmf = Union[FinitePmf, ArrivalLottery]


# ======================================================================
# Certificates
# ======================================================================


@dataclass(frozen=True)
class MartingaleCoupling:
    """Transition matrix from the dominated ``G`` to the dominating ``F``.

    Attributes:
        rows: Support of ``G`` (beliefs ``y_i``).
        columns: Support of ``F`` (beliefs ``x_j``).
        matrix: ``q[i][j]``, the probability of moving from ``y_i`` to ``x_j``.
    """

    rows: Tuple[BeliefVector, ...]
    columns: Tuple[BeliefVector, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]

    def violations(self, F: PosteriorDistribution, G: PosteriorDistribution) -> List[str]:
        """Every coupling condition that fails for the pair ``(F, G)``; empty when valid."""
        problems: List[str] = []
        if len(self.matrix) != len(self.rows) or any(len(r) != len(self.columns) for r in self.matrix):
            return ["matrix shape does not match its labels"]
        if set(self.rows) != set(G.support) or len(self.rows) != len(G):
            problems.append("row labels are not the support of G")
        if set(self.columns) != set(F.support) or len(self.columns) != len(F):
            problems.append("column labels are not the support of F")
        if problems:
            return problems
        g = [G.weight(y) for y in self.rows]
        for i, (y, row) in enumerate(zip(self.rows, self.matrix)):
            if any(q < 0 for q in row):
                problems.append(f"row {i} has a negative entry")
            if sum(row, ZERO) != 1:
                problems.append(f"row {i} does not sum to 1")
            for theta in range(y.dim):
                mean = sum((q * x[theta] for q, x in zip(row, self.columns)), ZERO)
                if mean != y[theta]:
                    problems.append(f"row {i} has conditional mean {mean} != {y[theta]} in state {theta}")
        for j, x in enumerate(self.columns):
            mass = sum((g[i] * self.matrix[i][j] for i in range(len(self.rows))), ZERO)
            if mass != F.weight(x):
                problems.append(f"column {j} receives mass {mass} != {F.weight(x)}")
        return problems

    def is_valid(self, F: PosteriorDistribution, G: PosteriorDistribution) -> bool:
        return not self.violations(F, G)

    def validate(self, F: PosteriorDistribution, G: PosteriorDistribution) -> None:
        """Raise :class:`CertificateError` unless the coupling certifies ``F ⪰ G``."""
        problems = self.violations(F, G)
        if problems:
            logger.error("Coupling failed re-verification: %s", problems)
            raise CertificateError("Invalid martingale coupling: " + "; ".join(problems))

    @classmethod
    def identity(cls, F: PosteriorDistribution) -> "MartingaleCoupling":
        support = F.support
        matrix = tuple(tuple(ONE if i == j else ZERO for j in range(len(support))) for i in range(len(support)))
        return cls(support, support, matrix)


@dataclass(frozen=True)
class ConvexWitness(AffineMaximum):
    """A convex piecewise-linear function ``w(x) = max_k <piece_k, x>``.

    Returned on failure of ``F ⪰ G``: ``E_F w < E_G w``.
    """

    def gap(self, F: PosteriorDistribution, G: PosteriorDistribution) -> Fraction:
        """``E_F w - E_G w``."""
        if F.dim != self.dim or G.dim != self.dim:
            raise DimensionMismatchError("Witness and distributions live on different state spaces")
        return expectation(F, self) - expectation(G, self)

    def separates(self, F: PosteriorDistribution, G: PosteriorDistribution) -> bool:
        return self.gap(F, G) < 0


@dataclass(frozen=True)
class Holds:
    """``F ⪰ G`` holds, certified by *coupling*."""

    coupling: MartingaleCoupling

    @property
    def holds(self) -> bool:
        return True

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Fails:
    """``F ⪰ G`` fails, certified by *witness*."""

    witness: ConvexWitness

    @property
    def holds(self) -> bool:
        return False

    def __bool__(self) -> bool:
        return False


MpsResult = Union[Holds, Fails]


# ======================================================================
# Convex order
# ======================================================================


def _check_same_space(F: PosteriorDistribution, G: PosteriorDistribution) -> None:
    if F.dim != G.dim:
        logger.error("Dimension mismatch: %d vs %d", F.dim, G.dim)
        raise DimensionMismatchError(f"Distributions over {F.dim} and {G.dim} states cannot be compared")


def _mean_gap_witness(F: PosteriorDistribution, G: PosteriorDistribution) -> ConvexWitness:
    """A single linear piece separating distributions with different barycenters."""
    bf, bg = barycenter(F), barycenter(G)
    theta = next(k for k in range(F.dim) if bf[k] < bg[k])
    return ConvexWitness((tuple(ONE if k == theta else ZERO for k in range(F.dim)),))


def _coupling_program(F: PosteriorDistribution, G: PosteriorDistribution):
    """Constraint system over ``q[i][j]`` flattened row-major.

    Row-sum rows come first, then column-mass rows for ``j >= 1``, then
    mean rows for states ``theta >= 1``.  The dropped rows are implied.
    """
    ys, g = G.labels, G.weights
    xs, f = F.labels, F.weights
    nG, nF, dim = len(ys), len(xs), F.dim
    A: List[List[Fraction]] = []
    b: List[Fraction] = []

    def blank() -> List[Fraction]:
        return [ZERO] * (nG * nF)

    for i in range(nG):
        row = blank()
        for j in range(nF):
            row[i * nF + j] = ONE
        A.append(row)
        b.append(ONE)
    for j in range(1, nF):
        row = blank()
        for i in range(nG):
            row[i * nF + j] = g[i]
        A.append(row)
        b.append(f[j])
    for i in range(nG):
        for theta in range(1, dim):
            row = blank()
            for j in range(nF):
                row[i * nF + j] = xs[j][theta]
            A.append(row)
            b.append(ys[i][theta])
    return A, b


def _witness_from_farkas(F: PosteriorDistribution, G: PosteriorDistribution, y: Sequence[Fraction]) -> ConvexWitness:
    """Fold Farkas multipliers into one affine piece per atom of ``G``.

    With ``alpha_i`` (row sums), ``beta_j`` (column mass) and
    ``gamma_i`` (means), infeasibility gives
    ``alpha_i + g_i beta_j + <gamma_i, x_j> <= 0`` and a positive
    objective, so ``w(x) = max_i (alpha_i + <gamma_i, x>) / g_i``
    satisfies ``E_F w <= -sum f_j beta_j < E_G w``.
    """
    nG, dim = len(G), F.dim
    nF = len(F)
    alpha = y[:nG]
    gamma_start = nG + (nF - 1)
    pieces = []
    for i, g_i in enumerate(G.weights):
        gamma = [ZERO] + list(y[gamma_start + i * (dim - 1): gamma_start + (i + 1) * (dim - 1)])
        piece = tuple((alpha[i] + gamma[theta]) / g_i for theta in range(dim))
        if piece not in pieces:
            pieces.append(piece)
    return ConvexWitness(tuple(pieces))


def mps_check(F: PosteriorDistribution, G: PosteriorDistribution) -> MpsResult:
    """Decide whether *F* is a mean-preserving spread of *G* (``F ⪰ G``).

    Solves the coupling program exactly.  On success the coupling is
    returned; otherwise a convex witness is built from the Farkas
    multipliers.  Either certificate is re-verified by direct evaluation.

    Args:
        F: The candidate dominating distribution.
        G: The candidate dominated distribution.

    Returns:
        Holds | Fails: The verdict and its certificate.

    Raises:
        DimensionMismatchError: If *F* and *G* live on different state spaces.
        CertificateError: If a certificate fails re-verification.
    """
    _check_same_space(F, G)
    if F == G:
        return Holds(MartingaleCoupling.identity(F))
    if barycenter(F) != barycenter(G):
        witness = _mean_gap_witness(F, G)
        logger.info("Barycenters differ; linear witness %s", witness.pieces)
        return _verified_fails(F, G, witness)

    A, b = _coupling_program(F, G)
    result = solve_feasibility(A, b)
    logger.debug("Coupling program %dx%d solved in %d pivots", len(A), len(A[0]), result.pivots)
    if result.feasible:
        nF = len(F)
        q = result.solution
        matrix = tuple(tuple(q[i * nF:(i + 1) * nF]) for i in range(len(G)))
        coupling = MartingaleCoupling(G.labels, F.labels, matrix)
        coupling.validate(F, G)
        return Holds(coupling)
    return _verified_fails(F, G, _witness_from_farkas(F, G, result.farkas))


def _verified_fails(F: PosteriorDistribution, G: PosteriorDistribution, witness: ConvexWitness) -> Fails:
    if not witness.separates(F, G):
        logger.error("Witness %s does not separate", witness.pieces)
        raise CertificateError("Convex witness failed re-verification: E_F w >= E_G w")
    return Fails(witness)


def _call_option(dist: PosteriorDistribution, c: Fraction) -> Fraction:
    return sum((w * max(x[0] - c, ZERO) for x, w in dist.atoms), ZERO)


def mps_check_binary(F: PosteriorDistribution, G: PosteriorDistribution) -> MpsResult:
    """Two-state convex order through the integrated cdf.

    With equal means, ``F ⪰ G`` iff ``E_F (x_1 - c)^+ >= E_G (x_1 - c)^+``
    at every kink ``c`` in the union of supports.  A failing ``c`` gives
    the witness ``max(0, (1 - c) x_1 - c x_2)``.  Couplings come from the
    same program as :func:`mps_check`.

    Raises:
        WrongDimensionError: If the state space does not have two states.
    """
    _check_same_space(F, G)
    if F.dim != 2:
        raise WrongDimensionError(f"mps_check_binary needs two states, got {F.dim}")
    if barycenter(F) != barycenter(G):
        return _verified_fails(F, G, _mean_gap_witness(F, G))
    kinks = sorted({x[0] for x in F.support} | {y[0] for y in G.support})
    for c in kinks:
        if _call_option(F, c) < _call_option(G, c):
            logger.info("Integrated cdf fails at x_1 = %s", format_rational(c))
            return _verified_fails(F, G, ConvexWitness(((ZERO, ZERO), (ONE - c, -c))))
    verdict = mps_check(F, G)
    if not verdict.holds:
        logger.error("Binary criterion and coupling program disagree")
        raise CertificateError("Integrated-cdf criterion holds but the coupling program is infeasible")
    return verdict


def weighted_mixture(
    dists: Sequence[PosteriorDistribution], lam: FinitePmf, horizon: Optional[int] = None
) -> PosteriorDistribution:
    """``sum_t lam(t) F_t`` with equal beliefs merged.

    *lam* may leave periods unweighted (a point mass picks one ``F_t``),
    so the number of periods is checked against *horizon* when given.

    Args:
        dists: ``(F_1, ..., F_T)``.
        lam: Pmf over periods ``1..T``.
        horizon: Expected number of periods ``T``.

    Raises:
        LengthMismatchError: If *lam* weights a period with no distribution,
            or ``len(dists) != horizon``.
    """
    T = len(dists)
    if horizon is not None and T != horizon:
        logger.error("Mixture of %d distributions over a %d-period horizon", T, horizon)
        raise LengthMismatchError(f"Expected {horizon} distributions, got {T}")
    bad = [t for t in lam.labels if not (isinstance(t, int) and 1 <= t <= T)]
    if bad:
        raise LengthMismatchError(f"Weights on periods {bad} but only {T} distributions given")
    return mixture((w, dists[t - 1]) for t, w in lam)


# ======================================================================
# Arrival lotteries
# ======================================================================


def _check_horizons(H: ArrivalLottery, P: ArrivalLottery) -> None:
    if H.horizon != P.horizon:
        logger.error("Horizon mismatch: %d vs %d", H.horizon, P.horizon)
        raise HorizonMismatchError(f"Lotteries have horizons {H.horizon} and {P.horizon}")


def fosd_check(H: ArrivalLottery, P: ArrivalLottery) -> bool:
    """True iff ``H(y) >= P(y)`` for every period, i.e. *H* arrives stochastically earlier."""
    _check_horizons(H, P)
    return all(H.cdf(y) >= P.cdf(y) for y in range(1, H.horizon + 1))


def sosd_check(H: ArrivalLottery, P: ArrivalLottery) -> bool:
    """True iff *H* is a mean-preserving spread of *P*.

    Means must be equal and ``sum_{i <= y} (H(i) - P(i)) >= 0`` for every
    period ``y``.
    """
    _check_horizons(H, P)
    if H.mean() != P.mean():
        return False
    running = ZERO
    for y in range(1, H.horizon + 1):
        running += H.cdf(y) - P.cdf(y)
        if running < 0:
            return False
    return True


@dataclass(frozen=True)
class BinarySplitting:
    """Move ``eta1`` from ``y2`` down to ``z1`` and ``eta3`` up to ``z3``, keeping the mean.

    Attributes:
        z1: Lower target time.
        y2: Time giving up mass.
        z3: Upper target time.
        eta1: Mass moved to ``z1``.
        eta3: Mass moved to ``z3``.
    """

    z1: int
    y2: int
    z3: int
    eta1: Fraction
    eta3: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta1", to_rational(self.eta1, field="eta1"))
        object.__setattr__(self, "eta3", to_rational(self.eta3, field="eta3"))
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (self.z1, self.y2, self.z3)):
            raise InvalidSplitError("Splitting times must be integers")
        if not self.z1 < self.y2 < self.z3:
            raise InvalidSplitError(f"Need z1 < y2 < z3, got {self.z1}, {self.y2}, {self.z3}")
        if self.eta1 <= 0 or self.eta3 <= 0:
            raise InvalidSplitError("Split masses must be strictly positive")
        if self.eta1 * self.z1 + self.eta3 * self.z3 != (self.eta1 + self.eta3) * self.y2:
            raise InvalidSplitError("Splitting does not preserve the mean")

    @property
    def moved(self) -> Fraction:
        return self.eta1 + self.eta3


def _masses(p: TimePmf) -> Dict[int, Fraction]:
    return dict((p.pmf if isinstance(p, ArrivalLottery) else p).atoms)


def _rebuild(like: TimePmf, masses: Dict[int, Fraction]) -> TimePmf:
    pmf = make_pmf(sorted(masses.items()))
    if isinstance(like, ArrivalLottery):
        return ArrivalLottery(like.horizon, pmf)
    return pmf


def apply_splitting(p: TimePmf, s: BinarySplitting) -> TimePmf:
    """Apply one binary splitting to a pmf over times (or an arrival lottery).

    Raises:
        InsufficientMassError: If ``p(y2) < eta1 + eta3``.
        InvalidSplitError: If a target time falls outside the lottery's horizon.
    """
    if isinstance(p, ArrivalLottery) and not (1 <= s.z1 and s.z3 <= p.horizon):
        raise InvalidSplitError(f"Splitting {s} leaves the horizon 1..{p.horizon}")
    masses = _masses(p)
    available = masses.get(s.y2, ZERO)
    if available < s.moved:
        raise InsufficientMassError(
            f"Time {s.y2} holds {format_rational(available)}, splitting moves {format_rational(s.moved)}"
        )
    masses[s.y2] = available - s.moved
    masses[s.z1] = masses.get(s.z1, ZERO) + s.eta1
    masses[s.z3] = masses.get(s.z3, ZERO) + s.eta3
    return _rebuild(p, masses)


def _spread_gap(d: Dict[int, Fraction], y: int) -> Fraction:
    """``D(y) = sum_x d(x) (y - x)^+``."""
    return sum((w * (y - x) for x, w in d.items() if x < y), ZERO)


def decompose_splittings(P: TimePmf, H: TimePmf) -> List[BinarySplitting]:
    """Binary splittings that turn *P* into its mean-preserving spread *H*.

    Greedy: take the leftmost time where the running pmf has more mass
    than *H*, the nearest surplus time on each side, and move as much as
    the mean identity and the remaining spread allow.  Each step clears
    at least one time, so at most ``|supp P| + |supp H|`` steps are used.

    Raises:
        NotAnMpsError: If *H* is not a mean-preserving spread of *P*.
    """
    if isinstance(P, ArrivalLottery) and isinstance(H, ArrivalLottery):
        _check_horizons(H, P)
    current = _masses(P)
    target = _masses(H)
    points = sorted(set(current) | set(target))
    d = {x: target.get(x, ZERO) - current.get(x, ZERO) for x in points}
    if sum((w * x for x, w in d.items()), ZERO) != 0:
        raise NotAnMpsError("Means differ")
    if any(_spread_gap(d, y) < 0 for y in points):
        raise NotAnMpsError("Integrated cdf of the target falls below the source")

    steps: List[BinarySplitting] = []
    while any(d.values()):
        y = min(x for x, w in d.items() if w < 0)
        z1 = max(x for x, w in d.items() if w > 0 and x < y)
        z3 = min(x for x, w in d.items() if w > 0 and x > y)
        eta1 = min(
            d[z1],
            d[z3] * (z3 - y) / (y - z1),
            -d[y] * (z3 - y) / (z3 - z1),
            _spread_gap(d, y) / (y - z1),
        )
        eta3 = eta1 * (y - z1) / (z3 - y)
        step = BinarySplitting(z1, y, z3, eta1, eta3)
        d[z1] -= eta1
        d[z3] -= eta3
        d[y] += step.moved
        steps.append(step)
    logger.info("Decomposed spread into %d binary splittings", len(steps))
    return steps


def apply_all(p: TimePmf, splittings: Sequence[BinarySplitting]) -> TimePmf:
    """Apply *splittings* in order."""
    for s in splittings:
        p = apply_splitting(p, s)
    return p
