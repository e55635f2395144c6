# infodom/prob_core.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Exact finite-probability primitives.

Every number here is a :class:`fractions.Fraction`; nothing is ever
rounded.  Verdicts downstream (convex order, FOSD, SOSD) sit on
equalities, so a tolerance would make them meaningless at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import (
    Any, Callable, Dict, Generic, Hashable, Iterable, Iterator,
    Optional, Sequence, Tuple, Type, TypeVar, Union,
)

from infodom.exceptions import (
    DimensionMismatchError,
    EmptySupportError,
    InputFormatError,
    NegativeWeightError,
    NotNormalizedError,
)
from infodom.logger import get_logger

logger = get_logger(__name__)

#: Exact scalar used throughout the package.
Rational = Fraction

RationalLike = Union[int, Fraction, Decimal, str]

L = TypeVar("L", bound=Hashable)
P = TypeVar("P", bound="FinitePmf")

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: Any, field: Optional[str] = None) -> Fraction:
    """Convert *value* to an exact rational.

    Accepted:
      - int, Fraction, Decimal
      - str: ``"3"``, ``"3/4"``, ``"0.125"`` (decimals are parsed exactly)

    Args:
        value: The value to convert.
        field: Field name used in error messages.

    Returns:
        Fraction: The exact value.

    Raises:
        InputFormatError: For floats, bools, and unparseable strings.
    """
    if isinstance(value, bool):
        raise InputFormatError("Cannot convert bool to an exact rational", field=field)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        raise InputFormatError(
            f"Floats are not exact; pass {value!r} as a string or Decimal", field=field
        )
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputFormatError(f"Not a rational literal: {value!r}", field=field) from e
    raise InputFormatError(f"Cannot convert {type(value).__name__} to an exact rational", field=field)


def format_rational(value: Fraction) -> str:
    """Render a rational as ``"num/den"`` (or ``"num"`` for integers)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ======================================================================
# BeliefVector
# ======================================================================


@dataclass(frozen=True)
class BeliefVector:
    """A point of the probability simplex over the states.

    Attributes:
        probabilities: One exact probability per state, in state order.
    """

    probabilities: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probs = tuple(to_rational(p, field="belief") for p in self.probabilities)
        if not probs:
            raise EmptySupportError("A belief needs at least one state")
        if any(p < 0 for p in probs):
            raise NegativeWeightError(f"Negative belief coordinate in {probs}")
        if sum(probs) != 1:
            raise NotNormalizedError(f"Belief coordinates sum to {sum(probs)}, not 1")
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def of(cls, *values: RationalLike) -> "BeliefVector":
        """Build a belief from positional coordinates."""
        return cls(tuple(to_rational(v) for v in values))

    @classmethod
    def uniform(cls, n: int) -> "BeliefVector":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def vertex(cls, n: int, index: int) -> "BeliefVector":
        """The degenerate belief putting all mass on state *index*."""
        return cls(tuple(ONE if i == index else ZERO for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.probabilities)

    def __len__(self) -> int:
        return len(self.probabilities)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.probabilities)

    def __getitem__(self, index: int) -> Fraction:
        return self.probabilities[index]

    def is_interior(self) -> bool:
        """Whether every state has strictly positive probability."""
        return all(p > 0 for p in self.probabilities)

    def dot(self, coefficients: Sequence[Fraction]) -> Fraction:
        """Exact inner product with a coefficient vector over the states."""
        if len(coefficients) != self.dim:
            raise DimensionMismatchError(
                f"Coefficient vector has {len(coefficients)} entries, belief has {self.dim}"
            )
        return sum((p * c for p, c in zip(self.probabilities, coefficients)), ZERO)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(p) for p in self.probabilities) + ")"


# ======================================================================
# FinitePmf / PosteriorDistribution
# ======================================================================


@dataclass(frozen=True, eq=False)
class FinitePmf(Generic[L]):
    """A finitely supported probability mass function.

    Labels are generic (time indices, beliefs, signal paths).  Atoms keep
    first-insertion order, which makes every derived report deterministic.

    Attributes:
        atoms: ``(label, weight)`` pairs; weights strictly positive and
            summing to exactly one, labels pairwise distinct.
    """

    atoms: Tuple[Tuple[L, Fraction], ...]

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.atoms]
        if not self.atoms:
            raise EmptySupportError("A pmf needs at least one atom")
        if len(set(labels)) != len(labels):
            raise InputFormatError("Pmf labels must be distinct; build through make_pmf to merge")
        if any(w <= 0 for _, w in self.atoms):
            raise NegativeWeightError("Pmf atoms must carry strictly positive weight")
        total = sum((w for _, w in self.atoms), ZERO)
        if total != 1:
            raise NotNormalizedError(f"Pmf weights sum to {total}, not 1")

    @classmethod
    def from_atoms(cls: Type[P], atoms: Iterable[Tuple[Any, RationalLike]]) -> P:
        """Validate, merge and build a pmf (see :func:`make_pmf`)."""
        merged: Dict[Any, Fraction] = {}
        for label, weight in atoms:
            w = to_rational(weight, field="weight")
            if w < 0:
                logger.error("Negative weight %s on atom %r", w, label)
                raise NegativeWeightError(f"Negative weight {w} on atom {label!r}")
            merged[label] = merged.get(label, ZERO) + w
        kept = tuple((label, w) for label, w in merged.items() if w != 0)
        if not kept:
            raise EmptySupportError("Every atom has zero weight")
        total = sum((w for _, w in kept), ZERO)
        if total != 1:
            raise NotNormalizedError(f"Pmf weights sum to {total}, not 1")
        return cls(kept)

    # -- views ----------------------------------------------------------

    @property
    def labels(self) -> Tuple[L, ...]:
        return tuple(label for label, _ in self.atoms)

    @property
    def weights(self) -> Tuple[Fraction, ...]:
        return tuple(w for _, w in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Tuple[L, Fraction]]:
        return iter(self.atoms)

    def weight(self, label: L) -> Fraction:
        """Mass on *label*; zero off the support."""
        for lab, w in self.atoms:
            if lab == label:
                return w
        return ZERO

    def as_dict(self) -> Dict[L, Fraction]:
        return dict(self.atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePmf):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(frozenset(self.atoms))

    # -- numeric labels -------------------------------------------------

    def mean(self) -> Fraction:
        """Mean of a pmf over numeric labels."""
        return sum((Fraction(label) * w for label, w in self.atoms), ZERO)

    def cdf(self, y: Any) -> Fraction:
        """``P(X <= y)`` for a pmf over numeric labels."""
        return sum((w for label, w in self.atoms if label <= y), ZERO)

    def __repr__(self) -> str:
        inner = ", ".join(f"{label}: {format_rational(w)}" for label, w in self.atoms)
        return f"{type(self).__name__}{{{inner}}}"


@dataclass(frozen=True, eq=False)
class PosteriorDistribution(FinitePmf[BeliefVector]):
    """A finitely supported distribution over beliefs.

    Houses the per-period posterior distributions, their discounted
    mixtures, and the posterior distribution of a static experiment.
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        if any(not isinstance(x, BeliefVector) for x, _ in self.atoms):
            raise InputFormatError("Posterior distribution labels must be BeliefVector values")
        dims = {x.dim for x, _ in self.atoms}
        if len(dims) != 1:
            raise DimensionMismatchError(f"Support beliefs have mixed dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.atoms[0][0].dim

    @property
    def support(self) -> Tuple[BeliefVector, ...]:
        return self.labels

    def sorted_atoms(self) -> Tuple[Tuple[BeliefVector, Fraction], ...]:
        """Atoms in descending lexicographic belief order, for display."""
        return tuple(sorted(self.atoms, key=lambda a: a[0].probabilities, reverse=True))


def make_pmf(atoms: Iterable[Tuple[Any, RationalLike]]) -> FinitePmf:
    """Build a :class:`FinitePmf` from ``(label, weight)`` pairs.

    Zero atoms are dropped and duplicate labels merged by summing their
    weights.  The total is checked, never rescaled.

    Args:
        atoms: ``(label, weight)`` pairs; weights as ints, Fractions,
            Decimals or rational strings.

    Returns:
        FinitePmf: The validated pmf.

    Raises:
        NegativeWeightError: If a weight is negative.
        EmptySupportError: If no weight is positive.
        NotNormalizedError: If the weights do not sum to exactly one.
    """
    return FinitePmf.from_atoms(atoms)


def make_posterior(atoms: Iterable[Tuple[BeliefVector, RationalLike]]) -> PosteriorDistribution:
    """Build a :class:`PosteriorDistribution`, merging equal beliefs exactly."""
    return PosteriorDistribution.from_atoms(atoms)


def point_mass(label: Any) -> FinitePmf:
    """The degenerate pmf on *label* (a posterior distribution for beliefs)."""
    kind = PosteriorDistribution if isinstance(label, BeliefVector) else FinitePmf
    return kind(((label, ONE),))


def expectation(dist: FinitePmf, f: Callable[[Any], RationalLike]) -> Fraction:
    """Exact expectation ``sum_i w_i * f(x_i)``."""
    return sum((w * Fraction(f(x)) for x, w in dist.atoms), ZERO)


def barycenter(dist: PosteriorDistribution) -> BeliefVector:
    """Coordinatewise weighted average of the support beliefs."""
    coords = [ZERO] * dist.dim
    for x, w in dist.atoms:
        for i, p in enumerate(x.probabilities):
            coords[i] += w * p
    return BeliefVector(tuple(coords))


def mixture(components: Iterable[Tuple[RationalLike, FinitePmf]]) -> FinitePmf:
    """The mixture ``sum_k lambda_k * D_k`` of pmfs over a common label type.

    Args:
        components: ``(lambda_k, D_k)`` pairs; the lambdas are
            nonnegative and sum to one.

    Returns:
        FinitePmf: The mixture, of the same kind as the components.

    Raises:
        NotNormalizedError: If the mixing weights do not sum to one.
    """
    components = [(to_rational(lam, field="lambda"), d) for lam, d in components]
    if not components:
        raise EmptySupportError("A mixture needs at least one component")
    if any(lam < 0 for lam, _ in components):
        raise NegativeWeightError("Mixing weights must be nonnegative")
    total = sum((lam for lam, _ in components), ZERO)
    if total != 1:
        raise NotNormalizedError(f"Mixing weights sum to {total}, not 1")
    kind = type(components[0][1])
    return kind.from_atoms(
        (label, lam * w) for lam, d in components if lam for label, w in d.atoms
    )


# ======================================================================
# AffineMaximum
# ======================================================================


@dataclass(frozen=True)
class AffineMaximum:
    """A convex piecewise-linear function on the simplex.

    ``f(x) = max_k <pieces[k], x>``.  On the simplex a constant term is
    absorbed into the coefficients because coordinates sum to one.
    """

    pieces: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        pieces = tuple(tuple(to_rational(c, field="piece") for c in piece) for piece in self.pieces)
        if not pieces:
            raise EmptySupportError("At least one affine piece is required")
        if len({len(p) for p in pieces}) != 1:
            raise DimensionMismatchError("Affine pieces have different lengths")
        object.__setattr__(self, "pieces", pieces)

    @property
    def dim(self) -> int:
        return len(self.pieces[0])

    def piece_values(self, x: BeliefVector) -> Tuple[Fraction, ...]:
        return tuple(x.dot(piece) for piece in self.pieces)

    def __call__(self, x: BeliefVector) -> Fraction:
        return max(self.piece_values(x))

    def argmax(self, x: BeliefVector) -> int:
        """Index of the maximizing piece; ties go to the lowest index."""
        values = self.piece_values(x)
        best = max(values)
        return values.index(best)
