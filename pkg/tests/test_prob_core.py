"""Tests for the exact probability primitives (prob_core.py)."""

from decimal import Decimal
from fractions import Fraction

import pytest

from infodom.exceptions import (
    DimensionMismatchError,
    EmptySupportError,
    InputFormatError,
    NegativeWeightError,
    NotNormalizedError,
)
from infodom.prob_core import (
    AffineMaximum,
    BeliefVector,
    FinitePmf,
    PosteriorDistribution,
    barycenter,
    expectation,
    format_rational,
    make_pmf,
    make_posterior,
    mixture,
    point_mass,
    to_rational,
)


class TestToRational:
    @pytest.mark.parametrize("raw, expected", [
        (3, Fraction(3)),
        ("3/4", Fraction(3, 4)),
        (" 0.125 ", Fraction(1, 8)),
        (Decimal("0.1"), Fraction(1, 10)),
        (Fraction(2, 6), Fraction(1, 3)),
    ])
    def test_accepted_values(self, raw, expected):
        assert to_rational(raw) == expected

    def test_float_rejected(self):
        with pytest.raises(InputFormatError, match="not exact"):
            to_rational(0.5, field="p")

    def test_bool_rejected(self):
        with pytest.raises(InputFormatError):
            to_rational(True)

    def test_garbage_string_rejected(self):
        with pytest.raises(InputFormatError) as exc:
            to_rational("half", field="weight")
        assert exc.value.field == "weight"

    def test_format(self):
        assert format_rational(Fraction(6, 2)) == "3"
        assert format_rational(Fraction(-1, 2)) == "-1/2"


class TestBeliefVector:
    def test_uniform_and_vertex(self):
        assert BeliefVector.uniform(4).probabilities == (Fraction(1, 4),) * 4
        assert BeliefVector.vertex(3, 1).probabilities == (0, 1, 0)

    def test_must_sum_to_one(self):
        with pytest.raises(NotNormalizedError):
            BeliefVector.of("1/2", "1/3")

    def test_negative_coordinate(self):
        with pytest.raises(NegativeWeightError):
            BeliefVector.of(2, -1)

    def test_interior(self):
        assert BeliefVector.uniform(2).is_interior()
        assert not BeliefVector.vertex(2, 0).is_interior()

    def test_dot_checks_dimension(self):
        x = BeliefVector.of("1/4", "3/4")
        assert x.dot([4, 0]) == 1
        with pytest.raises(DimensionMismatchError):
            x.dot([1, 2, 3])

    def test_str(self):
        assert str(BeliefVector.of("1/4", "3/4")) == "(1/4, 3/4)"


class TestFinitePmf:
    def test_merges_duplicates_and_drops_zeros(self):
        pmf = make_pmf([(1, "1/4"), (2, 0), (1, "1/4"), (3, "1/2")])
        assert pmf.as_dict() == {1: Fraction(1, 2), 3: Fraction(1, 2)}
        assert pmf.labels == (1, 3)

    def test_total_is_checked_not_rescaled(self):
        with pytest.raises(NotNormalizedError):
            make_pmf([(1, "1/2"), (2, "1/3")])

    def test_negative_weight(self):
        with pytest.raises(NegativeWeightError):
            make_pmf([(1, "3/2"), (2, "-1/2")])

    def test_all_zero(self):
        with pytest.raises(EmptySupportError):
            make_pmf([(1, 0)])

    def test_equality_ignores_order(self):
        assert make_pmf([(1, "1/3"), (2, "2/3")]) == make_pmf([(2, "2/3"), (1, "1/3")])
        assert hash(make_pmf([(1, 1)])) == hash(make_pmf([(1, 1)]))

    def test_mean_and_cdf(self):
        pmf = make_pmf([(1, "1/2"), (3, "1/2")])
        assert pmf.mean() == 2
        assert pmf.cdf(2) == Fraction(1, 2)
        assert pmf.weight(2) == 0

    def test_direct_construction_rejects_duplicates(self):
        with pytest.raises(InputFormatError):
            FinitePmf(((1, Fraction(1, 2)), (1, Fraction(1, 2))))


class TestPosteriors:
    def test_equal_beliefs_merge(self):
        mu = BeliefVector.uniform(2)
        F = make_posterior([(mu, "1/2"), (BeliefVector.of("1/2", "1/2"), "1/2")])
        assert len(F) == 1
        assert F.weight(mu) == 1

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatchError):
            make_posterior([(BeliefVector.uniform(2), "1/2"), (BeliefVector.uniform(3), "1/2")])

    def test_point_mass_kind(self):
        assert isinstance(point_mass(BeliefVector.uniform(2)), PosteriorDistribution)
        assert not isinstance(point_mass(3), PosteriorDistribution)

    def test_barycenter(self):
        F = make_posterior([(BeliefVector.vertex(2, 0), "1/4"), (BeliefVector.vertex(2, 1), "3/4")])
        assert barycenter(F) == BeliefVector.of("1/4", "3/4")

    def test_expectation(self):
        F = make_posterior([(BeliefVector.vertex(2, 0), "1/2"), (BeliefVector.vertex(2, 1), "1/2")])
        assert expectation(F, lambda x: x[0] * 4) == 2

    def test_mixture_of_revealing_and_prior(self):
        mu = BeliefVector.uniform(2)
        e1, e2 = BeliefVector.vertex(2, 0), BeliefVector.vertex(2, 1)
        revealed = make_posterior([(e1, "1/2"), (e2, "1/2")])
        mixed = mixture([("1/3", revealed), ("2/3", point_mass(mu))])
        assert isinstance(mixed, PosteriorDistribution)
        assert mixed.as_dict() == {mu: Fraction(2, 3), e1: Fraction(1, 6), e2: Fraction(1, 6)}

    def test_mixture_weights_must_sum_to_one(self):
        with pytest.raises(NotNormalizedError):
            mixture([("1/2", point_mass(1))])


class TestAffineMaximum:
    def test_value_and_tie_break(self):
        f = AffineMaximum(((1, 0), (0, 1)))
        x = BeliefVector.uniform(2)
        assert f(x) == Fraction(1, 2)
        assert f.argmax(x) == 0
        assert f.argmax(BeliefVector.vertex(2, 1)) == 1

    def test_pieces_must_share_dimension(self):
        with pytest.raises(DimensionMismatchError):
            AffineMaximum(((1, 0), (1, 0, 0)))

    def test_needs_a_piece(self):
        with pytest.raises(EmptySupportError):
            AffineMaximum(())
