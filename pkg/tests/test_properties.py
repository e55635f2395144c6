"""Property-based tests over seeded random instances using Hypothesis."""

from fractions import Fraction
from itertools import islice

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from infodom.prob_core import BeliefVector, barycenter, expectation, make_posterior, mixture, point_mass
from infodom.signals import posterior_sequence, uninformative_signal
from infodom.stochastic_orders import (
    apply_all,
    decompose_splittings,
    fosd_check,
    mps_check,
    mps_check_binary,
    sosd_check,
)
from infodom.decision import SamplerConfig, sample_problems, signal_value, value_function
from infodom.dominance import DiscountSequence, dominates_as, lambda_geometric, lambda_weights
from infodom.sampling import (
    random_garbling,
    random_lottery,
    random_prior,
    random_signal,
    random_signal_pair,
    random_spread,
    state_labels,
)

_seeds = st.integers(min_value=0, max_value=2**32 - 1)
_settings = settings(max_examples=30, deadline=None)
_fractions = st.integers(min_value=0, max_value=12).map(lambda k: Fraction(k, 12))


@st.composite
def signal_instances(draw, n_states=None):
    """A random signal with a full-support prior."""
    rng = np.random.default_rng(draw(_seeds))
    n = n_states or draw(st.sampled_from([2, 3]))
    T = draw(st.integers(min_value=1, max_value=3))
    return random_signal(rng, state_labels(n), T), random_prior(rng, n)


@st.composite
def binary_posteriors(draw):
    """A two-state posterior distribution with at most four support points."""
    atoms = draw(st.lists(st.tuples(_fractions, st.integers(1, 5)), min_size=1, max_size=4))
    total = sum(w for _, w in atoms)
    return make_posterior((BeliefVector.of(x, 1 - x), Fraction(w, total)) for x, w in atoms)


@st.composite
def deltas(draw):
    return Fraction(draw(st.integers(1, 8)), 8)


def _call(F, c):
    return expectation(F, lambda x: max(x[0] - c, Fraction(0)))


def _blend(a, x, y):
    return BeliefVector(tuple(a * p + (1 - a) * q for p, q in zip(x.probabilities, y.probabilities)))


class TestPosteriorProperties:
    @_settings
    @given(signal_instances())
    def test_barycenter_is_prior(self, instance):
        signal, prior = instance
        assert all(barycenter(F) == prior for F in posterior_sequence(signal, prior))

    @_settings
    @given(signal_instances())
    def test_posteriors_refine(self, instance):
        signal, prior = instance
        Fs = posterior_sequence(signal, prior)
        assert all(mps_check(later, earlier).holds for earlier, later in zip(Fs, Fs[1:]))

    @_settings
    @given(signal_instances())
    def test_dominance_is_reflexive(self, instance):
        signal, prior = instance
        assert dominates_as(signal, signal, prior).holds

    @_settings
    @given(signal_instances(), st.integers(-5, 5))
    def test_expectation_of_constant(self, instance, c):
        signal, prior = instance
        assert all(expectation(F, lambda x: c) == c for F in posterior_sequence(signal, prior))

    @_settings
    @given(signal_instances(n_states=2), signal_instances(n_states=2), _fractions)
    def test_barycenter_is_linear_under_mixtures(self, first, second, a):
        F = posterior_sequence(*first)[0]
        G = posterior_sequence(*second)[0]
        assert barycenter(mixture([(a, F), (1 - a, G)])) == _blend(a, barycenter(F), barycenter(G))


class TestConvexOrderProperties:
    @_settings
    @given(_seeds)
    def test_binary_check_agrees_with_coupling_program(self, seed):
        rng = np.random.default_rng(seed)
        states = state_labels(2)
        pi1, pi2 = random_signal_pair(rng, states, 2)
        prior = random_prior(rng, 2)
        for F, G in zip(posterior_sequence(pi1, prior), posterior_sequence(pi2, prior)):
            assert mps_check_binary(F, G).holds == mps_check(F, G).holds

    @_settings
    @given(binary_posteriors(), binary_posteriors())
    def test_failure_matches_call_option_search(self, F, G):
        kinks = {x[0] for x in F.support + G.support}
        separated = barycenter(F) != barycenter(G) or any(_call(F, c) < _call(G, c) for c in kinks)
        result = mps_check(F, G)
        assert result.holds is not separated
        if not result.holds:
            assert result.witness.gap(F, G) < 0

    @_settings
    @given(binary_posteriors(), _fractions, _fractions, binary_posteriors())
    def test_transitive(self, F, a, b, other):
        center = point_mass(barycenter(F))
        G = mixture([(a, F), (1 - a, center)])
        K = mixture([(b, G), (1 - b, center)])
        assert mps_check(F, G).holds and mps_check(G, K).holds
        assert mps_check(F, K).holds
        for X, Y, Z in ((F, G, other), (other, F, K), (F, other, K)):
            if mps_check(X, Y).holds and mps_check(Y, Z).holds:
                assert mps_check(X, Z).holds

    @_settings
    @given(_seeds)
    def test_transitive_along_garblings(self, seed):
        rng = np.random.default_rng(seed)
        states = state_labels(3)
        pi = random_signal(rng, states, 2)
        once = random_garbling(rng, pi)
        twice = random_garbling(rng, once)
        prior = random_prior(rng, 3)
        chains = zip(*(posterior_sequence(s, prior) for s in (pi, once, twice)))
        for F, G, K in chains:
            assert mps_check(F, G).holds and mps_check(G, K).holds
            assert mps_check(F, K).holds


class TestLotteryProperties:
    @_settings
    @given(_seeds, st.integers(min_value=1, max_value=7))
    def test_decomposition_reproduces_spread(self, seed, T):
        P, H = random_spread(np.random.default_rng(seed), T)
        steps = decompose_splittings(P, H)
        assert apply_all(P, steps) == H
        assert len(steps) <= len(P.pmf) + len(H.pmf)

    @_settings
    @given(_seeds, st.integers(min_value=1, max_value=6))
    def test_orders_are_reflexive(self, seed, T):
        h = random_lottery(np.random.default_rng(seed), T)
        assert fosd_check(h, h)
        assert sosd_check(h, h)


class TestDiscountProperties:
    @_settings
    @given(deltas(), st.integers(min_value=1, max_value=6))
    def test_geometric_weights(self, delta, T):
        weights = lambda_geometric(delta, T)
        assert weights == lambda_weights(DiscountSequence.geometric(delta, T))
        assert sum(weights.weights) == 1

    @_settings
    @given(st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=6), st.integers(1, 5))
    def test_lambda_is_scale_free(self, raw, scale):
        beta = DiscountSequence.of(*raw)
        scaled = DiscountSequence.of(*(scale * b for b in raw))
        assert lambda_weights(beta) == lambda_weights(scaled)


class TestValueProperties:
    @_settings
    @given(_seeds, _fractions)
    def test_value_function_is_convex(self, seed, a):
        rng = np.random.default_rng(seed)
        n = 2 + seed % 2
        problem = next(sample_problems(SamplerConfig(state_labels(n), 1), seed))
        V = value_function(problem, 1)
        x, y = random_prior(rng, n), random_prior(rng, n)
        assert V(_blend(a, x, y)) <= a * V(x) + (1 - a) * V(y)

    @_settings
    @given(signal_instances(), _seeds)
    def test_posteriors_beat_the_prior(self, instance, seed):
        signal, prior = instance
        problem = next(sample_problems(SamplerConfig(signal.states, signal.horizon), seed))
        for t, F in enumerate(posterior_sequence(signal, prior), start=1):
            V = value_function(problem, t)
            assert expectation(F, V) >= V(prior)

    @_settings
    @given(signal_instances(), _seeds)
    def test_information_never_hurts(self, instance, seed):
        signal, prior = instance
        noise = uninformative_signal(signal.states, signal.horizon)
        config = SamplerConfig(signal.states, signal.horizon)
        for problem in islice(sample_problems(config, seed), 5):
            assert signal_value(signal, prior, problem) >= signal_value(noise, prior, problem)
