# infodom/sampling.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Seeded random instances with exact rational probabilities.

Every generator takes a ``numpy.random.Generator``; the same seed always
yields the same instances.  Weights are drawn as small integers and then
normalized exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from infodom.config import GENERATOR_CONFIG
from infodom.logger import get_logger
from infodom.prob_core import BeliefVector, FinitePmf, make_pmf
from infodom.signals import ArrivalLottery, DynamicSignal, StaticExperiment
from infodom.dominance import DiscountSequence
from infodom.stochastic_orders import BinarySplitting, apply_splitting

logger = get_logger(__name__)

MAX_WEIGHT = int(GENERATOR_CONFIG.get("max_weight", 6))
MAX_ALPHABET = int(GENERATOR_CONFIG.get("max_alphabet", 3))
MAX_PATHS = int(GENERATOR_CONFIG.get("max_paths", 4))
MAX_SPLITS = int(GENERATOR_CONFIG.get("max_splits", 3))


def _int(rng: np.random.Generator, low: int, high: int) -> int:
    """Uniform integer in ``[low, high]``."""
    return int(rng.integers(low, high + 1))


def random_weights(rng: np.random.Generator, n: int, max_weight: int = MAX_WEIGHT, positive: bool = False) -> List[Fraction]:
    """``n`` exact weights summing to one; zeros allowed unless *positive*."""
    while True:
        raw = [_int(rng, 1 if positive else 0, max_weight) for _ in range(n)]
        total = sum(raw)
        if total:
            return [Fraction(r, total) for r in raw]


def random_prior(rng: np.random.Generator, n: int, max_weight: int = MAX_WEIGHT) -> BeliefVector:
    """A full-support prior over *n* states."""
    return BeliefVector(tuple(random_weights(rng, n, max_weight, positive=True)))


def state_labels(n: int) -> Tuple[str, ...]:
    return tuple(f"theta{i + 1}" for i in range(n))


def random_signal(
    rng: np.random.Generator,
    states: Sequence[Hashable],
    horizon: int,
    max_alphabet: int = MAX_ALPHABET,
    max_paths: int = MAX_PATHS,
) -> DynamicSignal:
    """A random dynamic signal; each state draws at most *max_paths* paths."""
    alphabets = [tuple(f"s{k}" for k in range(_int(rng, 1, max_alphabet))) for _ in range(horizon)]
    all_paths = list(itertools.product(*alphabets))
    kernel = {}
    for state in states:
        k = _int(rng, 1, min(max_paths, len(all_paths)))
        chosen = rng.choice(len(all_paths), size=k, replace=False)
        weights = random_weights(rng, k, positive=True)
        kernel[state] = [(all_paths[int(c)], w) for c, w in zip(chosen, weights)]
    return DynamicSignal.from_kernel(states, horizon, alphabets, kernel)


def random_garbling(rng: np.random.Generator, signal: DynamicSignal) -> DynamicSignal:
    """Coarsen every period's realization through a random map.

    Each period-``t`` prefix of the result is a function of the
    original prefix, so the original dominates the garbling.
    """
    maps = []
    for alphabet in signal.alphabets:
        size = _int(rng, 1, len(alphabet))
        maps.append({s: f"g{_int(rng, 0, size - 1)}" for s in alphabet})
    alphabets = [tuple(dict.fromkeys(m.values())) for m in maps]
    kernel = {
        state: [(tuple(m[s] for m, s in zip(maps, path)), w) for path, w in paths]
        for state, paths in zip(signal.states, signal.kernel)
    }
    return DynamicSignal.from_kernel(signal.states, signal.horizon, alphabets, kernel)


def random_signal_pair(
    rng: np.random.Generator, states: Sequence[Hashable], horizon: int
) -> Tuple[DynamicSignal, DynamicSignal]:
    """Two signals; half of the time the second is a garbling of the first."""
    first = random_signal(rng, states, horizon)
    if rng.random() < 0.5:
        return first, random_garbling(rng, first)
    return first, random_signal(rng, states, horizon)


def random_experiment(
    rng: np.random.Generator, states: Sequence[Hashable], max_alphabet: int = MAX_ALPHABET
) -> StaticExperiment:
    """A non-trivial static experiment with two to *max_alphabet* realizations."""
    while True:
        realizations = [f"z{k + 1}" for k in range(_int(rng, 2, max(2, max_alphabet)))]
        kernel = {s: dict(zip(realizations, random_weights(rng, len(realizations)))) for s in states}
        emitted = [z for z in realizations if any(kernel[s][z] for s in states)]
        xi = StaticExperiment.from_kernel(states, kernel, emitted)
        if not xi.is_trivial(BeliefVector.uniform(len(states))):
            return xi


def random_time_pmf(rng: np.random.Generator, horizon: int, max_weight: int = MAX_WEIGHT) -> FinitePmf:
    return make_pmf(zip(range(1, horizon + 1), random_weights(rng, horizon, max_weight)))


def random_lottery(rng: np.random.Generator, horizon: int, max_weight: int = MAX_WEIGHT) -> ArrivalLottery:
    return ArrivalLottery(horizon, random_time_pmf(rng, horizon, max_weight))


def random_splitting(rng: np.random.Generator, lottery: ArrivalLottery) -> Optional[BinarySplitting]:
    """A random admissible splitting of *lottery*, or ``None`` if no interior atom exists."""
    T = lottery.horizon
    interior = [t for t in lottery.pmf.labels if 1 < t < T]
    if not interior:
        return None
    y2 = interior[_int(rng, 0, len(interior) - 1)]
    z1 = _int(rng, 1, y2 - 1)
    z3 = _int(rng, y2 + 1, T)
    moved = lottery.h(y2) * Fraction(_int(rng, 1, MAX_WEIGHT), MAX_WEIGHT)
    return BinarySplitting(
        z1, y2, z3, moved * Fraction(z3 - y2, z3 - z1), moved * Fraction(y2 - z1, z3 - z1)
    )


def random_spread(
    rng: np.random.Generator, horizon: int, max_splits: int = MAX_SPLITS
) -> Tuple[ArrivalLottery, ArrivalLottery]:
    """``(P, H)`` with *H* obtained from *P* by random binary splittings."""
    P = random_lottery(rng, horizon)
    H = P
    for _ in range(_int(rng, 0, max_splits)):
        split = random_splitting(rng, H)
        if split is None:
            break
        H = apply_splitting(H, split)
    return P, H


def random_beta(rng: np.random.Generator, horizon: int, max_weight: int = MAX_WEIGHT) -> DiscountSequence:
    """Strictly positive weights with denominators up to *max_weight*."""
    return DiscountSequence(tuple(
        Fraction(_int(rng, 1, max_weight), _int(rng, 1, max_weight)) for _ in range(horizon)
    ))


def random_decreasing_beta(rng: np.random.Generator, horizon: int, max_weight: int = MAX_WEIGHT) -> DiscountSequence:
    return DiscountSequence(tuple(sorted(random_beta(rng, horizon, max_weight).betas, reverse=True)))
