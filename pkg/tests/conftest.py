"""Shared test fixtures for the infodom test suite.

All fixtures are exact: probabilities are Fractions and the expected
values in the tests are computed by hand.  File logging is disabled so
test runs do not leave ``.log`` directories behind.
"""

import json
import os
from fractions import Fraction

import pytest

os.environ.setdefault("INFODOM_LOG_ROOT", "")

from infodom.prob_core import BeliefVector, make_posterior
from infodom.signals import (
    ArrivalLottery,
    DynamicSignal,
    StaticExperiment,
    revealing_signal,
    uninformative_signal,
)
from infodom.decision import matching_problem


STATES = ("theta1", "theta2")


def write_json(path, doc) -> str:
    """Dump *doc* to *path* and return the path as a string."""
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def binary_posterior(*atoms):
    """``binary_posterior((x1, w), ...)`` with ``x1`` the probability of the first state."""
    return make_posterior(
        (BeliefVector.of(Fraction(x), 1 - Fraction(x)), Fraction(w)) for x, w in atoms
    )


# ---------------------------------------------------------------------------
# Shared fixtures
# ---------------------------------------------------------------------------


@pytest.fixture
def states():
    return STATES


@pytest.fixture
def uniform_prior() -> BeliefVector:
    return BeliefVector.uniform(2)


@pytest.fixture
def early_signal() -> DynamicSignal:
    """Reveals the state in period 1 (T = 2)."""
    return revealing_signal(STATES, 2, reveal_at=1)


@pytest.fixture
def late_signal() -> DynamicSignal:
    """Reveals the state in period 2 (T = 2)."""
    return revealing_signal(STATES, 2, reveal_at=2)


@pytest.fixture
def noise_signal() -> DynamicSignal:
    return uninformative_signal(STATES, 2)


@pytest.fixture
def matching_t2():
    """``u_t(a, theta) = 1[a = theta]`` for two periods."""
    return matching_problem(STATES, 2)


@pytest.fixture
def revealing_experiment() -> StaticExperiment:
    return StaticExperiment.fully_revealing(STATES)


@pytest.fixture
def noisy_experiment() -> StaticExperiment:
    """Two realizations with likelihood ratio 3 : 1."""
    return StaticExperiment.from_kernel(
        STATES,
        {"theta1": {"z1": Fraction(3, 4), "z2": Fraction(1, 4)},
         "theta2": {"z1": Fraction(1, 4), "z2": Fraction(3, 4)}},
    )


@pytest.fixture
def spread_lottery() -> ArrivalLottery:
    """Uniform on {1, 3} with T = 3."""
    return ArrivalLottery.uniform([1, 3], 3)


@pytest.fixture
def middle_lottery() -> ArrivalLottery:
    """Point mass at 2 with T = 3."""
    return ArrivalLottery.point_mass(2, 3)


@pytest.fixture
def signal_doc():
    """JSON form of a noisy two-period signal."""
    return {
        "states": list(STATES),
        "horizon": 2,
        "alphabets": [["a", "b"], ["a", "b"]],
        "kernel": {
            "theta1": [{"path": ["a", "a"], "p": "1/2"}, {"path": ["a", "b"], "p": "1/4"},
                       {"path": ["b", "b"], "p": "1/4"}],
            "theta2": [{"path": ["b", "b"], "p": "1/2"}, {"path": ["b", "a"], "p": "1/4"},
                       {"path": ["a", "a"], "p": "1/4"}],
        },
    }


@pytest.fixture
def revealing_doc():
    return {
        "states": list(STATES),
        "horizon": 2,
        "alphabets": [list(STATES), list(STATES)],
        "kernel": {s: [{"path": [s, s], "p": "1"}] for s in STATES},
    }


@pytest.fixture
def noise_doc():
    return {
        "states": list(STATES),
        "horizon": 2,
        "alphabets": [["n"], ["n"]],
        "kernel": {s: [{"path": ["n", "n"], "p": "1"}] for s in STATES},
    }


@pytest.fixture(autouse=True)
def _reset_config(monkeypatch):
    """Clear the cached environment configuration around each test."""
    from infodom.config import reset_config

    monkeypatch.delenv("INFODOM_MAX_ORACLE", raising=False)
    reset_config()
    yield
    reset_config()
