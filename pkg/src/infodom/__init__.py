# infodom/__init__.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Infodom: exact dominance tests for dynamic information structures, with certificates."""

__version__ = "0.1.0"
__author__ = "Infodom Team"

import logging

# ----------------------------------------------------------------------
# Logging setup
# ----------------------------------------------------------------------
from infodom.logger import setup_logging, get_logger
setup_logging(level=logging.WARNING)
logger = get_logger(__name__)

# ----------------------------------------------------------------------
# Core imports
# ----------------------------------------------------------------------
from infodom.exceptions import (
    InfodomError,
    CertificateError,
    InputFormatError,
    NotAnMpsError,
)
from infodom.prob_core import (
    BeliefVector,
    FinitePmf,
    PosteriorDistribution,
    AffineMaximum,
    make_pmf,
    make_posterior,
    point_mass,
    expectation,
    barycenter,
    mixture,
    to_rational,
    format_rational,
)
from infodom.signals import (
    NULL_SIGNAL,
    DynamicSignal,
    StaticExperiment,
    ArrivalLottery,
    bayes_posterior,
    induced_posteriors,
    posterior_sequence,
    revealing_signal,
    uninformative_signal,
    arrival_signal,
    arrival_posteriors,
)
from infodom.stochastic_orders import (
    MartingaleCoupling,
    ConvexWitness,
    Holds,
    Fails,
    BinarySplitting,
    mps_check,
    mps_check_binary,
    weighted_mixture,
    fosd_check,
    sosd_check,
    apply_splitting,
    decompose_splittings,
)
from infodom.decision import (
    DecisionProblem,
    ValueFunction,
    Strategy,
    SamplerConfig,
    value_function,
    signal_value,
    signal_value_direct,
    optimal_strategy,
    separating_problem,
    matching_problem,
    sample_problems,
)
from infodom.dominance import (
    DiscountSequence,
    DominanceVerdict,
    FamilyVerdict,
    RiskLovingReport,
    IncreasingBetaCounterexample,
    lambda_weights,
    lambda_geometric,
    dominates_as,
    dominates_discounted,
    dominates_geometric,
    dominates_discounted_family,
    earlier_is_better,
    risk_loving_check,
    increasing_beta_counterexample,
)
from infodom.reporting import ReportConfig, render_report, verdict_to_dict, verify_report
from infodom.selftest import run_selftest

__all__ = [
    # Errors
    "InfodomError", "CertificateError", "InputFormatError", "NotAnMpsError",
    # Probability primitives
    "BeliefVector", "FinitePmf", "PosteriorDistribution", "AffineMaximum",
    "make_pmf", "make_posterior", "point_mass", "expectation", "barycenter", "mixture",
    "to_rational", "format_rational",
    # Signals
    "NULL_SIGNAL", "DynamicSignal", "StaticExperiment", "ArrivalLottery",
    "bayes_posterior", "induced_posteriors", "posterior_sequence",
    "revealing_signal", "uninformative_signal", "arrival_signal", "arrival_posteriors",
    # Orders
    "MartingaleCoupling", "ConvexWitness", "Holds", "Fails", "BinarySplitting",
    "mps_check", "mps_check_binary", "weighted_mixture", "fosd_check", "sosd_check",
    "apply_splitting", "decompose_splittings",
    # Decision problems
    "DecisionProblem", "ValueFunction", "Strategy", "SamplerConfig",
    "value_function", "signal_value", "signal_value_direct", "optimal_strategy",
    "separating_problem", "matching_problem", "sample_problems",
    # Dominance
    "DiscountSequence", "DominanceVerdict", "FamilyVerdict", "RiskLovingReport",
    "IncreasingBetaCounterexample", "lambda_weights", "lambda_geometric",
    "dominates_as", "dominates_discounted", "dominates_geometric", "dominates_discounted_family",
    "earlier_is_better", "risk_loving_check", "increasing_beta_counterexample",
    # Reports
    "ReportConfig", "render_report", "verdict_to_dict", "verify_report", "run_selftest",
    "__version__",
]
