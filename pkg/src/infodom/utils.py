# infodom/utils.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

import json
import os
from decimal import Decimal
from typing import Any, Callable, Dict, List, Optional, TypeVar

from infodom.logger import get_logger
from infodom.exceptions import InfodomError, InputFormatError
from infodom.prob_core import BeliefVector, make_pmf, to_rational
from infodom.signals import ArrivalLottery, DynamicSignal, StaticExperiment
from infodom.decision import DecisionProblem
from infodom.dominance import DiscountSequence

logger = get_logger(__name__)

T = TypeVar("T")

# ---------- Raw documents ----------

def read_json(path: str) -> Any:
    """Read a JSON document with every non-integer number kept as an exact Decimal.

    Args:
        path: File to read.

    Returns:
        Any: The parsed document.

    Raises:
        InputFormatError: If the file is missing or is not valid JSON.
    """
    if not os.path.exists(path):
        logger.error(f"File not found: {path}")
        raise InputFormatError("File not found", path=path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, parse_float=Decimal)
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {path}: {e}")
        raise InputFormatError(f"Invalid JSON: {e.msg} at line {e.lineno}", path=path) from e
    logger.info(f"Loaded document: {path}")
    return doc


def _require(doc: Dict[str, Any], key: str, kind: type = object) -> Any:
    if not isinstance(doc, dict):
        raise InputFormatError("Expected a JSON object")
    if key not in doc:
        raise InputFormatError("Missing required field", field=key)
    value = doc[key]
    if kind is not object and not isinstance(value, kind):
        raise InputFormatError(f"Expected {kind.__name__}, got {type(value).__name__}", field=key)
    return value


_SCALARS = (str, int, Decimal)


def _scalar_list(value: Any, field: str) -> List[Any]:
    """A JSON list of strings or numbers; nested containers are rejected."""
    if not isinstance(value, list) or not all(
        isinstance(v, _SCALARS) and not isinstance(v, bool) for v in value
    ):
        raise InputFormatError("Expected a list of strings or numbers", field=field)
    return value


def _load(path: str, build: Callable[[Any], T]) -> T:
    """Read *path* and build an object, attaching the file name to every input error."""
    doc = read_json(path)
    try:
        return build(doc)
    except InputFormatError as e:
        raise InputFormatError(e.message, path=path, field=e.field) from e
    except InfodomError as e:
        raise InputFormatError(str(e), path=path) from e
    except (TypeError, ValueError, AttributeError) as e:
        logger.error(f"Malformed document {path}: {e}")
        raise InputFormatError(f"Malformed document: {e}", path=path) from e


# ---------- Builders from parsed documents ----------

def signal_from_dict(doc: Dict[str, Any]) -> DynamicSignal:
    """Build a :class:`DynamicSignal` from its JSON form.

    Schema::

        {"states": [..], "horizon": T, "alphabets": [[..], ..],
         "kernel": {state: [{"path": [..], "p": "1/2"}, ..]}}
    """
    states = [str(s) for s in _require(doc, "states", list)]
    horizon = _require(doc, "horizon", int)
    alphabets = [
        _scalar_list(a, f"alphabets[{t}]") for t, a in enumerate(_require(doc, "alphabets", list))
    ]
    raw_kernel = _require(doc, "kernel", dict)
    kernel = {}
    for state in states:
        entries = raw_kernel.get(state)
        if not isinstance(entries, list):
            raise InputFormatError("Expected a list of {path, p} entries", field=f"kernel.{state}")
        rows = []
        for k, entry in enumerate(entries):
            where = f"kernel.{state}[{k}]"
            if not isinstance(entry, dict) or "path" not in entry or "p" not in entry:
                raise InputFormatError("Expected an object with 'path' and 'p'", field=where)
            path = _scalar_list(entry["path"], f"{where}.path")
            rows.append((tuple(path), to_rational(entry["p"], field=f"{where}.p")))
        kernel[state] = rows
    return DynamicSignal.from_kernel(states, horizon, alphabets, kernel)


def experiment_from_dict(doc: Dict[str, Any]) -> StaticExperiment:
    """Schema: ``{"states": [..], "realizations": [..] (optional), "kernel": {state: {z: p}}}``."""
    states = [str(s) for s in _require(doc, "states", list)]
    raw_kernel = _require(doc, "kernel", dict)
    kernel = {}
    for state in states:
        row = raw_kernel.get(state)
        if not isinstance(row, dict):
            raise InputFormatError("Expected an object of realization probabilities", field=f"kernel.{state}")
        kernel[state] = {z: to_rational(p, field=f"kernel.{state}.{z}") for z, p in row.items()}
    realizations = doc.get("realizations")
    if realizations is not None:
        realizations = [str(z) for z in realizations]
    return StaticExperiment.from_kernel(states, kernel, realizations)


def lottery_from_dict(doc: Dict[str, Any]) -> ArrivalLottery:
    """Schema: ``{"horizon": T, "pmf": {"1": "1/2", ..}}`` or ``{"masses": [h(1), .., h(T)]}``."""
    if isinstance(doc, dict) and "masses" in doc:
        masses = _require(doc, "masses", list)
        lottery = ArrivalLottery.from_masses([to_rational(m, field="masses") for m in masses])
        if "horizon" in doc and doc["horizon"] != lottery.horizon:
            raise InputFormatError("Horizon does not match the number of masses", field="horizon")
        return lottery
    horizon = _require(doc, "horizon", int)
    raw = _require(doc, "pmf", dict)
    atoms = []
    for key, p in raw.items():
        try:
            t = int(key)
        except ValueError as e:
            raise InputFormatError(f"Arrival period {key!r} is not an integer", field="pmf") from e
        atoms.append((t, to_rational(p, field=f"pmf.{key}")))
    return ArrivalLottery(horizon, make_pmf(atoms))


def prior_from_dict(doc: Any) -> BeliefVector:
    """A prior is a list of probabilities or ``{"prior": [..]}``."""
    if isinstance(doc, dict):
        doc = _require(doc, "prior", list)
    if not isinstance(doc, list):
        raise InputFormatError("Expected a list of probabilities", field="prior")
    return BeliefVector(tuple(to_rational(p, field="prior") for p in doc))


def problem_from_dict(doc: Dict[str, Any], states: Optional[List[str]] = None) -> DecisionProblem:
    """Schema: ``{"states": [..] (optional), "horizon": T, "actions": [[..], ..],
    "utilities": {"t": {"action": {"state": value}}}}``.

    *states* (the signal's states) fixes the column order; a document that
    lists its own states must name the same labels.
    """
    if isinstance(doc, dict) and "states" in doc:
        own = [str(s) for s in _scalar_list(doc["states"], "states")]
        if states is None:
            states = own
        elif len(own) != len(states) or set(own) != set(states):
            raise InputFormatError(f"Problem states {own} do not match signal states {list(states)}", field="states")
    if states is None:
        raise InputFormatError("Problem does not list its states", field="states")
    horizon = _require(doc, "horizon", int)
    actions = [[str(a) for a in acts] for acts in _require(doc, "actions", list)]
    if len(actions) != horizon:
        raise InputFormatError(f"Expected {horizon} action sets, got {len(actions)}", field="actions")
    raw = _require(doc, "utilities", dict)
    utilities: Dict[int, Dict[str, Dict[str, Any]]] = {}
    for key, table in raw.items():
        try:
            t = int(key)
        except ValueError as e:
            raise InputFormatError(f"Period key {key!r} is not an integer", field="utilities") from e
        if not isinstance(table, dict) or not all(isinstance(row, dict) for row in table.values()):
            raise InputFormatError("Expected an object of actions", field=f"utilities.{key}")
        for a, row in table.items():
            unknown = [s for s in row if s not in states]
            if unknown:
                raise InputFormatError(f"Unknown states {unknown}", field=f"utilities.{key}.{a}")
        utilities[t] = {
            str(a): {str(s): to_rational(v, field=f"utilities.{key}.{a}.{s}") for s, v in row.items()}
            for a, row in table.items()
        }
    return DecisionProblem.from_mapping(states, actions, utilities)


# ---------- File loaders ----------

def load_signal(path: str) -> DynamicSignal:
    return _load(path, signal_from_dict)


def load_experiment(path: str) -> StaticExperiment:
    return _load(path, experiment_from_dict)


def load_lottery(path: str) -> ArrivalLottery:
    return _load(path, lottery_from_dict)


def load_prior(path: str) -> BeliefVector:
    return _load(path, prior_from_dict)


def load_problem(path: str, states: Optional[List[str]] = None) -> DecisionProblem:
    return _load(path, lambda doc: problem_from_dict(doc, states))


# ---------- Command-line values ----------

def parse_rational_list(text: str, field: str) -> List:
    """Parse ``"1,1/2,0.25"`` into exact rationals."""
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p for p in parts):
        raise InputFormatError(f"Expected comma-separated rationals, got {text!r}", field=field)
    return [to_rational(p, field=field) for p in parts]


def parse_beta(text: str) -> DiscountSequence:
    """Parse a ``--beta`` value such as ``"1,2,4"``."""
    return DiscountSequence(tuple(parse_rational_list(text, "beta")))
