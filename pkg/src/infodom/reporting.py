# infodom/reporting.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Verdict reports: plain-dict serialization, JSON/text rendering and re-verification.

Every number is written as an exact ``"num/den"`` string and dict keys
keep insertion order, so a report is byte-identical across runs with
the same inputs.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from infodom.logger import get_logger
from infodom.exceptions import InfodomError, InputFormatError
from infodom.prob_core import BeliefVector, FinitePmf, PosteriorDistribution, format_rational, make_posterior, to_rational
from infodom.signals import ArrivalLottery, DynamicSignal, StaticExperiment
from infodom.stochastic_orders import BinarySplitting, ConvexWitness, MartingaleCoupling, MpsResult
from infodom.decision import DecisionProblem
from infodom.dominance import (
    DominanceVerdict,
    FamilyVerdict,
    IncreasingBetaCounterexample,
    PeriodCheck,
    RiskLovingReport,
)
from infodom.utils import problem_from_dict

logger = get_logger(__name__)

REPORT_FORMATS = ("json", "text")


@dataclass
class ReportConfig:
    """Rendering options for reports.

    Attributes:
        output_format: ``"json"`` or ``"text"`` (markdown tables).
        out: File to write; ``None`` writes to stdout.
    """
    output_format: str = "json"
    out: Optional[str] = None


# ======================================================================
# Serialization
# ======================================================================


def rational_list(values: Sequence[Fraction]) -> List[str]:
    return [format_rational(v) for v in values]


def belief_to_list(x: BeliefVector) -> List[str]:
    return rational_list(x.probabilities)


def posterior_to_list(dist: PosteriorDistribution) -> List[Dict[str, Any]]:
    return [{"belief": belief_to_list(x), "weight": format_rational(w)} for x, w in dist.atoms]


def time_pmf_to_dict(pmf: FinitePmf) -> Dict[str, str]:
    return {str(t): format_rational(w) for t, w in sorted(pmf.atoms)}


def coupling_to_dict(coupling: MartingaleCoupling) -> Dict[str, Any]:
    return {
        "rows": [belief_to_list(y) for y in coupling.rows],
        "columns": [belief_to_list(x) for x in coupling.columns],
        "matrix": [rational_list(row) for row in coupling.matrix],
    }


def witness_to_dict(witness: ConvexWitness) -> Dict[str, Any]:
    return {"pieces": [rational_list(piece) for piece in witness.pieces]}


def check_to_dict(check: PeriodCheck) -> Dict[str, Any]:
    doc: Dict[str, Any] = {}
    if check.period is not None:
        doc["period"] = check.period
    doc["holds"] = check.result.holds
    doc["F"] = posterior_to_list(check.F)
    doc["G"] = posterior_to_list(check.G)
    doc.update(result_to_dict(check.result))
    return doc


def result_to_dict(result: MpsResult) -> Dict[str, Any]:
    if result.holds:
        return {"coupling": coupling_to_dict(result.coupling)}
    return {"witness": witness_to_dict(result.witness)}


def problem_to_dict(problem: DecisionProblem) -> Dict[str, Any]:
    """A decision problem in its input-file format."""
    return {
        "states": [str(s) for s in problem.states],
        "horizon": problem.horizon,
        "actions": [[str(a) for a in acts] for acts in problem.actions],
        "utilities": {
            str(t): {
                str(a): {str(s): format_rational(u) for s, u in zip(problem.states, row)}
                for a, row in zip(acts, table)
            }
            for t, (acts, table) in enumerate(zip(problem.actions, problem.utilities), start=1)
        },
    }


def signal_to_dict(signal: DynamicSignal) -> Dict[str, Any]:
    return {
        "states": [str(s) for s in signal.states],
        "horizon": signal.horizon,
        "alphabets": [list(a) for a in signal.alphabets],
        "kernel": {
            str(s): [{"path": list(path), "p": format_rational(w)} for path, w in paths]
            for s, paths in zip(signal.states, signal.kernel)
        },
    }


def experiment_to_dict(xi: StaticExperiment) -> Dict[str, Any]:
    return {
        "states": [str(s) for s in xi.states],
        "realizations": [str(z) for z in xi.realizations],
        "kernel": {
            str(s): {str(z): format_rational(w) for z, w in pmf} for s, pmf in zip(xi.states, xi.kernel)
        },
    }


def lottery_to_dict(lottery: ArrivalLottery) -> Dict[str, Any]:
    return {"horizon": lottery.horizon, "pmf": time_pmf_to_dict(lottery.pmf)}


def splitting_to_dict(s: BinarySplitting) -> Dict[str, Any]:
    return {
        "z1": s.z1, "y2": s.y2, "z3": s.z3,
        "eta1": format_rational(s.eta1), "eta3": format_rational(s.eta3),
    }


def verdict_to_dict(verdict: DominanceVerdict) -> Dict[str, Any]:
    """The verdict report: class, verdict, per-period checks, certificate, counterexample."""
    doc: Dict[str, Any] = {"class": verdict.query_class, "holds": verdict.holds}
    if verdict.query_class == "as":
        doc["per_period"] = [check_to_dict(c) for c in verdict.checks]
        if verdict.holds:
            doc["certificate"] = {"kind": "per_period_couplings"}
        else:
            doc["certificate"] = {
                "kind": "witness",
                "period": verdict.failing_period,
                **witness_to_dict(verdict.witness),
            }
    else:
        doc["per_period"] = []
        doc["mixture"] = {
            "lambda": time_pmf_to_dict(verdict.weights),
            "betas": rational_list(verdict.betas),
            "check": check_to_dict(verdict.checks[0]),
        }
        doc["certificate"] = {"kind": "mixture_coupling" if verdict.holds else "witness"}
        if not verdict.holds:
            doc["certificate"].update(witness_to_dict(verdict.witness))
    doc["counterexample_problem"] = problem_to_dict(verdict.counterexample) if verdict.counterexample else None
    doc["values"] = (
        {"W1": format_rational(verdict.values[0]), "W2": format_rational(verdict.values[1])}
        if verdict.values else None
    )
    return doc


def family_to_dict(family: FamilyVerdict) -> Dict[str, Any]:
    return {
        "class": "discounted-family",
        "holds": family.holds,
        "note": family.note,
        "members": [{"beta": rational_list(b.betas), "verdict": verdict_to_dict(v)} for b, v in family.members],
    }


def risk_loving_to_dict(report: RiskLovingReport) -> Dict[str, Any]:
    return {
        "sosd": report.sosd,
        "mixture_order_holds": report.verdict.holds,
        "implication_holds": report.implication_holds,
        "splittings": [splitting_to_dict(s) for s in report.splittings],
        "verdict": verdict_to_dict(report.verdict),
    }


def counterexample_to_dict(found: IncreasingBetaCounterexample) -> Dict[str, Any]:
    return {
        "beta": rational_list(found.beta.betas),
        "xi": experiment_to_dict(found.xi),
        "h": lottery_to_dict(found.h),
        "p": lottery_to_dict(found.p),
        "prior": belief_to_list(found.prior),
        "splitting": splitting_to_dict(found.splitting),
        "revealed_mass": {"h": format_rational(found.revealed_mass[0]), "p": format_rational(found.revealed_mass[1])},
        "matching_values": {"W1": format_rational(found.values[0]), "W2": format_rational(found.values[1])},
        "verdict": verdict_to_dict(found.verdict),
    }


# ======================================================================
# Rendering
# ======================================================================


def _is_scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, bool))


def _is_flat(value: Any) -> bool:
    return isinstance(value, list) and all(_is_scalar(v) for v in value)


def _cell(value: Any) -> str:
    if _is_flat(value):
        return "(" + ", ".join(str(v) for v in value) + ")"
    if _is_scalar(value):
        return "-" if value is None else str(value)
    return json.dumps(value, ensure_ascii=False)


def _render_section(title: str, doc: Any, level: int, out: List[str]) -> None:
    out.append("#" * min(level, 6) + " " + title)
    if isinstance(doc, dict):
        simple = [(k, _cell(v)) for k, v in doc.items() if _is_scalar(v) or _is_flat(v)]
        if simple:
            out.append(pd.DataFrame(simple, columns=["field", "value"]).to_markdown(index=False))
        for k, v in doc.items():
            if not (_is_scalar(v) or _is_flat(v)):
                _render_section(k, v, level + 1, out)
    elif isinstance(doc, list):
        if not doc:
            out.append("(none)")
        elif all(isinstance(item, dict) and all(_is_scalar(v) or _is_flat(v) for v in item.values()) for item in doc):
            rows = [{k: _cell(v) for k, v in item.items()} for item in doc]
            out.append(pd.DataFrame(rows).to_markdown(index=False))
        elif all(_is_flat(item) for item in doc):
            out.append(pd.DataFrame([[_cell(v) for v in item] for item in doc]).to_markdown(index=False))
        else:
            for i, item in enumerate(doc, start=1):
                _render_section(f"{title} #{i}", item, level + 1, out)
    else:
        out.append(_cell(doc))
    out.append("")


def render_report(report: Dict[str, Any], output_format: str = "json") -> str:
    """Render a report dict as JSON (indent 2) or as markdown tables.

    Raises:
        InputFormatError: For an unknown format.
    """
    if output_format == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if output_format == "text":
        out: List[str] = []
        _render_section(str(report.get("command", "report")), report, 1, out)
        return "\n".join(out)
    raise InputFormatError(f"Unknown report format {output_format!r}; use one of {REPORT_FORMATS}", field="format")


def write_report(report: Dict[str, Any], config: ReportConfig) -> str:
    """Render *report* and write it to ``config.out`` (or return it for stdout)."""
    text = render_report(report, config.output_format)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info(f"Report written to {config.out}")
    return text


# ======================================================================
# Re-verification
# ======================================================================


def _belief(raw: Any) -> BeliefVector:
    return BeliefVector(tuple(to_rational(v, field="belief") for v in raw))


def _posterior(raw: Any) -> PosteriorDistribution:
    return make_posterior((_belief(a["belief"]), to_rational(a["weight"], field="weight")) for a in raw)


def _verify_check(doc: Dict[str, Any], where: str, problems: List[str]) -> Optional[Fraction]:
    """Re-validate one ``F``/``G`` check; returns the witness gap when the check fails."""
    F, G = _posterior(doc["F"]), _posterior(doc["G"])
    if "coupling" in doc:
        raw = doc["coupling"]
        coupling = MartingaleCoupling(
            tuple(_belief(y) for y in raw["rows"]),
            tuple(_belief(x) for x in raw["columns"]),
            tuple(tuple(to_rational(q, field="matrix") for q in row) for row in raw["matrix"]),
        )
        problems.extend(f"{where}: {p}" for p in coupling.violations(F, G))
        if doc.get("holds") is not True:
            problems.append(f"{where}: coupling attached to a failing check")
        return None
    if "witness" in doc:
        witness = ConvexWitness(tuple(tuple(row) for row in doc["witness"]["pieces"]))
        gap = witness.gap(F, G)
        if gap >= 0:
            problems.append(f"{where}: witness does not separate (gap {format_rational(gap)})")
        if doc.get("holds") is not False:
            problems.append(f"{where}: witness attached to a holding check")
        return gap
    problems.append(f"{where}: check carries no certificate")
    return None


def _verify_problem(doc: Dict[str, Any], where: str, problems: List[str]) -> None:
    """The attached problem must be the one synthesized from the witness pieces."""
    raw = doc.get("counterexample_problem")
    if raw is None:
        problems.append(f"{where}: failing verdict without a counterexample problem")
        return
    problem = problem_from_dict(raw)
    pieces = tuple(tuple(to_rational(u, field="pieces") for u in row) for row in doc["certificate"]["pieces"])
    zero = ((Fraction(0),) * len(problem.states),)
    if "mixture" in doc:
        betas = [to_rational(b, field="betas") for b in doc["mixture"]["betas"]]
        expected = [tuple(tuple(b * u for u in row) for row in pieces) for b in betas]
    else:
        t_star = doc["certificate"]["period"]
        expected = [pieces if t == t_star else zero for t in range(1, problem.horizon + 1)]
    if len(expected) != problem.horizon:
        problems.append(f"{where}: counterexample problem has {problem.horizon} periods, expected {len(expected)}")
        return
    for t, (table, want) in enumerate(zip(problem.utilities, expected), start=1):
        if table != want:
            problems.append(f"{where}: counterexample utilities of period {t} do not match the witness")


def _verify_verdict(doc: Dict[str, Any], where: str, problems: List[str]) -> None:
    gaps = []
    checks = list(doc.get("per_period") or [])
    if "mixture" in doc:
        checks.append(doc["mixture"]["check"])
    for k, check in enumerate(checks):
        gap = _verify_check(check, f"{where}.check[{k}]", problems)
        if gap is not None:
            gaps.append(gap)
    expected = all(c.get("holds") for c in checks)
    if doc.get("holds") != expected:
        problems.append(f"{where}: verdict {doc.get('holds')} does not match its checks")
    values = doc.get("values")
    if doc.get("holds") is False:
        if not values or not gaps:
            problems.append(f"{where}: failing verdict without a counterexample")
            return
        _verify_problem(doc, where, problems)
        w1, w2 = to_rational(values["W1"]), to_rational(values["W2"])
        if not w1 < w2:
            problems.append(f"{where}: counterexample values do not reverse")
        scale = Fraction(1)
        if "mixture" in doc:
            scale = sum((to_rational(b) for b in doc["mixture"]["betas"]), Fraction(0))
        if w1 - w2 != scale * gaps[0]:
            problems.append(f"{where}: W1 - W2 = {format_rational(w1 - w2)} does not match the witness gap")


def _walk(doc: Any, where: str, problems: List[str]) -> int:
    found = 0
    if isinstance(doc, dict):
        if "class" in doc and "holds" in doc and "per_period" in doc:
            _verify_verdict(doc, where, problems)
            return 1
        for k, v in doc.items():
            found += _walk(v, f"{where}.{k}", problems)
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            found += _walk(v, f"{where}[{i}]", problems)
    return found


def verify_report(report: Any) -> List[str]:
    """Re-validate every certificate in a report produced by this package.

    Couplings are checked against their three condition families,
    witnesses must separate, and recorded counterexample values must
    reverse the ranking by exactly the witness gap.

    Returns:
        List[str]: Problems found; empty when every certificate holds up.
    """
    problems: List[str] = []
    try:
        found = _walk(report, "$", problems)
    except (InfodomError, KeyError, TypeError) as e:
        logger.error(f"Malformed report: {e}")
        raise InputFormatError(f"Malformed report: {e}") from e
    if not found:
        problems.append("report contains no verdicts")
    logger.info(f"Verified {found} verdicts, {len(problems)} problems")
    return problems
