# infodom/simplex.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Exact feasibility for ``A q = b, q >= 0``.

Phase-one simplex over :class:`fractions.Fraction` with Bland's rule.
The answer is either a nonnegative solution or a Farkas vector ``y``
with ``A^T y <= 0`` and ``b^T y > 0``; both are re-checked before being
returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from infodom.exceptions import CertificateError, DimensionMismatchError
from infodom.logger import get_logger
from infodom.prob_core import ZERO, ONE

logger = get_logger(__name__)

Matrix = Sequence[Sequence[Fraction]]


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of :func:`solve_feasibility`.

    Attributes:
        feasible: Whether ``A q = b, q >= 0`` has a solution.
        solution: A nonnegative solution when feasible.
        farkas: Multipliers ``y`` with ``A^T y <= 0`` and ``b^T y > 0``
            when infeasible.
        pivots: Number of pivots performed.
    """

    feasible: bool
    solution: Optional[Tuple[Fraction, ...]] = None
    farkas: Optional[Tuple[Fraction, ...]] = None
    pivots: int = 0


def _pivot(rows: List[List[Fraction]], objective: List[Fraction], r: int, j: int) -> None:
    prow = rows[r]
    p = prow[j]
    if p != 1:
        prow[:] = [v / p if v else v for v in prow]
    nonzero = [(k, v) for k, v in enumerate(prow) if v]
    for other in rows + [objective]:
        if other is prow:
            continue
        factor = other[j]
        if factor:
            for k, v in nonzero:
                other[k] -= factor * v


def _check_solution(A: Matrix, b: Sequence[Fraction], q: Sequence[Fraction]) -> bool:
    if any(v < 0 for v in q):
        return False
    for row, rhs in zip(A, b):
        if sum((a * v for a, v in zip(row, q) if a and v), ZERO) != rhs:
            return False
    return True


def _check_farkas(A: Matrix, b: Sequence[Fraction], y: Sequence[Fraction], n: int) -> bool:
    if sum((yi * bi for yi, bi in zip(y, b)), ZERO) <= 0:
        return False
    for j in range(n):
        if sum((yi * row[j] for yi, row in zip(y, A) if yi and row[j]), ZERO) > 0:
            return False
    return True


def solve_feasibility(A: Matrix, b: Sequence[Fraction]) -> FeasibilityResult:
    """Decide feasibility of ``A q = b, q >= 0`` exactly.

    Rows with a negative right-hand side are negated, one artificial
    variable is added per row and their sum is minimized.  Entering
    columns are chosen by smallest index among negative reduced costs and
    ratio ties are broken by smallest basic index, so the method
    terminates.

    Args:
        A: ``m x n`` constraint matrix of Fractions.
        b: Right-hand side of length ``m``.

    Returns:
        FeasibilityResult: A verified solution or Farkas vector.

    Raises:
        DimensionMismatchError: If the shapes disagree.
        CertificateError: If the produced certificate fails re-checking.
    """
    m = len(A)
    if len(b) != m:
        raise DimensionMismatchError(f"Matrix has {m} rows, right-hand side has {len(b)}")
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise DimensionMismatchError("Constraint rows have different lengths")
    if m == 0:
        return FeasibilityResult(True, solution=tuple(ZERO for _ in range(n)))

    signs = [ONE if rhs >= 0 else -ONE for rhs in b]
    rows: List[List[Fraction]] = []
    for i in range(m):
        s = signs[i]
        row = [s * a for a in A[i]]
        row.extend(ONE if k == i else ZERO for k in range(m))
        row.append(s * b[i])
        rows.append(row)
    basis = [n + i for i in range(m)]

    # Reduced costs of the phase-one objective (sum of artificials); last entry is -value.
    objective = [-sum((row[j] for row in rows), ZERO) for j in range(n)]
    objective.extend(ZERO for _ in range(m))
    objective.append(-sum((row[-1] for row in rows), ZERO))

    pivots = 0
    while True:
        entering = next((j for j in range(n + m) if objective[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for r, row in enumerate(rows):
            coef = row[entering]
            if coef > 0:
                ratio = row[-1] / coef
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leaving]):
                    best, leaving = ratio, r
        if leaving is None:
            # The phase-one objective is bounded below by zero.
            raise CertificateError("Phase-one simplex reported an unbounded direction")
        _pivot(rows, objective, leaving, entering)
        basis[leaving] = entering
        pivots += 1

    logger.debug("Phase one finished after %d pivots (%d rows, %d columns)", pivots, m, n)

    if objective[-1] == 0:
        q = [ZERO] * n
        for r, col in enumerate(basis):
            if col < n:
                q[col] = rows[r][-1]
        if not _check_solution(A, b, q):
            logger.error("Simplex solution failed re-checking")
            raise CertificateError("Simplex produced a point that does not satisfy A q = b, q >= 0")
        return FeasibilityResult(True, solution=tuple(q), pivots=pivots)

    # Artificial column i has cost 1, so its reduced cost is 1 - y_i.
    y = tuple(signs[i] * (ONE - objective[n + i]) for i in range(m))
    if not _check_farkas(A, b, y, n):
        logger.error("Farkas vector failed re-checking")
        raise CertificateError("Simplex produced an invalid infeasibility certificate")
    return FeasibilityResult(False, farkas=y, pivots=pivots)
