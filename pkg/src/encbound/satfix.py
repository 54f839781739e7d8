"""Bounded-overlap k-CNF generation and the random resampling solver.

A clause is a tuple of (variable index, sign) pairs with sign True for a
positive literal.  Two clauses intersect when their supports share a
variable; a clause intersects itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]
    k: int

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != self.k:
                raise ValueError("every clause must have exactly k literals")
            vs = [v for v, _ in cl]
            if len(set(vs)) != self.k:
                raise ValueError("clause variables must be distinct")
            if any(not 0 <= v < self.num_vars for v in vs):
                raise ValueError("variable index out of range")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def supports(self) -> list[frozenset[int]]:
        return [frozenset(v for v, _ in cl) for cl in self.clauses]

    def intersection_degree(self) -> int:
        """Max number of *other* clauses sharing support with any clause,
        computed exactly."""
        supports = self.supports()
        by_var: dict[int, list[int]] = {}
        for i, sup in enumerate(supports):
            for v in sup:
                by_var.setdefault(v, []).append(i)
        best = 0
        for i, sup in enumerate(supports):
            others = set()
            for v in sup:
                others.update(by_var[v])
            others.discard(i)
            best = max(best, len(others))
        return best

    def clause_satisfied(self, index: int, assignment: Sequence[bool]) -> bool:
        return any(assignment[v] == sign for v, sign in self.clauses[index])

    def satisfied(self, assignment: Sequence[bool]) -> bool:
        return all(
            self.clause_satisfied(i, assignment) for i in range(len(self.clauses))
        )


def gen_bounded_overlap_cnf(
    k: int, m: int, r: int, rng: np.random.Generator
) -> CnfFormula:
    """m clauses over sliding variable windows, stride chosen so that each
    clause intersects at most r others; literal signs uniformly random.

    Clause i covers variables [i * stride, i * stride + k).
    """
    if k < 1 or m < 1 or r < 0:
        raise ValueError("need k >= 1, m >= 1, r >= 0")
    # neighbours per side at stride w: floor((k - 1) / w)
    stride = None
    for w in range(1, k + 1):
        if 2 * ((k - 1) // w) <= r:
            stride = w
            break
    if stride is None:  # r == 0 forces disjoint windows
        stride = k
    num_vars = (m - 1) * stride + k
    clauses = []
    for i in range(m):
        base = i * stride
        signs = rng.integers(0, 2, size=k)
        clauses.append(
            tuple((base + j, bool(signs[j])) for j in range(k))
        )
    phi = CnfFormula(num_vars=num_vars, clauses=tuple(clauses), k=k)
    measured = phi.intersection_degree()
    if measured > r:
        raise ValueError(
            f"cannot meet intersection bound {r} with k={k}, m={m} "
            f"(measured {measured}); more variables are required"
        )
    return phi


@dataclass
class SolveStats:
    fix_count: int = 0
    max_depth: int = 0
    tree_size: int = 0


class FixBudgetExceeded(RuntimeError):
    pass


def moser_solve(
    phi: CnfFormula, rng: np.random.Generator, max_fixes: int = 10**7
) -> tuple[list[bool], int, SolveStats]:
    """Random resampling solver: start from a uniform assignment and repair
    unsatisfied clauses recursively.

    Clause selection is deterministic (lowest index); the intersecting-clause
    scan includes the repaired clause itself.  Returns (assignment,
    fix_count, stats); the assignment satisfies phi.
    """
    n = phi.num_vars
    assignment = list(rng.integers(0, 2, size=n).astype(bool))
    supports = phi.supports()
    neighbours: list[list[int]] = []
    by_var: dict[int, list[int]] = {}
    for i, sup in enumerate(supports):
        for v in sup:
            by_var.setdefault(v, []).append(i)
    for i, sup in enumerate(supports):
        near = set()
        for v in sup:
            near.update(by_var[v])
        neighbours.append(sorted(near))  # includes i itself

    stats = SolveStats()

    def first_unsatisfied(candidates) -> int | None:
        for j in candidates:
            if not phi.clause_satisfied(j, assignment):
                return j
        return None

    def fix(d: int, depth: int) -> None:
        stats.fix_count += 1
        stats.tree_size += 1
        stats.max_depth = max(stats.max_depth, depth)
        if stats.fix_count > max_fixes:
            raise FixBudgetExceeded(f"exceeded {max_fixes} fix calls")
        beta = rng.integers(0, 2, size=phi.k)
        for (v, _), b in zip(phi.clauses[d], beta):
            assignment[v] = bool(b)
        while True:
            nxt = first_unsatisfied(neighbours[d])
            if nxt is None:
                return
            fix(nxt, depth + 1)

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 100000))
    try:
        while True:
            d = first_unsatisfied(range(phi.num_clauses))
            if d is None:
                break
            fix(d, 1)
    finally:
        sys.setrecursionlimit(old_limit)
    return assignment, stats.fix_count, stats
