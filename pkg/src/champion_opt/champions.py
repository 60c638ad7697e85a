"""Brute-force champion analysis on small finite decision tables.

A table lists candidate decisions, a finite set of scenarios with
probabilities, and the cost of every decision under every scenario
(minimization).  A champion is a decision at least as good as every rival
with probability at least one half.  These routines exist to verify the
median-based machinery on problems small enough to enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInputError

_PROB_TOL = 1e-9
_MASS_TOL = 1e-12


@dataclass(frozen=True)
class FinitePerformanceTable:
    """Costs of each labeled decision under each labeled scenario."""

    solutions: tuple[str, ...]
    outcomes: tuple[str, ...]
    probabilities: tuple[float, ...]
    costs: tuple[tuple[float, ...], ...]  # costs[solution][outcome]

    def __post_init__(self) -> None:
        if len(self.solutions) == 0 or len(self.outcomes) == 0:
            raise InvalidInputError("table needs at least one solution and one outcome")
        if len(set(self.solutions)) != len(self.solutions):
            raise InvalidInputError("solution labels must be unique")
        if len(self.probabilities) != len(self.outcomes):
            raise InvalidInputError("one probability per outcome required")
        if any(q < 0 for q in self.probabilities):
            raise InvalidInputError("outcome probabilities must be non-negative")
        if abs(sum(self.probabilities) - 1.0) > _MASS_TOL:
            raise InvalidInputError("outcome probabilities must sum to 1 within 1e-12")
        if len(self.costs) != len(self.solutions):
            raise InvalidInputError("one cost row per solution required")
        if any(len(row) != len(self.outcomes) for row in self.costs):
            raise InvalidInputError("each cost row needs one entry per outcome")
        object.__setattr__(self, "solutions", tuple(str(s) for s in self.solutions))
        object.__setattr__(self, "outcomes", tuple(str(o) for o in self.outcomes))
        object.__setattr__(self, "probabilities", tuple(float(q) for q in self.probabilities))
        object.__setattr__(self, "costs", tuple(tuple(float(c) for c in row) for row in self.costs))

    def index_of(self, label: str) -> int:
        try:
            return self.solutions.index(label)
        except ValueError:
            raise InvalidInputError(f"unknown solution label {label!r}") from None

    def expected_cost(self, label: str) -> float:
        i = self.index_of(label)
        return sum(q * c for q, c in zip(self.probabilities, self.costs[i]))


def pairwise_win_prob(table: FinitePerformanceTable, a: str, b: str) -> float:
    """Probability that decision ``a`` costs no more than decision ``b``.

    Ties count in favor of both directions, so win(a,b) + win(b,a) >= 1.
    """
    ia, ib = table.index_of(a), table.index_of(b)
    return sum(
        q
        for q, ca, cb in zip(table.probabilities, table.costs[ia], table.costs[ib])
        if ca <= cb
    )


def is_champion(table: FinitePerformanceTable, label: str) -> bool:
    """True when the label beats every rival with probability >= 1/2."""
    return all(
        pairwise_win_prob(table, label, other) >= 0.5 - _PROB_TOL
        for other in table.solutions
        if other != label
    )


def find_champion(table: FinitePerformanceTable) -> str | None:
    """First champion in label order, or None when no champion exists."""
    for label in table.solutions:
        if is_champion(table, label):
            return label
    return None


def verify_nonsingularity(table: FinitePerformanceTable) -> list[tuple[str, str]]:
    """Ordered pairs (a, b) where a is more likely better yet worse on average.

    An empty list certifies that a pairwise win probability of at least one
    half always implies weakly lower expected cost on this table.
    """
    means = {label: table.expected_cost(label) for label in table.solutions}
    violations = []
    for a in table.solutions:
        for b in table.solutions:
            if a == b:
                continue
            if pairwise_win_prob(table, a, b) >= 0.5 - _PROB_TOL and means[a] > means[b] + _PROB_TOL:
                violations.append((a, b))
    return violations


def load_table_text(text: str) -> FinitePerformanceTable:
    """Parse the plain tabular fixture format.

    First non-empty line: solution labels.  Each following line: an outcome's
    probability then its cost under each solution.  Outcomes are auto-labeled
    by row number.
    """
    lines = [line.split() for line in text.strip().splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if len(lines) < 2:
        raise InvalidInputError("table file needs a header and at least one outcome row")
    labels = tuple(lines[0])
    probs = []
    cols: list[list[float]] = [[] for _ in labels]
    for row_no, tokens in enumerate(lines[1:], start=1):
        if len(tokens) != len(labels) + 1:
            raise InvalidInputError(f"outcome row {row_no} must have a probability plus {len(labels)} costs")
        try:
            probs.append(float(tokens[0]))
            for i, tok in enumerate(tokens[1:]):
                cols[i].append(float(tok))
        except ValueError as exc:
            raise InvalidInputError(f"malformed number in outcome row {row_no}: {exc}") from exc
    outcomes = tuple(f"outcome{i}" for i in range(1, len(probs) + 1))
    return FinitePerformanceTable(labels, outcomes, tuple(probs), tuple(tuple(col) for col in cols))


def load_table_file(path: str) -> FinitePerformanceTable:
    with open(path, "r", encoding="utf-8") as fh:
        return load_table_text(fh.read())


def table_from_unimodal_family(
    grid: Sequence[int],
    per_outcome_minimizers: Sequence[int],
    per_outcome_scales: Sequence[float],
) -> FinitePerformanceTable:
    """Equiprobable table with V-shaped costs c_w * |u - u*_w| on a grid.

    Every row is unimodal in the decision, which is the hypothesis under
    which the median of the per-outcome minimizers must be a champion.
    """
    if len(per_outcome_minimizers) != len(per_outcome_scales):
        raise InvalidInputError("need one scale per outcome minimizer")
    if any(m not in set(grid) for m in per_outcome_minimizers):
        raise InvalidInputError("outcome minimizers must lie on the grid")
    if any(not c > 0 for c in per_outcome_scales):
        raise InvalidInputError("outcome scales must be positive")
    n_out = len(per_outcome_minimizers)
    probs = tuple(1.0 / n_out for _ in range(n_out))
    costs = tuple(
        tuple(c * abs(u - m) for m, c in zip(per_outcome_minimizers, per_outcome_scales))
        for u in grid
    )
    labels = tuple(f"u={u}" for u in grid)
    outcomes = tuple(f"outcome{i}" for i in range(1, n_out + 1))
    return FinitePerformanceTable(labels, outcomes, probs, costs)
