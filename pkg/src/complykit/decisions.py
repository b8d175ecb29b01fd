"""Games against nature: payoff matrices and choice criteria.

Implements the three classic criteria for a single decision-maker facing
an unknown state of nature:

* Wald (maximin): maximize the worst-state payoff.
* Hurwicz: maximize lambda * row max + (1 - lambda) * row min.
* Savage (minimax regret): minimize the worst-case regret, where the
  regret of a cell is the column maximum minus the cell payoff.

Ties are always broken toward the lowest action index; policy authors are
expected to order actions by preference.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

CRITERIA = ("wald", "hurwicz", "savage")


class DecisionError(ValueError):
    pass


@dataclass(frozen=True)
class PayoffMatrix:
    actions: tuple
    states: tuple
    values: tuple  # tuple of row tuples, |actions| x |states|

    def __init__(self, actions: Sequence[str], states: Sequence[str],
                 values: Sequence[Sequence[float]]):
        actions = tuple(actions)
        states = tuple(states)
        rows = tuple(tuple(float(v) for v in row) for row in values)
        if not actions or not states:
            raise DecisionError("payoff matrix must be nonempty")
        if len(rows) != len(actions):
            raise DecisionError(
                f"expected {len(actions)} payoff rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != len(states):
                raise DecisionError(
                    f"payoff row {i} has {len(row)} entries, expected {len(states)}")
            for v in row:
                if not math.isfinite(v):
                    raise DecisionError("payoffs must be finite")
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "values", rows)

    @classmethod
    def from_csv(cls, path) -> "PayoffMatrix":
        """Read a matrix file: header row = state labels, first column = actions."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 2 or len(rows[0]) < 2:
            raise DecisionError("matrix file needs a header row and one action row")
        states = [s.strip() for s in rows[0][1:]]
        actions = []
        values = []
        for r, row in enumerate(rows[1:], start=2):
            if len(row) != len(states) + 1:
                raise DecisionError(f"row {r}: expected {len(states) + 1} cells")
            actions.append(row[0].strip())
            try:
                values.append([float(v) for v in row[1:]])
            except ValueError as exc:
                raise DecisionError(f"row {r}: {exc}") from exc
        return cls(actions, states, values)


@dataclass(frozen=True)
class StrategyChoice:
    criterion: str
    action_index: int
    action_label: str
    value: float
    scores: tuple
    regret_matrix: Optional[tuple] = None  # savage only
    hurwicz_lambda: Optional[float] = None  # hurwicz only


def _argbest(scores, best):
    """Index of the first score attaining best(scores)."""
    target = best(scores)
    return next(i for i, s in enumerate(scores) if s == target), target


def wald(m: PayoffMatrix) -> StrategyChoice:
    scores = tuple(min(row) for row in m.values)
    idx, value = _argbest(scores, max)
    return StrategyChoice("wald", idx, m.actions[idx], value, scores)


def hurwicz(m: PayoffMatrix, lam: float) -> StrategyChoice:
    if not 0.0 <= lam <= 1.0:
        raise DecisionError("lambda must lie in [0, 1]")
    scores = tuple(lam * max(row) + (1.0 - lam) * min(row) for row in m.values)
    idx, value = _argbest(scores, max)
    return StrategyChoice("hurwicz", idx, m.actions[idx], value, scores,
                          hurwicz_lambda=lam)


def regret_matrix(m: PayoffMatrix) -> tuple:
    col_max = [max(m.values[i][j] for i in range(len(m.actions)))
               for j in range(len(m.states))]
    return tuple(
        tuple(col_max[j] - row[j] for j in range(len(m.states)))
        for row in m.values
    )


def savage(m: PayoffMatrix) -> StrategyChoice:
    regrets = regret_matrix(m)
    scores = tuple(max(row) for row in regrets)
    idx, value = _argbest(scores, min)
    return StrategyChoice("savage", idx, m.actions[idx], value, scores,
                          regret_matrix=regrets)


def choose(m: PayoffMatrix, criterion: str, lam: float = 0.5) -> StrategyChoice:
    if criterion == "wald":
        return wald(m)
    if criterion == "hurwicz":
        return hurwicz(m, lam)
    if criterion == "savage":
        return savage(m)
    raise DecisionError(f"unknown criterion {criterion!r}")


def decide(spec) -> StrategyChoice:
    """Run the criterion named by a policy decision block.

    `spec` carries `payoffs` (a PayoffMatrix), `criterion`, and
    `hurwicz_lambda`.
    """
    return choose(spec.payoffs, spec.criterion, spec.hurwicz_lambda)
