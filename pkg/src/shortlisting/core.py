"""Elections, approval scores and the prefix structure of winner sets.

A shortlisting rule is anonymous, neutral, efficient and non-tiebreaking, so
its output is always a prefix of the candidates sorted by approval score that
does not cut through a group of tied candidates. This module provides the
election container and the sorted-score machinery all rules are built on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class ParameterError(ValueError):
    """Raised when a rule, axiom or configuration parameter is out of range."""


@dataclass(frozen=True)
class Election:
    """An approval-based election.

    Parameters
    ----------
    num_candidates : int
        Number of candidates ``m``; candidates are the indices ``0..m-1``.
    ballots : sequence of iterables of int
        One approval ballot per voter.
    labels : sequence of str, optional
        Display names, one per candidate.
    """

    num_candidates: int
    ballots: tuple[frozenset[int], ...]
    labels: tuple[str, ...] | None = None

    def __init__(
        self,
        num_candidates: int,
        ballots: Iterable[Iterable[int]],
        labels: Sequence[str] | None = None,
    ):
        ballots = tuple(frozenset(int(c) for c in b) for b in ballots)
        if num_candidates < 1:
            raise ParameterError("an election needs at least one candidate")
        if not ballots:
            raise ParameterError("an election needs at least one voter")
        for i, ballot in enumerate(ballots):
            for c in ballot:
                if not 0 <= c < num_candidates:
                    raise ParameterError(
                        f"ballot {i} approves candidate {c}, "
                        f"outside 0..{num_candidates - 1}"
                    )
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != num_candidates:
                raise ParameterError(
                    f"got {len(labels)} labels for {num_candidates} candidates"
                )
        object.__setattr__(self, "num_candidates", int(num_candidates))
        object.__setattr__(self, "ballots", ballots)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.ballots)

    @property
    def m(self) -> int:
        return self.num_candidates

    def label(self, c: int) -> str:
        if self.labels is None:
            return f"c{c + 1}"
        return self.labels[c]

    @classmethod
    def from_matrix(cls, matrix, labels=None) -> "Election":
        """Build an election from an ``n x m`` boolean approval matrix."""
        matrix = np.asarray(matrix, dtype=bool)
        n, m = matrix.shape
        ballots = [np.flatnonzero(row).tolist() for row in matrix]
        return cls(m, ballots, labels)

    @classmethod
    def from_scores(cls, scores: Sequence[int], n: int | None = None, labels=None):
        """Build an election realizing the given approval scores.

        Voter ``i`` approves candidate ``j`` iff ``i < scores[j]``, so the
        last voters approve fewest candidates. ``n`` defaults to the maximum
        score (at least one voter).
        """
        if n is None:
            n = max(max(scores, default=0), 1)
        if any(s < 0 or s > n for s in scores):
            raise ParameterError(f"scores {tuple(scores)} not realizable with n={n}")
        ballots = [[j for j, s in enumerate(scores) if i < s] for i in range(n)]
        return cls(len(scores), ballots, labels)

    def matrix(self) -> np.ndarray:
        """The ``n x m`` boolean approval matrix."""
        out = np.zeros((self.n, self.m), dtype=bool)
        for i, ballot in enumerate(self.ballots):
            out[i, list(ballot)] = True
        return out


@dataclass(frozen=True)
class SortedScores:
    """Scores in canonical descending order.

    ``order[i]`` is the candidate at sorted position ``i`` (0-based) and
    ``scores[i]`` its approval score. Ties are ordered by ascending candidate
    index.
    """

    order: tuple[int, ...]
    scores: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.scores)

    def is_feasible_cut(self, k: int) -> bool:
        """Whether selecting the first ``k`` positions breaks no tie."""
        return k == 0 or k == self.m or self.scores[k - 1] != self.scores[k]

    def prefix(self, k: int) -> "WinnerSet":
        return WinnerSet(k, frozenset(self.order[:k]))

    def count_at_least(self, threshold) -> int:
        return sum(1 for s in self.scores if s >= threshold)

    def count_above(self, threshold) -> int:
        return sum(1 for s in self.scores if s > threshold)

    def gaps(self) -> list[int]:
        """``gaps[i]`` is the drop between sorted positions ``i`` and ``i+1``."""
        s = self.scores
        return [s[i] - s[i + 1] for i in range(len(s) - 1)]


@dataclass(frozen=True)
class WinnerSet:
    """The first ``cut`` candidates of a :class:`SortedScores` enumeration."""

    cut: int
    members: frozenset[int]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, c) -> bool:
        return c in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))


def approval_scores(e: Election) -> tuple[int, ...]:
    """Number of ballots approving each candidate."""
    scores = [0] * e.m
    for ballot in e.ballots:
        for c in ballot:
            scores[c] += 1
    return tuple(scores)


def sort_scores(scores: Sequence[int]) -> SortedScores:
    order = tuple(sorted(range(len(scores)), key=lambda j: (-scores[j], j)))
    return SortedScores(order, tuple(int(scores[j]) for j in order))


def is_degenerate(scores: Sequence[int]) -> bool:
    """True iff all candidates have the same approval score."""
    return len(set(scores)) <= 1


def feasible_winner_sets(ss: SortedScores) -> list[WinnerSet]:
    """All winner sets a shortlisting rule can output, ascending by size."""
    return [ss.prefix(k) for k in range(ss.m + 1) if ss.is_feasible_cut(k)]
