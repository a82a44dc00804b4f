"""Agglomerative linkage clustering of approval scores.

Scores are clustered on the real line starting from singletons. At each step
the two closest clusters are merged, where the distance between clusters is
one of

* ``single``:  ``min |a - b|`` over ``a in A, b in B``
* ``average``: mean of ``|a - b|`` over all pairs
* ``max``:     ``max |a - b|`` over all pairs

Merging stops once ``beta`` clusters remain (cluster-count criterion) or once
every pair of clusters is at distance at least ``mindist`` (min-distance
criterion). The cluster holding the maximum score is the shortlist.

Because all clusters are intervals of the sorted score sequence, only
neighbouring clusters need to be compared: for intervals ``A > B > C`` each
of the three distances satisfies ``d(A, C) > d(A, B)`` once equal scores share
a cluster, which happens first since they are at distance 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import ParameterError, SortedScores, WinnerSet

DISTANCES = ("single", "average", "max")


@dataclass(frozen=True)
class LinkageConfig:
    """Distance function and stopping criterion of a linkage clustering.

    Exactly one of ``beta`` (stop at this many clusters) and ``min_distance``
    (stop once all clusters are at least this far apart) is set.
    """

    distance: str = "single"
    beta: int | None = None
    min_distance: int | None = None

    def __post_init__(self):
        if self.distance not in DISTANCES:
            raise ParameterError(f"dist: expected one of {', '.join(DISTANCES)}, got {self.distance!r}")
        if (self.beta is None) == (self.min_distance is None):
            raise ParameterError("cluster: give exactly one of beta and mindist")
        if self.beta is not None and self.beta < 1:
            raise ParameterError(f"beta: must be at least 1, got {self.beta}")
        if self.min_distance is not None and self.min_distance < 1:
            raise ParameterError(f"mindist: must be at least 1, got {self.min_distance}")

    @classmethod
    def from_params(cls, params: dict[str, str]) -> "LinkageConfig":
        """Build from ``dist``/``beta``/``mindist`` text values."""
        kwargs = {"distance": params.get("dist", "single").strip().lower()}
        for key, field in (("beta", "beta"), ("mindist", "min_distance")):
            if key in params:
                try:
                    kwargs[field] = int(params[key])
                except ValueError:
                    raise ParameterError(f"{key}: expected an integer, got {params[key]!r}") from None
        return cls(**kwargs)

    def __str__(self) -> str:
        if self.beta is not None:
            return f"dist={self.distance},beta={self.beta}"
        return f"dist={self.distance},mindist={self.min_distance}"


@dataclass(frozen=True)
class Cluster:
    """Sorted positions ``start..end-1`` and the candidates sitting there."""

    start: int
    end: int
    members: frozenset[int]
    low: int
    high: int


@dataclass(frozen=True)
class Partition:
    """Clusters in descending score order; together they cover all candidates."""

    clusters: tuple[Cluster, ...]

    def __len__(self) -> int:
        return len(self.clusters)

    def intervals(self) -> list[tuple[int, int]]:
        return [(c.start, c.end) for c in self.clusters]


def cluster_distance(scores, a: tuple[int, int], b: tuple[int, int], distance: str):
    """Distance between the position intervals ``a`` and ``b`` of ``scores``.

    Works for any two disjoint intervals; exact (a Fraction for ``average``).
    """
    xs, ys = scores[a[0] : a[1]], scores[b[0] : b[1]]
    if distance == "single":
        return min(abs(x - y) for x in xs for y in ys)
    if distance == "max":
        return max(abs(x - y) for x in xs for y in ys)
    return Fraction(sum(abs(x - y) for x in xs for y in ys), len(xs) * len(ys))


def _adjacent_distance(scores, prefix, a, b, distance: str):
    # a lies directly above b in the sorted order, so every score of a is >= every score of b
    if distance == "single":
        return scores[a[1] - 1] - scores[b[0]]
    if distance == "max":
        return scores[a[0]] - scores[b[1] - 1]
    mean_a = Fraction(prefix[a[1]] - prefix[a[0]], a[1] - a[0])
    mean_b = Fraction(prefix[b[1]] - prefix[b[0]], b[1] - b[0])
    return mean_a - mean_b


def _partition(ss: SortedScores, intervals) -> Partition:
    return Partition(tuple(
        Cluster(i, j, frozenset(ss.order[i:j]), ss.scores[j - 1], ss.scores[i])
        for i, j in intervals
    ))


def iter_linkage(ss: SortedScores, cfg: LinkageConfig) -> Iterator[Partition]:
    """Yield the starting partition and the partition after every merge step."""
    scores = ss.scores
    prefix = [0]
    for s in scores:
        prefix.append(prefix[-1] + s)
    intervals = [(i, i + 1) for i in range(ss.m)]
    yield _partition(ss, intervals)
    while len(intervals) > 1:
        if cfg.beta is not None and len(intervals) <= cfg.beta:
            return
        dists = [
            _adjacent_distance(scores, prefix, intervals[i], intervals[i + 1], cfg.distance)
            for i in range(len(intervals) - 1)
        ]
        best = min(dists)
        if cfg.min_distance is not None and best >= cfg.min_distance:
            return
        # among closest pairs prefer the one reaching the lowest score,
        # then the one whose union has the smaller maximum score
        i = max(
            (i for i, d in enumerate(dists) if d == best),
            key=lambda i: (intervals[i + 1][1], intervals[i][0]),
        )
        intervals[i : i + 2] = [(intervals[i][0], intervals[i + 1][1])]
        yield _partition(ss, intervals)


def linkage_cluster(ss: SortedScores, cfg: LinkageConfig) -> Partition:
    """Final partition of the sorted scores under ``cfg``.

    Examples
    --------
    >>> from shortlisting.core import sort_scores
    >>> p = linkage_cluster(sort_scores([5, 5, 5]), LinkageConfig("average", beta=1))
    >>> p.intervals()
    [(0, 3)]
    """
    partition = None
    for partition in iter_linkage(ss, cfg):
        pass
    return partition


def cluster_shortlist(ss: SortedScores, cfg: LinkageConfig) -> WinnerSet:
    """Candidates in the cluster containing the maximum score.

    If the cluster boundary were to split a group of tied scores the cluster
    is extended to the whole tie group, so the result is always a feasible
    prefix.
    """
    top = linkage_cluster(ss, cfg).clusters[0]
    return ss.prefix(ss.count_at_least(top.low))
