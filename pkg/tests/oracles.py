"""Reference implementations used as test oracles.

Everything here works from the literal rule and axiom definitions on plain
lists, by enumerating candidate subsets where that is feasible. Nothing is
imported from the package under test.
"""

from __future__ import annotations

import math
from itertools import combinations
from pathlib import Path


def scores_of(ballots, m):
    sc = [0] * m
    for b in ballots:
        for c in b:
            sc[c] += 1
    return sc


def sorted_candidates(scores):
    return sorted(range(len(scores)), key=lambda c: (-scores[c], c))


def all_subsets(m):
    for size in range(m + 1):
        for s in combinations(range(m), size):
            yield frozenset(s)


def is_shortlist(scores, s):
    """Efficient and non-tiebreaking: every member beats every non-member."""
    return all(scores[a] > scores[b] for a in s for b in range(len(scores)) if b not in s)


def shortlists(scores):
    return [s for s in all_subsets(len(scores)) if is_shortlist(scores, s)]


def av(scores):
    top = max(scores)
    return frozenset(c for c, s in enumerate(scores) if s == top)


def threshold(scores, n, percent):
    t = percent * n // 100
    return frozenset(c for c, s in enumerate(scores) if s > t)


def first_k_gap(scores, k):
    desc = sorted(scores, reverse=True)
    for i in range(len(desc) - 1):
        if desc[i] - desc[i + 1] >= k:
            return frozenset(c for c, s in enumerate(scores) if s >= desc[i])
    return frozenset(range(len(scores)))


def largest_gap(scores):
    desc = sorted(scores, reverse=True)
    gaps = [desc[i] - desc[i + 1] for i in range(len(desc) - 1)]
    if not gaps or max(gaps) == 0:
        return frozenset(range(len(scores)))
    i = gaps.index(max(gaps))
    return frozenset(c for c, s in enumerate(scores) if s >= desc[i])


def first_majority(scores):
    desc = sorted(scores, reverse=True)
    for i in range(len(desc)):
        if sum(desc[: i + 1]) > sum(desc[i + 1 :]):
            return frozenset(c for c, s in enumerate(scores) if s >= desc[i])
    return frozenset()


def next_k(scores, k):
    desc = sorted(scores, reverse=True)
    m = len(desc)
    members = set()
    order = sorted_candidates(scores)
    for i in range(m):
        if all(desc[j] <= sum(desc[j + 1 : j + 1 + k]) for j in range(i)):
            members.add(order[i])
    return frozenset(members)


def increasing_size_priority(scores, s):
    """Smallest shortlist of size at least ``s``; all candidates if ``m < s``."""
    sizes = sorted(len(w) for w in shortlists(scores))
    chosen = next((k for k in sizes if k >= s), len(scores))
    return next(w for w in shortlists(scores) if len(w) == chosen)


def size_priority(scores, ranking):
    """Most preferred shortlist size under ``ranking`` (a full list over 0..m)."""
    by_size = {len(w): w for w in shortlists(scores)}
    for k in ranking:
        if k in by_size:
            return by_size[k]
    raise ValueError("ranking covers no shortlist size")


def top_s_first_k_gap(scores, s, k):
    w = first_k_gap(scores, k)
    return w if len(w) <= s else increasing_size_priority(scores, s)


def qncsa_per_voter(ballots, m, q, subset):
    """Voter-by-voter q-NCSA score; 0 for the empty set."""
    if not subset:
        return 0.0
    size = len(subset)
    return sum((len(subset & set(b)) - len(subset - set(b))) / size**q for b in ballots)


def qncsa_largest_maximizers(ballots, m, q, tol=1e-9):
    """All largest subsets whose per-voter q-NCSA score is maximal (within ``tol``)."""
    scored = [(s, qncsa_per_voter(ballots, m, q, s)) for s in all_subsets(m)]
    best = max(v for _, v in scored)
    tied = [s for s, v in scored if abs(v - best) <= tol * max(1.0, abs(v), abs(best))]
    top = max(len(s) for s in tied)
    return [s for s in tied if len(s) == top]


def linkage_all_pairs(scores, distance="single", beta=None, mindist=None):
    """Agglomerative linkage over all cluster pairs (not just neighbours).

    Returns the cluster (as a set of candidates) holding the maximum score,
    widened to every candidate scoring at least its minimum. Ties between
    pairs go to the pair containing the smallest score, then to the pair
    whose union has the smaller maximum.
    """
    from fractions import Fraction

    clusters = [[c] for c in range(len(scores))]

    def dist(a, b):
        diffs = [abs(scores[x] - scores[y]) for x in a for y in b]
        if distance == "single":
            return min(diffs)
        if distance == "max":
            return max(diffs)
        return Fraction(sum(diffs), len(diffs))

    while len(clusters) > 1:
        if beta is not None and len(clusters) <= beta:
            break
        pairs = [(dist(a, b), i, j) for (i, a), (j, b) in combinations(enumerate(clusters), 2)]
        best = min(d for d, _, _ in pairs)
        if mindist is not None and best >= mindist:
            break
        cands = [(i, j) for d, i, j in pairs if d == best]

        def key(ij):
            union = clusters[ij[0]] + clusters[ij[1]]
            return (min(scores[c] for c in union), max(scores[c] for c in union))

        i, j = min(cands, key=key)
        clusters[i] = clusters[i] + clusters[j]
        del clusters[j]
    top = max(range(len(scores)), key=lambda c: scores[c])
    cluster = next(cl for cl in clusters if top in cl)
    low = min(scores[c] for c in cluster)
    return frozenset(c for c, s in enumerate(scores) if s >= low)


def read_ballot_file(path):
    """Minimal reader for the ballot format: (names, ballots, winner index or None)."""
    names, ballots, winner = [], [], None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        value = value.strip()
        if key == "candidate":
            names.append(value)
        elif key == "winner":
            winner = value
        elif key == "ballot":
            ballots.append([names.index(x.strip()) for x in value.split(";")] if value else [])
    return names, ballots, (names.index(winner) if winner is not None else None)


def winner_position(scores, winner):
    return 1 + sum(1 for s in scores if s > scores[winner])


def eph_fractional(ballots, remaining):
    from fractions import Fraction

    fsc = {c: Fraction(0) for c in remaining}
    for b in ballots:
        left = [c for c in b if c in remaining]
        for c in left:
            fsc[c] += Fraction(1, len(left))
    return fsc


def truncnorm_mean(mu, sd, lo=0.0, hi=1.0):
    a, b = (lo - mu) / sd, (hi - mu) / sd
    phi = lambda x: math.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    Phi = lambda x: 0.5 * (1 + math.erf(x / math.sqrt(2)))
    return mu + sd * (phi(a) - phi(b)) / (Phi(b) - Phi(a))
