import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from shortlisting.clustering import (
    LinkageConfig,
    cluster_distance,
    cluster_shortlist,
    iter_linkage,
    linkage_cluster,
)
from shortlisting.core import ParameterError, feasible_winner_sets, is_degenerate, sort_scores
from shortlisting.rules import first_k_gap, largest_gap

EX1 = (10, 10, 9, 8, 6, 3, 3, 0)

score_vectors = st.lists(st.integers(0, 30), min_size=1, max_size=12)
configs = st.one_of(
    st.builds(LinkageConfig, st.sampled_from(["single", "average", "max"]), beta=st.integers(1, 6)),
    st.builds(LinkageConfig, st.sampled_from(["single", "average", "max"]), min_distance=st.integers(1, 8)),
)


def test_example1_beta_two_splits_at_largest_gap():
    p = linkage_cluster(sort_scores(EX1), LinkageConfig("single", beta=2))
    assert p.intervals() == [(0, 5), (5, 8)]
    assert p.clusters[0].low - p.clusters[1].high == 3
    assert cluster_shortlist(sort_scores(EX1), LinkageConfig("single", beta=2)).members == frozenset(range(5))


def test_example1_min_distance_two():
    got = cluster_shortlist(sort_scores(EX1), LinkageConfig("single", min_distance=2))
    assert got.members == frozenset(range(4))


@pytest.mark.parametrize("distance", ["single", "average", "max"])
def test_all_equal_scores_single_cluster(distance):
    p = linkage_cluster(sort_scores((5, 5, 5)), LinkageConfig(distance, beta=1))
    assert p.intervals() == [(0, 3)]


def test_beta_above_m_keeps_singletons():
    p = linkage_cluster(sort_scores((4, 2, 1)), LinkageConfig("single", beta=5))
    assert p.intervals() == [(0, 1), (1, 2), (2, 3)]


@pytest.mark.parametrize("distance, expected", [
    ("single", 4), ("max", 6), ("average", Fraction(5)),
])
def test_cluster_distance(distance, expected):
    scores = (9, 8, 4, 3)
    assert cluster_distance(scores, (0, 2), (2, 4), distance) == expected


@given(score_vectors, configs)
def test_merges_keep_intervals(scores, cfg):
    ss = sort_scores(scores)
    sizes = []
    for p in iter_linkage(ss, cfg):
        ivs = p.intervals()
        assert ivs[0][0] == 0 and ivs[-1][1] == ss.m
        assert all(a[1] == b[0] for a, b in zip(ivs, ivs[1:]))
        assert set().union(*(c.members for c in p.clusters)) == set(range(ss.m))
        sizes.append(len(p))
    assert sizes == list(range(ss.m, ss.m - len(sizes), -1))


@given(score_vectors, configs)
def test_shortlist_is_feasible(scores, cfg):
    ss = sort_scores(scores)
    w = cluster_shortlist(ss, cfg)
    assert w in feasible_winner_sets(ss)
    assert ss.order[0] in w.members


@given(score_vectors)
def test_single_linkage_equivalences(scores):
    ss = sort_scores(scores)
    if not is_degenerate(scores):
        assert cluster_shortlist(ss, LinkageConfig("single", beta=2)) == largest_gap(ss)
    for k in (1, 2, 4):
        assert cluster_shortlist(ss, LinkageConfig("single", min_distance=k)) == first_k_gap(ss, k)


@pytest.mark.parametrize("distance", ["single", "average", "max"])
def test_neighbour_merging_matches_all_pairs_oracle(distance):
    rng = random.Random(31)
    for _ in range(500):
        m = rng.randint(1, 9)
        scores = [rng.randint(0, 20) for _ in range(m)]
        ss = sort_scores(scores)
        if rng.random() < 0.5:
            beta = rng.randint(1, m)
            cfg, kw = LinkageConfig(distance, beta=beta), {"beta": beta}
        else:
            md = rng.randint(1, 6)
            cfg, kw = LinkageConfig(distance, min_distance=md), {"mindist": md}
        expected = oracles.linkage_all_pairs(scores, distance, **kw)
        assert cluster_shortlist(ss, cfg).members == expected, (scores, cfg)


@pytest.mark.parametrize("params, text", [
    ({"dist": "single", "beta": "2"}, "dist=single,beta=2"),
    ({"dist": "MAX", "mindist": "3"}, "dist=max,mindist=3"),
    ({"beta": "1"}, "dist=single,beta=1"),
])
def test_config_from_params(params, text):
    assert str(LinkageConfig.from_params(params)) == text


@pytest.mark.parametrize("kwargs", [
    {"distance": "ward", "beta": 2},
    {"distance": "single"},
    {"distance": "single", "beta": 2, "min_distance": 1},
    {"distance": "single", "beta": 0},
    {"distance": "single", "min_distance": 0},
])
def test_config_errors(kwargs):
    with pytest.raises(ParameterError):
        LinkageConfig(**kwargs)


def test_config_non_integer():
    with pytest.raises(ParameterError, match="beta"):
        LinkageConfig.from_params({"beta": "two"})
