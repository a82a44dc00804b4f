import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shortlisting import axioms as ax
from shortlisting.axioms import AxiomId, Witness, check_axiom, violates
from shortlisting.core import Election, ParameterError, approval_scores
from shortlisting.rules import parse_rule_spec


@pytest.mark.parametrize("text, expected", [
    ("unanimity", AxiomId("unanimity")),
    ("Anti-Unanimity", AxiomId("antiunanimity")),
    ("stability:l=3", AxiomId("stability", 3)),
    ("l-stability:l=2", AxiomId("stability", 2)),
    ("set-monotonicity", AxiomId("setmon")),
    ("superset_monotonicity", AxiomId("supmon")),
    ("resistance-to-clones", AxiomId("clones")),
    ("independence-of-losing-alternatives", AxiomId("ila")),
])
def test_axiom_parse(text, expected):
    assert AxiomId.parse(text) == expected
    assert AxiomId.parse(str(expected)) == expected


@pytest.mark.parametrize("text", ["stability", "stability:l=0", "stability:l=31", "unanimity:l=2",
                                  "monotone", "stability:k=2", "stability:l=x"])
def test_axiom_parse_errors(text):
    with pytest.raises(ParameterError):
        AxiomId.parse(text)


def test_random_matrix_ranges():
    for t in range(300):
        mat = ax.random_matrix(ax.trial_rng(1, t))
        n, m = mat.shape
        assert ax.AUDIT_M[0] <= m <= ax.AUDIT_M[1]
        assert ax.AUDIT_N[0] <= n <= ax.AUDIT_N[1]
        assert mat.dtype == bool


def test_trial_streams_are_reproducible():
    a = ax.random_matrix(ax.trial_rng(4, 17))
    b = ax.random_matrix(ax.trial_rng(4, 17))
    assert np.array_equal(a, b)


@pytest.mark.parametrize("rule, axiom", [
    ("fgap:k=5", "stability:l=5"),
    ("fgap:k=5", "unanimity"),
    ("threshold:alpha=0.5", "independence"),
    ("isp:s=4", "supmon"),
    ("av", "setmon"),
    ("largestgap", "efficiency"),
    ("qncsa:q=0.5", "nontiebreaking"),
    ("next:k=2", "anonymity"),
    ("topfgap:s=3,k=2", "neutrality"),
])
def test_satisfied_axioms(rule, axiom):
    v = check_axiom(rule, AxiomId.parse(axiom), trials=400, seed=2)
    assert v.outcome == "no-violation-found"
    assert v.trials == 400


@pytest.mark.parametrize("rule, axiom", [
    ("av", "independence"),
    ("firstmajority", "setmon"),
    ("qncsa:q=0.5", "supmon"),
    ("av", "stability:l=2"),
    ("threshold:alpha=0.5", "determined"),
])
def test_violated_axioms_have_replayable_witnesses(rule, axiom):
    v = check_axiom(rule, AxiomId.parse(axiom), trials=2000, seed=0, seeds=ax.known_counterexamples())
    assert v.violated
    assert v.witness.replay()


def test_known_witness_shapes():
    w = ax.witness_from_scores("qncsa:q=0.5", "supmon", (90, 90, 67), 98, extra=(2,))
    assert approval_scores(w.election) == (90, 90, 67)
    assert approval_scores(w.perturbed) == (91, 91, 68)
    assert w.winners == {0, 1} and w.perturbed_winners == {0, 1, 2}


def test_witness_replay_rejects_tampering():
    w = ax.witness_from_scores("largestgap", "ila", (3, 2, 1, 0), focus=2)
    assert w.replay()
    assert not Witness(w.rule, w.axiom, w.election, frozenset({0, 1}), w.perturbed,
                       w.perturbed_winners, w.mapping, w.focus).replay()
    # same winner sets, but the removed candidate is a winner: not an ILA pair
    assert not Witness(w.rule, w.axiom, w.election, w.winners, w.perturbed,
                       w.perturbed_winners, w.mapping, 0).replay()


def test_witness_text_round_trip():
    witnesses = ax.known_counterexamples()
    text = "\n".join(ax.format_witness(w) for w in witnesses)
    parsed = ax.parse_witnesses(text)
    assert parsed == witnesses
    assert all(w.replay() for w in parsed)


def test_witness_with_empty_sets_round_trips():
    e = Election(2, [[], [1]])
    w = Witness("threshold:alpha=0.5", "determined", e, frozenset(), e, frozenset())
    assert ax.parse_witnesses(ax.format_witness(w)) == [w]


def test_violates_unanimity():
    mat = np.array([[1, 1, 0], [1, 0, 1]], dtype=bool)
    assert violates(AxiomId("unanimity"), mat, frozenset({1}), focus=0)
    assert not violates(AxiomId("unanimity"), mat, frozenset({0}), focus=0)


def test_violates_stability():
    mat = Election.from_scores((5, 4, 1), n=5).matrix()
    assert violates(AxiomId("stability", 2), mat, frozenset({0}))
    assert not violates(AxiomId("stability", 2), mat, frozenset({0, 1}))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0, 0.1, 0.3, 0.5, 0.7, 0.9]), st.integers(0, 10_000))
def test_independence_accepts_threshold_for_any_alpha(alpha, seed):
    v = check_axiom(f"threshold:alpha={alpha}", AxiomId("independence"), trials=60, seed=seed)
    assert not v.violated


@pytest.mark.parametrize("rule", [
    "av", "msthreshold:alpha=0.5", "meanthreshold", "firstmajority", "qncsa:q=0.5", "next:k=2",
    "largestgap", "fgap:k=2", "mfgap:l=2", "isp:s=3", "dsp:order=2,1", "topfgap:s=3,k=2",
    "cluster:dist=single,beta=2",
])
def test_independence_rejects_other_families(rule):
    v = check_axiom(rule, AxiomId("independence"), trials=3000, seed=1)
    assert v.violated
    assert v.witness.replay()


def test_table_audit_small_matches_expected():
    results = ax.table1_audit(trials=300, seed=11)
    assert ax.table1_mismatches(results) == []
    header = ax.audit_csv(results).splitlines()[0]
    assert header.split(",")[1:] == list(ax.TABLE1_AXIOMS)


def test_table_audit_parallel_identical():
    rows = ax.TABLE1_ROWS[:3]
    a = ax.table1_audit(trials=50, seed=3, jobs=1, rows=rows)
    b = ax.table1_audit(trials=50, seed=3, jobs=2, rows=rows)
    assert ax.audit_csv(a) == ax.audit_csv(b)
    assert ax.witness_dump(a) == ax.witness_dump(b)


@pytest.mark.parametrize("reference, constraint, k", [
    ("av", "determined-nontiebreaking", None),
    ("fgap:k=3", "k-stable-determined", 3),
    ("fgap:k=5", "k-stable-determined", 5),
])
def test_minimality(reference, constraint, k):
    assert not ax.minimality_check(reference, constraint, k, trials=150, seed=0).violated


def test_minimality_detects_non_minimal_reference():
    v = ax.minimality_check("isp:s=3", "determined-nontiebreaking", trials=150, seed=0)
    assert v.violated


def test_minimality_examples():
    rng = np.random.default_rng(3)
    for _ in range(300):
        mat = ax.random_matrix(rng)
        f3 = ax.winners(parse_rule_spec("fgap:k=3"), mat)
        f5 = ax.winners(parse_rule_spec("fgap:k=5"), mat)
        a = ax.winners(parse_rule_spec("av"), mat)
        t = ax.winners(parse_rule_spec("threshold:alpha=0.3"), mat)
        assert f3 <= f5
        assert a <= f3 and a <= f5
        if t:
            assert a <= t


def test_minimality_errors():
    with pytest.raises(ParameterError):
        ax.minimality_check("av", "nonsense")
    with pytest.raises(ParameterError):
        ax.minimality_check("fgap:k=2", "k-stable-determined", None)


def test_bound_check_small_case():
    report = ax.theorem1_bound_check(3, trials=200, seed=0)
    assert report.passed
    assert all(report.tightness_failures.values())


def test_bound_needs_l_at_least_two():
    with pytest.raises(ParameterError):
        ax.theorem1_bound_check(1, trials=1)


@pytest.mark.parametrize("scores", [(3, 1), (5, 2, 2, 0), (4, 3, 1)])
def test_one_stability_is_satisfied_by_av(scores):
    mat = Election.from_scores(scores).matrix()
    w = ax.winners(parse_rule_spec("av"), mat)
    for axiom in (AxiomId("unanimity"), AxiomId("antiunanimity")):
        assert not any(violates(axiom, mat, w, focus=c) for c in range(len(scores)))
    assert not violates(AxiomId("stability", 1), mat, w)


def test_verdict_requires_witness_iff_violated():
    with pytest.raises(ValueError):
        ax.AxiomVerdict("av", "unanimity", True, None, 1, 1, 0)
