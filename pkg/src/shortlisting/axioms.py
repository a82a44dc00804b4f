"""Randomized axiom audits for shortlisting rules.

Each axiom is checked by sampling small random elections and, for axioms that
relate two elections, perturbing the sample into a second election. A found
violation is returned as a :class:`Witness` that can be replayed.

Random elections have ``m`` uniform in ``[2, 12]``, ``n`` uniform in
``[2, 30]`` and i.i.d. approvals with a per-election probability uniform in
``[0.1, 0.9]``. Degenerate samples (all scores equal) are redrawn; a trial
whose perturbed election is degenerate or has a single candidate is counted
as not applicable.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import Election, ParameterError, approval_scores, is_degenerate, sort_scores
from .rules import RuleSpec, apply_rule, parse_rule_spec

AUDIT_M = (2, 12)
AUDIT_N = (2, 30)
AUDIT_P = (0.1, 0.9)

KINDS = (
    "anonymity", "neutrality", "efficiency", "nontiebreaking",
    "unanimity", "antiunanimity", "stability", "determined",
    "independence", "ila", "clones", "setmon", "supmon",
)
_ALIASES = {
    "nontiebreaking": "nontiebreaking", "antiunanimity": "antiunanimity",
    "lstability": "stability", "independenceoflosingalternatives": "ila",
    "resistancetoclones": "clones", "setmonotonicity": "setmon",
    "supersetmonotonicity": "supmon",
}
PAIR_KINDS = ("anonymity", "neutrality", "independence", "ila", "clones", "setmon", "supmon")


@dataclass(frozen=True)
class AxiomId:
    """An axiom; ``stability`` carries its ``l``."""

    kind: str
    l: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"axiom: unknown axiom {self.kind!r}")
        if self.kind == "stability":
            if self.l is None or self.l < 1:
                raise ParameterError(f"l: stability needs l >= 1, got {self.l}")
            if self.l > AUDIT_N[1]:
                raise ParameterError(
                    f"l: {self.l} exceeds the largest audited voter count {AUDIT_N[1]}"
                )
        elif self.l is not None:
            raise ParameterError(f"l: only stability takes l, not {self.kind}")

    @classmethod
    def parse(cls, text: str) -> "AxiomId":
        """Parse ``unanimity``, ``stability:l=2``, ``set-monotonicity`` etc."""
        name, _, param = text.strip().lower().partition(":")
        key = name.replace("-", "").replace("_", "").replace(" ", "")
        key = _ALIASES.get(key, key)
        l = None
        if param:
            pkey, _, value = param.partition("=")
            if pkey.strip() != "l":
                raise ParameterError(f"axiom: unknown parameter {pkey!r}")
            try:
                l = int(value)
            except ValueError:
                raise ParameterError(f"l: expected an integer, got {value!r}") from None
        return cls(key, l)

    def __str__(self) -> str:
        return f"stability:l={self.l}" if self.kind == "stability" else self.kind


@dataclass(frozen=True)
class Witness:
    """Evidence of a violation.

    ``mapping[j]`` is the candidate of ``election`` that candidate ``j`` of
    ``perturbed`` stands for (a clone maps to its original). ``focus`` is the
    planted, removed, cloned or fixed candidate, or the changed voter for the
    monotonicity axioms.
    """

    rule: str
    axiom: str
    election: Election
    winners: frozenset[int]
    perturbed: Election | None = None
    perturbed_winners: frozenset[int] | None = None
    mapping: tuple[int, ...] | None = None
    focus: int | None = None
    note: str = ""

    def replay(self) -> bool:
        """Recompute both winner sets and re-check the violation.

        Returns True iff the recorded winner sets are reproduced, the two
        elections stand in the relation the axiom requires, and the axiom is
        violated.
        """
        spec = parse_rule_spec(self.rule)
        axiom = AxiomId.parse(self.axiom)
        mat = self.election.matrix()
        w = winners(spec, mat)
        if w != self.winners:
            return False
        pmat = pw = None
        if self.perturbed is not None:
            pmat = self.perturbed.matrix()
            pw = winners(spec, pmat)
            if pw != self.perturbed_winners:
                return False
        return violates(axiom, mat, w, pmat, pw, self.mapping, self.focus)


@dataclass(frozen=True)
class AxiomVerdict:
    rule: str
    axiom: str
    violated: bool
    witness: Witness | None
    trials: int
    applicable: int
    seed: int

    def __post_init__(self):
        if self.violated != (self.witness is not None):
            raise ValueError("a verdict carries a witness iff it is a violation")

    @property
    def outcome(self) -> str:
        return "violated" if self.violated else "no-violation-found"


# --------------------------------------------------------------------------
# Elections as boolean matrices


def winners(spec: RuleSpec, mat: np.ndarray) -> frozenset[int]:
    scores = mat.sum(axis=0).tolist()
    return apply_rule(spec, sort_scores(scores), mat.shape[0]).members


def random_matrix(rng: np.random.Generator, m_range=AUDIT_M, n_range=AUDIT_N) -> np.ndarray:
    """A random non-degenerate approval matrix."""
    while True:
        m = int(rng.integers(m_range[0], m_range[1] + 1))
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = rng.uniform(*AUDIT_P)
        mat = rng.random((n, m)) < p
        if not is_degenerate(mat.sum(axis=0).tolist()):
            return mat


def _usable(mat: np.ndarray) -> bool:
    return mat.shape[1] >= 2 and not is_degenerate(mat.sum(axis=0).tolist())


def _scores(mat):
    return mat.sum(axis=0)


def violates(axiom: AxiomId, mat, w, pmat=None, pw=None, mapping=None, focus=None) -> bool:
    """Whether (``mat``, ``w``) and (``pmat``, ``pw``) witness a violation.

    For axioms relating two elections the required relation between them is
    checked too; if it does not hold the pair is no witness and the result is
    False.
    """
    kind = axiom.kind
    n, m = mat.shape
    sc = _scores(mat)
    if kind == "unanimity":
        return bool(mat[:, focus].all()) and focus not in w
    if kind == "antiunanimity":
        return not mat[:, focus].any() and focus in w
    if kind == "determined":
        return not w
    if kind in ("efficiency", "nontiebreaking", "stability"):
        losers = [c for c in range(m) if c not in w]
        for a in w:
            for b in losers:
                if kind == "efficiency" and sc[a] < sc[b]:
                    return True
                if kind == "nontiebreaking" and sc[a] == sc[b]:
                    return True
                if kind == "stability" and abs(int(sc[a]) - int(sc[b])) < axiom.l:
                    return True
        return False

    if pmat is None:
        return False
    pn, pm = pmat.shape
    if kind == "anonymity":
        same = pmat.shape == mat.shape and sorted(map(bytes, mat)) == sorted(map(bytes, pmat))
        return same and w != pw
    if kind == "neutrality":
        if pmat.shape != mat.shape or sorted(mapping) != list(range(m)):
            return False
        if not all((pmat[:, j] == mat[:, mapping[j]]).all() for j in range(m)):
            return False
        return frozenset(mapping[j] for j in pw) != w
    if kind == "independence":
        if pmat.shape != mat.shape or not (pmat[:, focus] == mat[:, focus]).all():
            return False
        return (focus in w) != (focus in pw)
    if kind == "ila":
        if focus in w or pm != m - 1 or pn != n:
            return False
        if not (pmat == np.delete(mat, focus, axis=1)).all():
            return False
        keep = [j for j in range(m) if j != focus]
        return frozenset(keep[j] for j in pw) != w
    if kind == "clones":
        if pm != m + 1 or pn != n:
            return False
        if not ((pmat[:, :m] == mat).all() and (pmat[:, m] == mat[:, focus]).all()):
            return False
        expected = w | {m} if focus in w else w
        return pw != expected
    if kind in ("setmon", "supmon"):
        if pmat.shape != mat.shape:
            return False
        others = [i for i in range(n) if i != focus]
        if not (pmat[others] == mat[others]).all():
            return False
        old = set(np.flatnonzero(mat[focus]).tolist())
        new = set(np.flatnonzero(pmat[focus]).tolist())
        if old & w:
            return False
        if kind == "setmon" and new != old | w:
            return False
        if kind == "supmon" and not w <= new:
            return False
        return pw != w
    raise ParameterError(f"axiom: unknown axiom {kind!r}")


# --------------------------------------------------------------------------
# Perturbations


def clone_candidate(mat, c):
    return np.concatenate([mat, mat[:, [c]]], axis=1)


def remove_candidate(mat, c):
    return np.delete(mat, c, axis=1)


def replace_ballot(mat, voter, approved):
    out = mat.copy()
    out[voter] = False
    out[voter, sorted(approved)] = True
    return out


def _trial(spec: RuleSpec, axiom: AxiomId, rng: np.random.Generator):
    """One randomized trial: None if not applicable, else (violation?, witness args)."""
    kind = axiom.kind
    mat = random_matrix(rng)
    n, m = mat.shape
    focus = None
    if kind in ("unanimity", "antiunanimity"):
        focus = int(rng.integers(m))
        mat[:, focus] = kind == "unanimity"
        if not _usable(mat):
            return None
    w = winners(spec, mat)

    if kind not in PAIR_KINDS:
        if violates(axiom, mat, w, focus=focus):
            return dict(election=mat, winners=w, focus=focus)
        return False

    mapping = None
    if kind == "anonymity":
        pmat = mat[rng.permutation(n)]
    elif kind == "neutrality":
        mapping = tuple(int(j) for j in rng.permutation(m))
        pmat = mat[:, list(mapping)]
    elif kind == "independence":
        focus = int(rng.integers(m))
        pmat = rng.random((n, m)) < rng.uniform(*AUDIT_P)
        pmat[:, focus] = mat[:, focus]
    elif kind == "ila":
        losers = [c for c in range(m) if c not in w]
        if not losers:
            return None
        focus = int(rng.choice(losers))
        pmat = remove_candidate(mat, focus)
        mapping = tuple(j for j in range(m) if j != focus)
    elif kind == "clones":
        focus = int(rng.integers(m))
        pmat = clone_candidate(mat, focus)
        mapping = tuple(range(m)) + (focus,)
    else:  # setmon / supmon
        voters = [i for i in range(n) if not (mat[i, sorted(w)].any() if w else False)]
        if not w or not voters:
            return None
        focus = int(rng.choice(voters))
        approved = set(np.flatnonzero(mat[focus]).tolist()) | w
        if kind == "supmon":
            extra = rng.random(m) < rng.uniform(*AUDIT_P)
            approved |= set(np.flatnonzero(extra).tolist())
        pmat = replace_ballot(mat, focus, approved)
    if not _usable(pmat):
        return None
    pw = winners(spec, pmat)
    if violates(axiom, mat, w, pmat, pw, mapping, focus):
        return dict(election=mat, winners=w, perturbed=pmat, perturbed_winners=pw,
                    mapping=mapping, focus=focus)
    return False


def _make_witness(spec, axiom, found, note) -> Witness:
    pmat = found.get("perturbed")
    return Witness(
        rule=str(spec),
        axiom=str(axiom),
        election=Election.from_matrix(found["election"]),
        winners=frozenset(found["winners"]),
        perturbed=None if pmat is None else Election.from_matrix(pmat),
        perturbed_winners=found.get("perturbed_winners"),
        mapping=found.get("mapping"),
        focus=found.get("focus"),
        note=note,
    )


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def check_axiom(spec, axiom, trials: int = 1000, seed: int = 0, seeds=()) -> AxiomVerdict:
    """Search for a violation of ``axiom`` by ``spec``.

    Parameters
    ----------
    spec : RuleSpec or str
    axiom : AxiomId or str
    trials : int
        Number of random trials (at least 1).
    seed : int
        Trial ``t`` draws from ``numpy.random.default_rng([seed, t])``.
    seeds : iterable of Witness
        Known counterexamples tried before the random search; the first one
        that replays for this rule and axiom is returned.

    Returns
    -------
    AxiomVerdict
    """
    if isinstance(spec, str):
        spec = parse_rule_spec(spec)
    if isinstance(axiom, str):
        axiom = AxiomId.parse(axiom)
    if trials < 1:
        raise ParameterError(f"trials: must be at least 1, got {trials}")
    for w in seeds:
        if w.rule == str(spec) and w.axiom == str(axiom) and w.replay():
            return AxiomVerdict(str(spec), str(axiom), True, w, 0, 0, seed)
    applicable = 0
    for t in range(trials):
        result = _trial(spec, axiom, trial_rng(seed, t))
        if result is None:
            continue
        applicable += 1
        if result:
            witness = _make_witness(spec, axiom, result, f"random trial {t}")
            return AxiomVerdict(str(spec), str(axiom), True, witness, t + 1, applicable, seed)
    return AxiomVerdict(str(spec), str(axiom), False, None, trials, applicable, seed)


# --------------------------------------------------------------------------
# Known counterexamples


def witness_from_scores(rule, axiom, scores, n=None, focus=None, extra=(), note="") -> Witness:
    """Build a witness on the staircase election realizing ``scores``.

    Voter ``i`` approves candidate ``j`` iff ``i < scores[j]``. For the
    monotonicity axioms the changed voter is the last voter disjoint from the
    winner set, who then approves the winner set plus ``extra``.
    """
    spec = parse_rule_spec(rule) if isinstance(rule, str) else rule
    ax = AxiomId.parse(axiom) if isinstance(axiom, str) else axiom
    mat = Election.from_scores(scores, n).matrix()
    m = mat.shape[1]
    w = winners(spec, mat)
    pmat = mapping = None
    if ax.kind == "ila":
        pmat, mapping = remove_candidate(mat, focus), tuple(j for j in range(m) if j != focus)
    elif ax.kind == "clones":
        pmat, mapping = clone_candidate(mat, focus), tuple(range(m)) + (focus,)
    elif ax.kind in ("setmon", "supmon"):
        focus = max(i for i in range(mat.shape[0]) if not mat[i, sorted(w)].any())
        pmat = replace_ballot(mat, focus, set(np.flatnonzero(mat[focus]).tolist()) | w | set(extra))
    found = dict(election=mat, winners=w, focus=focus, mapping=mapping)
    if pmat is not None:
        found.update(perturbed=pmat, perturbed_winners=winners(spec, pmat))
    return _make_witness(spec, ax, found, note)


# (rule, axiom, scores, n, focus, extra, note); candidate indices are 0-based
_KNOWN = [
    ("firstmajority", "setmon", (5, 5, 4, 3, 3), 6, None, (), "scores become (6,6,5,3,3)"),
    ("firstmajority", "supmon", (5, 5, 4, 3, 3), 6, None, (), "scores become (6,6,5,3,3)"),
    ("firstmajority", "ila", (3, 2, 1, 0), None, 2, (), "remove c3"),
    ("largestgap", "ila", (3, 2, 1, 0), None, 2, (), "remove c3"),
    ("next:k=2", "ila", (4, 3, 2, 0), None, 2, (), "remove c3"),
    ("firstmajority", "clones", (3, 2, 0), None, 1, (), "clone c2"),
    ("next:k=2", "clones", (2, 1, 0), None, 1, (), "clone c2"),
    ("isp:s=2", "clones", (2, 1, 0), None, 0, (), "clone c1"),
    ("topfgap:s=2,k=2", "clones", (2, 1, 0), None, 0, (), "clone c1"),
    ("sp:order=2,3,...", "clones", (2, 1, 0), None, 0, (), "clone c1"),
    ("dsp:order=2,1", "clones", (2, 1, 0), None, 0, (), "clone c1"),
    ("qncsa:q=0.5", "clones", (10, 7, 7), 10, 0, (), "clone c1"),
    ("threshold:alpha=0.5", "supmon", (2, 1), 3, None, (1,), "voter approves {c1,c2}"),
    ("msthreshold:alpha=0.5", "supmon", (4, 2), 5, None, (1,), "voter approves {c1,c2}"),
    ("next:k=2", "supmon", (3, 1, 1), 4, None, (1, 2), "voter approves all"),
    ("largestgap", "supmon", (2, 1, 0), 3, None, (1,), "voter approves {c1,c2}"),
    ("sp:order=2,1,3,0", "ila", (2, 1, 1), 3, 2, (), "remove c3"),
    ("sp:order=2,1,3,0", "supmon", (2, 1, 1), 3, None, (1,), "voter approves {c1,c2}"),
    ("dsp:order=2,1", "supmon", (2, 1, 1), 3, None, (1,), "voter approves {c1,c2}"),
    ("qncsa:q=0.5", "supmon", (90, 90, 67), 98, None, (2,), "scores become (91,91,68)"),
    ("topfgap:s=1,k=2", "stability:l=2", (3, 2, 0, 0), None, None, (), "c1 and c2 split"),
    ("topfgap:s=3,k=3", "antiunanimity", (3, 2, 0, 0), None, 3, (), "zero-score c4 wins"),
    # counterexamples at the parameters audited in the axiom table
    ("isp:s=4", "clones", (5, 4, 3, 2, 1, 0), None, 0, (), "clone c1"),
    ("isp:s=4", "antiunanimity", (2, 1, 0), None, 2, (), "m < s selects everyone"),
    ("isp:s=4", "stability:l=2", (5, 4, 3, 2, 1), None, None, (), "c4 and c5 split"),
    ("dsp:order=2,1", "ila", (3, 1, 1, 0), None, 1, (), "remove c2"),
    ("topfgap:s=10,k=5", "stability:l=2", tuple(range(11, 0, -1)), None, None, (), "ISP fallback splits"),
    ("topfgap:s=10,k=5", "antiunanimity", (1,) * 9 + (0, 0, 0), 1, 11, (), "ISP fallback takes all"),
    ("topfgap:s=10,k=5", "clones", tuple(range(10, 0, -1)), None, 0, (), "clone c1"),
]


def known_counterexamples() -> list[Witness]:
    """Hand-constructed counterexamples, each a replayable witness."""
    return [
        witness_from_scores(rule, axiom, scores, n, focus, extra, note)
        for rule, axiom, scores, n, focus, extra, note in _KNOWN
    ]


# --------------------------------------------------------------------------
# Axiom table


TABLE1_AXIOMS = (
    "unanimity", "antiunanimity", "stability", "determined", "independence",
    "ila", "clones", "setmon", "supmon",
)

# (row label, rule, l used for the stability column)
TABLE1_ROWS = (
    ("AV", "av", 2),
    ("Threshold", "threshold:alpha=0.5", 2),
    ("MSThreshold", "msthreshold:alpha=0.5", 2),
    ("FirstMajority", "firstmajority", 2),
    ("q-NCSA", "qncsa:q=0.5", 2),
    ("Next-k", "next:k=2", 2),
    ("LargestGap", "largestgap", 2),
    ("FirstKGap", "fgap:k=5", 5),
    ("DecisiveSP", "dsp:order=2,1", 2),
    ("ISP", "isp:s=4", 2),
    ("TopFgap", "topfgap:s=10,k=5", 2),
)


def table1_axiom(column: str, l: int) -> AxiomId:
    return AxiomId("stability", l) if column == "stability" else AxiomId(column)


def _audit_cell(args):
    rule, axiom, trials, seed = args
    return check_axiom(rule, axiom, trials, seed, seeds=known_counterexamples())


def table1_audit(trials: int = 10_000, seed: int = 0, jobs: int = 1, rows=TABLE1_ROWS):
    """Audit every (rule, axiom) cell of the axiom table.

    Returns
    -------
    dict
        ``{(row label, column): AxiomVerdict}`` in row-major order.
    """
    cells = [
        ((label, col), (rule, str(table1_axiom(col, l)), trials, seed))
        for label, rule, l in rows
        for col in TABLE1_AXIOMS
    ]
    args = [a for _, a in cells]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            verdicts = list(pool.map(_audit_cell, args))
    else:
        verdicts = [_audit_cell(a) for a in args]
    return {key: v for (key, _), v in zip(cells, verdicts)}


def audit_csv(results: dict) -> str:
    """CSV matrix: one row per rule, one pass/fail column per axiom."""
    rows = list(dict.fromkeys(label for label, _ in results))
    cols = list(dict.fromkeys(col for _, col in results))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rule"] + cols)
    for label in rows:
        writer.writerow([label] + [
            "fail" if results[label, col].violated else "pass" for col in cols
        ])
    return out.getvalue()


# --------------------------------------------------------------------------
# Witness text format


def _format_election(e: Election) -> str:
    ballots = "|".join(",".join(str(c) for c in sorted(b)) for b in e.ballots)
    return f"m={e.m} ballots={ballots}"


def _parse_election(text: str) -> Election:
    m_part, _, b_part = text.partition(" ballots=")
    m = int(m_part.removeprefix("m="))
    ballots = [[int(c) for c in b.split(",") if c] for b in b_part.split("|")]
    return Election(m, ballots)


def _format_set(s) -> str:
    return ",".join(str(c) for c in sorted(s))


def _parse_set(text: str) -> frozenset[int]:
    return frozenset(int(c) for c in text.split(",") if c)


def format_witness(w: Witness) -> str:
    """Line-oriented ``key: value`` record; scores lines are informational."""
    lines = [
        f"rule: {w.rule}",
        f"axiom: {w.axiom}",
        f"election: {_format_election(w.election)}",
        f"scores: {','.join(map(str, approval_scores(w.election)))}",
        f"winners: {_format_set(w.winners)}",
    ]
    if w.perturbed is not None:
        lines += [
            f"perturbed: {_format_election(w.perturbed)}",
            f"perturbed_scores: {','.join(map(str, approval_scores(w.perturbed)))}",
            f"perturbed_winners: {_format_set(w.perturbed_winners)}",
        ]
    if w.mapping is not None:
        lines.append(f"mapping: {','.join(map(str, w.mapping))}")
    if w.focus is not None:
        lines.append(f"focus: {w.focus}")
    if w.note:
        lines.append(f"note: {w.note}")
    return "\n".join(lines) + "\n"


def parse_witnesses(text: str) -> list[Witness]:
    """Parse records written by :func:`format_witness`, separated by blank lines."""
    out = []
    for block in text.strip().split("\n\n"):
        if not block.strip():
            continue
        fields = {}
        for line in block.strip().splitlines():
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
        out.append(Witness(
            rule=fields["rule"],
            axiom=fields["axiom"],
            election=_parse_election(fields["election"]),
            winners=_parse_set(fields.get("winners", "")),
            perturbed=_parse_election(fields["perturbed"]) if "perturbed" in fields else None,
            perturbed_winners=_parse_set(fields["perturbed_winners"]) if "perturbed" in fields else None,
            mapping=tuple(int(c) for c in fields["mapping"].split(",")) if "mapping" in fields else None,
            focus=int(fields["focus"]) if "focus" in fields else None,
            note=fields.get("note", ""),
        ))
    return out


def witness_dump(results: dict) -> str:
    return "\n".join(format_witness(v.witness) for v in results.values() if v.violated)


# --------------------------------------------------------------------------
# Minimality and the stability bound


def minimality_universe() -> list[RuleSpec]:
    """The implemented rule instances that minimality is checked against."""
    texts = ["av", "meanthreshold", "firstmajority", "largestgap"]
    texts += [f"threshold:alpha={a / 10}" for a in range(0, 10)]
    texts += [f"msthreshold:alpha={a / 10}" for a in range(0, 10)]
    texts += [f"next:k={k}" for k in range(1, 5)]
    texts += [f"qncsa:q={q}" for q in (0, 0.25, 0.5, 0.75, 1)]
    texts += [f"fgap:k={k}" for k in range(1, 8)]
    texts += [f"mfgap:l={k}" for k in range(1, 8)]
    texts += [f"isp:s={s}" for s in range(1, 8)]
    texts += ["dsp", "dsp:order=2,1", "sp:order=3,1,..."]
    texts += [f"topfgap:s={s},k={k}" for s in (1, 3, 6) for k in (1, 3, 5)]
    return [parse_rule_spec(t) for t in texts]


def _is_stable(mat, w, l) -> bool:
    return not violates(AxiomId("stability", l), mat, w)


def minimality_check(reference, constraint: str, k: int | None = None,
                     trials: int = 1000, seed: int = 0, universe=None) -> AxiomVerdict:
    """Check that ``reference`` selects a subset of every admissible output.

    On each random election, every rule of ``universe`` whose output is
    non-empty (``constraint="determined-nontiebreaking"``) or non-empty and
    ``k``-stable (``constraint="k-stable-determined"``) must contain the
    reference output.
    """
    reference = parse_rule_spec(reference) if isinstance(reference, str) else reference
    if constraint not in ("determined-nontiebreaking", "k-stable-determined"):
        raise ParameterError(f"constraint: unknown constraint {constraint!r}")
    if constraint == "k-stable-determined" and (k is None or k < 1):
        raise ParameterError("k: k-stable-determined needs k >= 1")
    universe = minimality_universe() if universe is None else universe
    label = f"minimality:{constraint}" + (f":k={k}" if k else "")
    for t in range(trials):
        mat = random_matrix(trial_rng(seed, t))
        w = winners(reference, mat)
        for other in universe:
            ow = winners(other, mat)
            if not ow:
                continue
            if constraint == "k-stable-determined" and not _is_stable(mat, ow, k):
                continue
            if not w <= ow:
                witness = Witness(str(reference), label, Election.from_matrix(mat), w,
                                  note=f"{other} selects {_format_set(ow)}")
                return AxiomVerdict(str(reference), label, True, witness, t + 1, t + 1, seed)
    return AxiomVerdict(str(reference), label, False, None, trials, trials, seed)


@dataclass
class BoundReport:
    """Outcome of the stability-bound harness for one ``l``."""

    l: int
    trials: int
    violations: list = field(default_factory=list)
    tightness_certified: bool = False
    tightness_failures: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations and self.tightness_certified


def _bound_axioms(l):
    return AxiomId("unanimity"), AxiomId("antiunanimity"), AxiomId("stability", l)


def _fails_any(mat, w, l) -> list[str]:
    failed = []
    m = mat.shape[1]
    for ax in _bound_axioms(l):
        if ax.kind == "stability":
            bad = violates(ax, mat, w)
        else:
            bad = any(violates(ax, mat, w, focus=c) for c in range(m))
        if bad:
            failed.append(str(ax))
    return failed


def theorem1_bound_check(l: int, trials: int = 1000, seed: int = 0) -> BoundReport:
    """Audit Modified First-l-Gap against Unanimity, Anti-Unanimity and l-Stability.

    (a) On random elections with ``n > (l-1)(m-1)`` (unanimous and zero-score
    candidates planted with probability 1/2 each) no axiom may fail.
    (b) On two candidates with scores ``(l-1, 0)`` and ``l-1`` voters every
    subset of candidates must fail at least one of the three axioms.
    """
    if l < 2:
        raise ParameterError(f"l: the bound needs l >= 2, got {l}")
    spec = RuleSpec("mfgap", k=l)
    report = BoundReport(l, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        m = int(rng.integers(AUDIT_M[0], AUDIT_M[1] + 1))
        low = (l - 1) * (m - 1) + 1
        n = int(rng.integers(low, low + 30))
        mat = rng.random((n, m)) < rng.uniform(*AUDIT_P)
        cols = rng.permutation(m)
        if rng.random() < 0.5:
            mat[:, cols[0]] = True
        if rng.random() < 0.5:
            mat[:, cols[1]] = False
        w = winners(spec, mat)
        failed = _fails_any(mat, w, l)
        if failed:
            report.violations.append((Election.from_matrix(mat), w, failed))
    tight = Election.from_scores((l - 1, 0), n=l - 1).matrix()
    for size in range(3):
        for subset in itertools.combinations(range(2), size):
            report.tightness_failures[subset] = _fails_any(tight, frozenset(subset), l)
    report.tightness_certified = all(report.tightness_failures.values())
    return report


# expected outcome per row, one character per TABLE1_AXIOMS column: "+" holds, "-" violated
TABLE1_EXPECTED = {
    "AV": "++-+-++++",
    "Threshold": "++--++++-",
    "MSThreshold": "++-+-+++-",
    "FirstMajority": "++-+-----",
    "q-NCSA": "++---+-+-",
    "Next-k": "++-+---+-",
    "LargestGap": "++-+--++-",
    "FirstKGap": "+-++-++++",
    "DecisiveSP": "++-+---+-",
    "ISP": "+--+-+-++",
    "TopFgap": "+--+-+-++",
}


def table1_mismatches(results: dict) -> list[tuple[str, str]]:
    """Cells whose audit outcome differs from :data:`TABLE1_EXPECTED`."""
    bad = []
    for (label, col), verdict in results.items():
        expected_violated = TABLE1_EXPECTED[label][TABLE1_AXIOMS.index(col)] == "-"
        if verdict.violated != expected_violated:
            bad.append((label, col))
    return bad
