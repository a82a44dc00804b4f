"""Shortlisting rules.

Every rule maps the sorted approval scores of an election to a prefix of the
canonical candidate enumeration (a :class:`~shortlisting.core.WinnerSet`).
Rule instances are described by :class:`RuleSpec`, which has a compact text
encoding used by the command line::

    av                      Approval Voting
    threshold:alpha=0.5     alpha-Threshold, f(n) = floor(alpha * n)
    msthreshold:alpha=0.5   Max-Score-alpha-Threshold
    meanthreshold           above-average approval score
    firstmajority           First Majority
    next:k=2                Next-k
    qncsa:q=0.5             q-NCSA
    largestgap              Largest Gap
    fgap:k=2                First-k-Gap; k may also be 0.2n or 0.7max
    mfgap:l=3               Modified First-l-Gap
    sp:order=1,6,0,...      Size Priority with an explicit priority order
    isp:s=4                 Increasing Size Priority s > s+1 > ...
    dsp:order=2,1           Decisive Size Priority (inner sizes first)
    topfgap:s=3,k=2         Top-s-First-k-Gap; k as for fgap
    cluster:dist=single,beta=2 / cluster:dist=max,mindist=3

Family names and keys are case-insensitive. In ``sp`` orders a trailing
``...`` appends all unlisted sizes in ascending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Election,
    ParameterError,
    SortedScores,
    WinnerSet,
    approval_scores,
    sort_scores,
)
from .clustering import LinkageConfig, cluster_shortlist

QNCSA_RTOL = 1e-9


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float literal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x).strip())


def format_fraction(x: Fraction) -> str:
    """Shortest exact decimal for ``x`` if one exists, else ``p/q``."""
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    text = f"{x.numerator * 10**digits // x.denominator:0{digits + 1}d}"
    text = f"{text[:-digits]}.{text[-digits:]}".rstrip("0")
    if text.startswith("-"):
        return text
    return text


# --------------------------------------------------------------------------
# Priority orders


@dataclass(frozen=True)
class PriorityOrder:
    """A strict total order over shortlist sizes, most preferred first.

    Three realizations exist:

    * ``explicit``: a ranking of ``0..M``; with ``open_tail`` the ranking is a
      prefix and all unlisted sizes follow in ascending order.
    * ``increasing``: ``s > s+1 > ... > m > s-1 > ... > 0``.
    * ``decisive``: for each ``m``, the listed sizes strictly between 0 and m,
      then the remaining inner sizes ascending, then ``m``, then ``0``.
    """

    kind: str
    ranking: tuple[int, ...] = ()
    s: int | None = None
    open_tail: bool = False

    @classmethod
    def explicit(cls, ranking, open_tail: bool = False) -> "PriorityOrder":
        ranking = tuple(int(k) for k in ranking)
        if len(set(ranking)) != len(ranking):
            raise ParameterError(f"order: repeated size in {ranking}")
        if any(k < 0 for k in ranking):
            raise ParameterError(f"order: negative size in {ranking}")
        if not open_tail and set(ranking) != set(range(len(ranking))):
            raise ParameterError(
                f"order: {ranking} is not a ranking of 0..{len(ranking) - 1} "
                "(append ',...' to complete it in ascending order)"
            )
        return cls("explicit", ranking, None, open_tail)

    @classmethod
    def increasing(cls, s: int) -> "PriorityOrder":
        if int(s) < 1:
            raise ParameterError(f"s: must be a positive integer, got {s}")
        return cls("increasing", (), int(s))

    @classmethod
    def decisive(cls, ranking=()) -> "PriorityOrder":
        ranking = tuple(int(k) for k in ranking)
        if len(set(ranking)) != len(ranking) or any(k < 1 for k in ranking):
            raise ParameterError(f"order: decisive rankings list distinct positive sizes, got {ranking}")
        return cls("decisive", ranking)

    def restrict(self, m: int) -> list[int]:
        """The order restricted to ``{0..m}``, most preferred first."""
        if self.kind == "increasing":
            return list(range(self.s, m + 1)) + list(range(min(self.s, m + 1) - 1, -1, -1))
        if self.kind == "decisive":
            inner = [k for k in self.ranking if 0 < k < m]
            listed = set(inner)
            inner += [k for k in range(1, m) if k not in listed]
            return inner + [m, 0] if m > 0 else [0]
        ranked = [k for k in self.ranking if k <= m]
        if self.open_tail:
            listed = set(ranked)
            return ranked + [k for k in range(m + 1) if k not in listed]
        if len(self.ranking) <= m:
            raise ParameterError(
                f"order: ranking covers sizes up to {len(self.ranking) - 1}, election has m={m}"
            )
        return ranked

    def __str__(self) -> str:
        if self.kind == "increasing":
            return f"isp:s={self.s}"
        body = ",".join(str(k) for k in self.ranking)
        if self.kind == "decisive":
            return f"dsp:order={body}" if body else "dsp"
        if self.open_tail:
            body = f"{body},..." if body else "..."
        return f"sp:order={body}"


# --------------------------------------------------------------------------
# Rule specifications


@dataclass(frozen=True)
class KSelector:
    """A gap size resolved per election: ``floor(alpha * n)`` or ``floor(alpha * max score)``."""

    alpha: Fraction
    base: str  # "n" or "max"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.base not in ("n", "max"):
            raise ParameterError(f"k: selector base must be 'n' or 'max', got {self.base!r}")

    def resolve(self, ss: SortedScores, n: int) -> int:
        ref = n if self.base == "n" else (ss.scores[0] if ss.m else 0)
        return math.floor(self.alpha * ref)

    def __str__(self) -> str:
        return f"{format_fraction(self.alpha)}{self.base}"


FAMILIES = {
    # family: (required keys, optional keys)
    "av": ((), ()),
    "threshold": (("alpha",), ()),
    "msthreshold": (("alpha",), ()),
    "meanthreshold": ((), ()),
    "firstmajority": ((), ()),
    "next": (("k",), ()),
    "qncsa": (("q",), ()),
    "largestgap": ((), ()),
    "fgap": (("k",), ()),
    "mfgap": (("l",), ()),
    "sp": (("order",), ()),
    "isp": (("s",), ()),
    "dsp": ((), ("order",)),
    "topfgap": (("s", "k"), ()),
    "cluster": (("linkage",), ()),
}

FAMILY_NAMES = {
    "av": "Approval Voting",
    "threshold": "Threshold",
    "msthreshold": "Max-Score-Threshold",
    "meanthreshold": "Mean-Threshold",
    "firstmajority": "First Majority",
    "next": "Next-k",
    "qncsa": "q-NCSA",
    "largestgap": "Largest Gap",
    "fgap": "First-k-Gap",
    "mfgap": "Modified First-k-Gap",
    "sp": "Size Priority",
    "isp": "Increasing Size Priority",
    "dsp": "Decisive Size Priority",
    "topfgap": "Top-s-First-k-Gap",
    "cluster": "Linkage Clustering",
}


@dataclass(frozen=True)
class RuleSpec:
    """A parameterized shortlisting rule instance.

    Use :func:`parse_rule_spec` to build one from its text encoding;
    ``str(spec)`` gives the canonical encoding back.
    """

    family: str
    alpha: Fraction | None = None
    k: int | KSelector | None = None
    q: float | None = None
    s: int | None = None
    order: PriorityOrder | None = None
    linkage: LinkageConfig | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"family: unknown rule family {self.family!r}")
        required, optional = FAMILIES[self.family]
        given = {
            "alpha": self.alpha, "k": self.k, "q": self.q, "s": self.s,
            "order": self.order, "linkage": self.linkage,
        }
        # mfgap stores its l in the k slot
        if self.family == "mfgap":
            given["l"] = given.pop("k")
        for key in required:
            if given.get(key) is None:
                raise ParameterError(f"{key}: required by {self.family}")
        for key, value in given.items():
            if value is not None and key not in required + optional:
                raise ParameterError(f"{key}: not a parameter of {self.family}")
        if self.alpha is not None:
            object.__setattr__(self, "alpha", as_fraction(self.alpha))
            if not 0 <= self.alpha <= 1:
                raise ParameterError(f"alpha: must lie in [0, 1], got {self.alpha}")
        if self.q is not None:
            object.__setattr__(self, "q", float(self.q))
            if not 0.0 <= self.q <= 1.0:
                raise ParameterError(f"q: must lie in [0, 1], got {self.q}")
        if self.s is not None and (not isinstance(self.s, int) or self.s < 1):
            raise ParameterError(f"s: must be a positive integer, got {self.s}")
        if isinstance(self.k, KSelector):
            if self.family not in ("fgap", "topfgap"):
                raise ParameterError(f"k: {self.family} takes an integer k")
            if not 0 <= self.k.alpha <= 1 or self.k.base not in ("n", "max"):
                raise ParameterError(f"k: bad selector {self.k}")
        elif self.k is not None and (not isinstance(self.k, int) or self.k < 1):
            key = "l" if self.family == "mfgap" else "k"
            raise ParameterError(f"{key}: must be a positive integer, got {self.k}")

    @property
    def name(self) -> str:
        return FAMILY_NAMES[self.family]

    def __str__(self) -> str:
        f = self.family
        if f in ("threshold", "msthreshold"):
            return f"{f}:alpha={format_fraction(self.alpha)}"
        if f in ("next", "fgap"):
            return f"{f}:k={self.k}"
        if f == "mfgap":
            return f"mfgap:l={self.k}"
        if f == "qncsa":
            return f"qncsa:q={self.q:g}"
        if f == "isp":
            return f"isp:s={self.s}"
        if f in ("sp", "dsp"):
            return str(self.order) if self.order is not None else f
        if f == "topfgap":
            return f"topfgap:s={self.s},k={self.k}"
        if f == "cluster":
            return f"cluster:{self.linkage}"
        return f


def _parse_k(value: str) -> int | KSelector:
    text = value.strip().lower()
    for base in ("max", "n"):
        if text.endswith(base):
            try:
                return KSelector(as_fraction(text[: -len(base)]), base)
            except (ValueError, ZeroDivisionError):
                raise ParameterError(f"k: cannot parse selector {value!r}") from None
    try:
        return int(text)
    except ValueError:
        raise ParameterError(f"k: expected an integer or a selector like 0.2n, got {value!r}") from None


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParameterError(f"{key}: expected an integer, got {value!r}") from None


def _parse_order(value: str, decisive: bool) -> PriorityOrder:
    items = [x.strip() for x in value.split(",") if x.strip()]
    open_tail = bool(items) and items[-1] in ("...", "…")
    if open_tail:
        items = items[:-1]
    ranking = [_parse_int("order", x) for x in items]
    if decisive:
        return PriorityOrder.decisive(ranking)
    return PriorityOrder.explicit(ranking, open_tail=open_tail)


def _split_params(body: str) -> dict[str, str]:
    params: dict[str, str] = {}
    last = None
    for token in body.split(","):
        token = token.strip()
        if "=" in token:
            key, value = token.split("=", 1)
            last = key.strip().lower()
            if last in params:
                raise ParameterError(f"{last}: given twice")
            params[last] = value.strip()
        elif last is not None:
            params[last] += "," + token
        elif token:
            raise ParameterError(f"cannot parse parameter {token!r}")
    return params


def parse_rule_spec(text: str) -> RuleSpec:
    """Parse the text encoding of a rule, e.g. ``topfgap:s=7,k=0.28n``."""
    text = text.strip()
    family, _, body = text.partition(":")
    family = family.strip().lower()
    if family not in FAMILIES:
        raise ParameterError(f"family: unknown rule family {family!r}")
    params = _split_params(body) if body.strip() else {}
    kwargs: dict = {}
    for key, value in params.items():
        if key == "alpha":
            try:
                kwargs["alpha"] = as_fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ParameterError(f"alpha: expected a number, got {value!r}") from None
        elif key == "q":
            try:
                kwargs["q"] = float(value)
            except ValueError:
                raise ParameterError(f"q: expected a number, got {value!r}") from None
        elif key == "s":
            kwargs["s"] = _parse_int("s", value)
        elif key == "k" and family != "mfgap":
            kwargs["k"] = _parse_k(value) if family in ("fgap", "topfgap") else _parse_int("k", value)
        elif key in ("l", "k") and family == "mfgap":
            kwargs["k"] = _parse_int("l", value)
        elif key == "order" and family in ("sp", "dsp"):
            kwargs["order"] = _parse_order(value, decisive=family == "dsp")
        elif family == "cluster" and key in ("dist", "beta", "mindist"):
            kwargs.setdefault("_linkage", {})[key] = value
        else:
            raise ParameterError(f"{key}: not a parameter of {family}")
    if family == "dsp" and "order" not in kwargs:
        kwargs["order"] = PriorityOrder.decisive()
    if family == "cluster":
        kwargs["linkage"] = LinkageConfig.from_params(kwargs.pop("_linkage", {}))
    return RuleSpec(family, **kwargs)


# --------------------------------------------------------------------------
# Rules


def av(ss: SortedScores) -> WinnerSet:
    """All candidates with maximal approval score."""
    return ss.prefix(ss.count_at_least(ss.scores[0]))


def threshold(ss: SortedScores, n: int, alpha) -> WinnerSet:
    """Candidates approved by more than ``floor(alpha * n)`` voters."""
    t = math.floor(as_fraction(alpha) * n)
    return ss.prefix(ss.count_above(t))


def max_score_threshold(ss: SortedScores, alpha) -> WinnerSet:
    t = math.floor(as_fraction(alpha) * ss.scores[0])
    return ss.prefix(ss.count_above(t))


def mean_threshold(ss: SortedScores) -> WinnerSet:
    total, m = sum(ss.scores), ss.m
    return ss.prefix(sum(1 for s in ss.scores if s * m > total))


def first_majority(ss: SortedScores) -> WinnerSet:
    """Smallest prefix holding more than half of all approvals, ties included.

    Returns the empty set if nobody is approved.
    """
    total = sum(ss.scores)
    running = 0
    for s in ss.scores:
        running += s
        if running > total - running:
            return ss.prefix(ss.count_at_least(s))
    return ss.prefix(0)


def next_k(ss: SortedScores, k: int) -> WinnerSet:
    """Cut before the first drop where a score exceeds the sum of the next ``k``."""
    s = ss.scores
    for i in range(ss.m):
        if s[i] > sum(s[i + 1 : i + 1 + k]):
            return ss.prefix(i + 1)
    return ss.prefix(ss.m)


def qncsa_score(ss: SortedScores, n: int, q: float, k: int) -> float:
    """q-NCSA score of the first ``k`` sorted candidates (0 for the empty set)."""
    if k == 0:
        return 0.0
    return sum(2 * s - n for s in ss.scores[:k]) / k**q


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= QNCSA_RTOL * max(1.0, abs(a), abs(b))


def qncsa(ss: SortedScores, n: int, q: float) -> WinnerSet:
    """Largest feasible prefix whose q-NCSA score is maximal."""
    candidates = [(0, 0.0)]
    net = 0
    for k in range(1, ss.m + 1):
        net += 2 * ss.scores[k - 1] - n
        if ss.is_feasible_cut(k):
            candidates.append((k, net / k**q))
    best = max(score for _, score in candidates)
    return ss.prefix(max(k for k, score in candidates if _close(score, best)))


def largest_gap(ss: SortedScores) -> WinnerSet:
    """Cut at the first position of the largest score drop.

    Degenerate profiles have no drop; all candidates win.
    """
    gaps = ss.gaps()
    if not gaps or max(gaps) == 0:
        return ss.prefix(ss.m)
    return ss.prefix(gaps.index(max(gaps)) + 1)


def first_k_gap(ss: SortedScores, k: int) -> WinnerSet:
    for i, gap in enumerate(ss.gaps()):
        if gap >= k:
            return ss.prefix(ss.count_at_least(ss.scores[i]))
    return ss.prefix(ss.m)


def modified_first_k_gap(ss: SortedScores, l: int) -> WinnerSet:
    """First-l-Gap, except that without an l-gap the empty set wins if anyone has score 0."""
    for i, gap in enumerate(ss.gaps()):
        if gap >= l:
            return ss.prefix(ss.count_at_least(ss.scores[i]))
    if ss.scores[-1] == 0:
        return ss.prefix(0)
    return ss.prefix(ss.m)


def size_priority(ss: SortedScores, order: PriorityOrder) -> WinnerSet:
    """The most preferred shortlist size that breaks no tie."""
    for k in order.restrict(ss.m):
        if ss.is_feasible_cut(k):
            return ss.prefix(k)
    raise ParameterError(f"order: {order} ranks no feasible size for m={ss.m}")


def top_s_first_k_gap(ss: SortedScores, s: int, k: int) -> WinnerSet:
    first_gap = first_k_gap(ss, k)
    if len(first_gap) <= s:
        return first_gap
    return size_priority(ss, PriorityOrder.increasing(s))


def resolve_k(spec: RuleSpec, ss: SortedScores, n: int) -> int:
    if isinstance(spec.k, KSelector):
        return spec.k.resolve(ss, n)
    return spec.k


def apply_rule(spec: RuleSpec, ss: SortedScores, n: int) -> WinnerSet:
    """Evaluate ``spec`` on already sorted scores of an election with ``n`` voters."""
    f = spec.family
    if f == "av":
        return av(ss)
    if f == "threshold":
        return threshold(ss, n, spec.alpha)
    if f == "msthreshold":
        return max_score_threshold(ss, spec.alpha)
    if f == "meanthreshold":
        return mean_threshold(ss)
    if f == "firstmajority":
        return first_majority(ss)
    if f == "next":
        return next_k(ss, spec.k)
    if f == "qncsa":
        return qncsa(ss, n, spec.q)
    if f == "largestgap":
        return largest_gap(ss)
    if f == "fgap":
        return first_k_gap(ss, resolve_k(spec, ss, n))
    if f == "mfgap":
        return modified_first_k_gap(ss, spec.k)
    if f in ("sp", "dsp"):
        return size_priority(ss, spec.order)
    if f == "isp":
        return size_priority(ss, PriorityOrder.increasing(spec.s))
    if f == "topfgap":
        return top_s_first_k_gap(ss, spec.s, resolve_k(spec, ss, n))
    if f == "cluster":
        return cluster_shortlist(ss, spec.linkage)
    raise ParameterError(f"family: unknown rule family {f!r}")


def evaluate(spec: RuleSpec | str, e: Election) -> WinnerSet:
    """Winner set of rule ``spec`` on election ``e``."""
    if isinstance(spec, str):
        spec = parse_rule_spec(spec)
    return apply_rule(spec, sort_scores(approval_scores(e)), e.n)
