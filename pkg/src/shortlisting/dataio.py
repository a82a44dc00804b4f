"""Ballot files, Hugo-style data sets and the E Pluribus Hugo elimination rule.

Ballot file format (UTF-8, one directive per line)::

    # comment
    candidate: The Calculating Stars
    candidate: Spinning Silver
    winner: The Calculating Stars
    ballot: The Calculating Stars; Spinning Silver
    ballot:

Candidates are declared before they appear on a ballot and in declaration
order become candidates ``0, 1, ...``. The ``winner`` line is optional. Names
are trimmed and may not contain ``;``. Lines whose first non-blank character
is ``#`` are comments; blank lines are ignored. A data set is a directory
tree ``<year>/<category>.ballots``.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .core import Election, approval_scores, sort_scores


class BallotFormatError(ValueError):
    """A ballot file violates the format; the message names file and line."""


class DatasetError(ValueError):
    """One or more files of a data set could not be parsed."""


@dataclass(frozen=True)
class BallotFile:
    path: str
    election: Election
    true_winner: int | None = None


def parse_ballot_text(text: str, source: str = "<string>") -> BallotFile:
    labels: list[str] = []
    index: dict[str, int] = {}
    ballots: list[list[int]] = []
    winner = None
    winner_line = 0

    def fail(lineno, msg):
        raise BallotFormatError(f"{source}:{lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip().lower(), value.strip()
        if not sep:
            fail(lineno, f"expected '<directive>: ...', got {line!r}")
        if key == "candidate":
            if not value:
                fail(lineno, "empty candidate name")
            if ";" in value:
                fail(lineno, f"candidate name {value!r} contains ';'")
            if value in index:
                fail(lineno, f"candidate {value!r} declared twice")
            index[value] = len(labels)
            labels.append(value)
        elif key == "winner":
            if winner is not None:
                fail(lineno, "more than one winner line")
            winner, winner_line = value, lineno
        elif key == "ballot":
            ballot = []
            for name in (x.strip() for x in value.split(";")) if value else ():
                if name not in index:
                    fail(lineno, f"unknown candidate {name!r}")
                if index[name] in ballot:
                    fail(lineno, f"candidate {name!r} listed twice on one ballot")
                ballot.append(index[name])
            ballots.append(ballot)
        else:
            fail(lineno, f"unknown directive {key!r}")
    if not labels:
        raise BallotFormatError(f"{source}: no candidates declared")
    if not ballots:
        raise BallotFormatError(f"{source}: no ballots")
    true_winner = None
    if winner is not None:
        if winner not in index:
            fail(winner_line, f"winner {winner!r} is not a declared candidate")
        true_winner = index[winner]
    return BallotFile(source, Election(len(labels), ballots, labels), true_winner)


def parse_ballot_file(path) -> BallotFile:
    path = Path(path)
    return parse_ballot_text(path.read_text(encoding="utf-8"), str(path))


def format_ballot_text(election: Election, true_winner: int | None = None) -> str:
    labels = [election.label(c) for c in range(election.m)]
    for name in labels:
        if ";" in name or "\n" in name or not name.strip() or name != name.strip():
            raise BallotFormatError(f"label {name!r} cannot be written to a ballot file")
    lines = [f"candidate: {name}" for name in labels]
    if true_winner is not None:
        lines.append(f"winner: {labels[true_winner]}")
    for ballot in election.ballots:
        names = "; ".join(labels[c] for c in sorted(ballot))
        lines.append(f"ballot: {names}".rstrip())
    return "\n".join(lines) + "\n"


def write_ballot_file(path, election: Election, true_winner: int | None = None) -> None:
    Path(path).write_text(format_ballot_text(election, true_winner), encoding="utf-8")


@dataclass(frozen=True)
class HugoElection:
    election: Election
    actual_winner: int | None
    year: str
    category: str
    path: str = ""

    @property
    def true_winner(self) -> int | None:
        return self.actual_winner

    @property
    def sorted_scores(self):
        return sort_scores(approval_scores(self.election))


def load_hugo_dataset(root) -> list[HugoElection]:
    """Load every ``<year>/<category>.ballots`` file below ``root``.

    Files without a winner line load with ``actual_winner=None`` and trigger
    a warning. Parse errors are collected and raised together.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"{root}: not a directory")
    out, errors = [], []
    for path in sorted(root.glob("*/*.ballots")):
        try:
            bf = parse_ballot_file(path)
        except (BallotFormatError, UnicodeDecodeError) as exc:
            errors.append(str(exc))
            continue
        if bf.true_winner is None:
            warnings.warn(f"{path}: no winner line; excluded from precision metrics", stacklevel=2)
        out.append(HugoElection(bf.election, bf.true_winner, path.parent.name, path.stem, str(path)))
    if errors:
        raise DatasetError("could not parse:\n" + "\n".join(errors))
    return out


def with_winner(elections) -> list:
    """Drop elections that have no known winner."""
    return [h for h in elections if h.actual_winner is not None]


# --------------------------------------------------------------------------
# E Pluribus Hugo


def fractional_scores(e: Election, remaining) -> dict[int, int]:
    """Fractional approval scores, scaled by ``lcm(1..m)`` to stay integral.

    Each ballot gives weight ``1 / |ballot & remaining|`` to each remaining
    candidate on it; ballots with no remaining candidate give nothing.
    """
    scale = math.lcm(*range(1, e.m + 1))
    fsc = dict.fromkeys(remaining, 0)
    for ballot in e.ballots:
        left = [c for c in ballot if c in fsc]
        for c in left:
            fsc[c] += scale // len(left)
    return fsc


def e_pluribus_hugo(e: Election, target: int) -> frozenset[int]:
    """Eliminate candidates until ``target`` remain.

    Each round the two remaining candidates with the lowest fractional
    scores are compared and the one with fewer approvals is eliminated.
    Ties: the pair is chosen by (fractional score, approvals, larger index
    first); within the pair the eliminated candidate has the fewest
    approvals, then the lower fractional score, then the larger index.
    """
    if target < 1:
        raise ValueError(f"target: must be at least 1, got {target}")
    approvals = approval_scores(e)
    remaining = set(range(e.m))
    while len(remaining) > target:
        fsc = fractional_scores(e, remaining)
        pair = sorted(remaining, key=lambda c: (fsc[c], approvals[c], -c))[:2]
        loser = min(pair, key=lambda c: (approvals[c], fsc[c], -c))
        remaining.remove(loser)
    return frozenset(remaining)


def winner_position(e: Election, winner: int) -> int:
    """1-based position of ``winner`` by approval score, ties resolved upward."""
    scores = approval_scores(e)
    return 1 + sum(1 for s in scores if s > scores[winner])


def winner_position_histogram(elections) -> dict[int, int]:
    """Number of elections whose actual winner sits at each sorted position."""
    counts = Counter(
        winner_position(h.election, h.actual_winner)
        for h in elections if h.actual_winner is not None
    )
    return dict(sorted(counts.items()))
