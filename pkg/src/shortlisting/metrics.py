"""Precision, average shortlist size, parameter sweeps and Pareto frontiers."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .core import ParameterError
from .rules import (
    KSelector,
    PriorityOrder,
    RuleSpec,
    apply_rule,
    first_k_gap,
    resolve_k,
    size_priority,
)


class EmptyInputError(ValueError):
    """Raised when a metric is asked for over zero instances."""


def precision(outputs, true_winners) -> float:
    """Fraction of winner sets that contain the corresponding true winner."""
    outputs, true_winners = list(outputs), list(true_winners)
    if len(outputs) != len(true_winners):
        raise ParameterError(f"got {len(outputs)} outputs for {len(true_winners)} true winners")
    if not outputs:
        raise EmptyInputError("precision of zero instances is undefined")
    return sum(t in w for w, t in zip(outputs, true_winners)) / len(outputs)


def average_size(outputs) -> float:
    outputs = list(outputs)
    if not outputs:
        raise EmptyInputError("average size of zero instances is undefined")
    return sum(len(w) for w in outputs) / len(outputs)


@dataclass(frozen=True)
class RulePoint:
    spec: RuleSpec
    avg_size: float
    precision: float
    instance_count: int


def alpha_grid() -> list[Fraction]:
    """0, 0.01, ..., 1 as exact fractions."""
    return [Fraction(i, 100) for i in range(101)]


def default_grid(m: int) -> list[RuleSpec]:
    """All rule instances of the parameter sweep for up to ``m`` candidates.

    Next-k for k in {2, 3}; both threshold families, q-NCSA, First-k-Gap with
    ``k = floor(alpha n)`` and ``k = floor(alpha max)`` over the alpha grid;
    ISP for ``2 <= s <= m``; Top-s-First-k-Gap for ``2 <= s <= m`` with both
    k selectors over the alpha grid.
    """
    grid = [RuleSpec("next", k=2), RuleSpec("next", k=3)]
    alphas = alpha_grid()
    grid += [RuleSpec("threshold", alpha=a) for a in alphas]
    grid += [RuleSpec("msthreshold", alpha=a) for a in alphas]
    grid += [RuleSpec("qncsa", q=float(a)) for a in alphas]
    for base in ("n", "max"):
        grid += [RuleSpec("fgap", k=KSelector(a, base)) for a in alphas]
    grid += [RuleSpec("isp", s=s) for s in range(2, m + 1)]
    for s in range(2, m + 1):
        for base in ("n", "max"):
            grid += [RuleSpec("topfgap", s=s, k=KSelector(a, base)) for a in alphas]
    return grid


def default_grid_size(m: int) -> int:
    return 2 + 2 * 101 + 101 + 2 * 101 + (m - 1) + (m - 1) * 2 * 101


class _Evaluator:
    """Evaluates specs on one instance, sharing work between related specs."""

    def __init__(self, ss, n):
        self.ss, self.n = ss, n
        self.fgap: dict[int, frozenset] = {}
        self.isp: dict[int, frozenset] = {}

    def first_k_gap(self, k):
        if k not in self.fgap:
            self.fgap[k] = first_k_gap(self.ss, k).members
        return self.fgap[k]

    def isp_members(self, s):
        if s not in self.isp:
            self.isp[s] = size_priority(self.ss, PriorityOrder.increasing(s)).members
        return self.isp[s]

    def __call__(self, spec: RuleSpec) -> frozenset:
        if spec.family == "fgap":
            return self.first_k_gap(resolve_k(spec, self.ss, self.n))
        if spec.family == "isp":
            return self.isp_members(spec.s)
        if spec.family == "topfgap":
            w = self.first_k_gap(resolve_k(spec, self.ss, self.n))
            return w if len(w) <= spec.s else self.isp_members(spec.s)
        return apply_rule(spec, self.ss, self.n).members


def _sweep_chunk(args):
    instances, grid = args
    hits = [0] * len(grid)
    sizes = [0] * len(grid)
    for rec in instances:
        ev = _Evaluator(rec.sorted_scores, rec.election.n)
        for i, spec in enumerate(grid):
            w = ev(spec)
            hits[i] += rec.true_winner in w
            sizes[i] += len(w)
    return hits, sizes


def sweep(instances, grid=None, jobs: int = 1) -> list[RulePoint]:
    """One :class:`RulePoint` per spec of ``grid`` over all ``instances``.

    ``instances`` are records with ``election``, ``true_winner`` and
    ``sorted_scores`` (see :class:`~shortlisting.synthetic.InstanceRecord`).
    The default grid is :func:`default_grid` for the largest ``m`` present.
    """
    instances = list(instances)
    if not instances:
        raise EmptyInputError("sweep over zero instances")
    if grid is None:
        grid = default_grid(max(rec.election.m for rec in instances))
    grid = list(grid)
    jobs = max(1, min(jobs, len(instances)))
    chunks = [instances[i::jobs] for i in range(jobs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_sweep_chunk, [(c, grid) for c in chunks]))
    else:
        parts = [_sweep_chunk((instances, grid))]
    total = len(instances)
    points = []
    for i, spec in enumerate(grid):
        hits = sum(p[0][i] for p in parts)
        sizes = sum(p[1][i] for p in parts)
        points.append(RulePoint(spec, sizes / total, hits / total, total))
    return points


def dominates(q: RulePoint, p: RulePoint) -> bool:
    """``q`` is at least as precise and as small as ``p``, and strictly better in one."""
    return (q.precision >= p.precision and q.avg_size <= p.avg_size
            and (q.precision > p.precision or q.avg_size < p.avg_size))


def pareto_frontier(points) -> list[RulePoint]:
    """Points not dominated by any other point, by ascending average size.

    Coincident points are all kept.
    """
    ordered = sorted(points, key=lambda p: (p.avg_size, -p.precision))
    frontier = []
    best_smaller = float("-inf")  # best precision among strictly smaller sizes
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j].avg_size == ordered[i].avg_size:
            j += 1
        top = ordered[i].precision
        if top > best_smaller:
            frontier += [p for p in ordered[i:j] if p.precision == top]
            best_smaller = top
        i = j
    return frontier


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def points_csv(points, frontier=None) -> str:
    """Per-point table with an ``on_frontier`` column."""
    on = {id(p) for p in (pareto_frontier(points) if frontier is None else frontier)}
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rule_spec", "instances", "avg_size", "precision", "on_frontier"])
    for p in points:
        writer.writerow([str(p.spec), p.instance_count, _fmt(p.avg_size), _fmt(p.precision),
                         "true" if id(p) in on else "false"])
    return out.getvalue()


def frontier_csv(frontier) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rule_spec", "instances", "avg_size", "precision"])
    for p in frontier:
        writer.writerow([str(p.spec), p.instance_count, _fmt(p.avg_size), _fmt(p.precision)])
    return out.getvalue()
