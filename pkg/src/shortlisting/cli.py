"""Command-line interface.

Subcommands: ``winners``, ``axioms``, ``simulate``, ``sweep``, ``cluster``
and ``hugo``. Exit status 0 on success, 1 on data errors (unreadable or
malformed input, failed expectations), 2 on usage errors (unknown flags,
malformed rule specs or grids).

Rule lists (``--rules``) are comma separated; commas inside a rule's own
parameter list are recognised because every rule starts with a family name,
e.g. ``--rules av,topfgap:s=3,k=2,sp:order=1,6,0,...``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import axioms as ax
from .clustering import LinkageConfig, linkage_cluster
from .core import ParameterError, approval_scores, sort_scores
from .dataio import (
    BallotFormatError,
    DatasetError,
    e_pluribus_hugo,
    load_hugo_dataset,
    parse_ballot_file,
    winner_position_histogram,
    with_winner,
)
from .metrics import average_size, frontier_csv, pareto_frontier, points_csv, precision, sweep
from .rules import FAMILIES, apply_rule, parse_rule_spec
from .synthetic import experiment_csv, generate_instance, run_experiment1


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def split_rules(text: str) -> list[str]:
    """Split a comma-separated rule list, keeping each rule's parameters together."""
    specs: list[str] = []
    for token in text.split(","):
        head = token.split(":", 1)[0].strip().lower()
        if specs and (head not in FAMILIES or "=" in token.split(":", 1)[0]):
            specs[-1] += "," + token
        else:
            specs.append(token.strip())
    return [s for s in specs if s]


def parse_rules(values) -> list:
    texts = []
    for v in values or ():
        texts += split_rules(v)
    try:
        return [parse_rule_spec(t) for t in texts]
    except ParameterError as exc:
        raise UsageError(f"bad rule spec: {exc}") from None


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (both ends inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise UsageError(f"grid step must be positive: {text!r}")
            count = int((stop - start) / step + 1e-12) + 1 if stop >= start else 0
            values = [round(start + i * step, 12) for i in range(count)]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None
    if not values:
        raise UsageError(f"grid {text!r} has no points")
    return values


def write_output(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_ballots(path):
    try:
        return parse_ballot_file(path)
    except (OSError, BallotFormatError) as exc:
        raise DataError(str(exc)) from None


def _label_list(e, members, ss) -> str:
    return "; ".join(e.label(c) for c in ss.order if c in members)


def cmd_winners(args) -> int:
    bf = _load_ballots(args.ballots)
    e = bf.election
    ss = sort_scores(approval_scores(e))
    for spec in parse_rules(args.rule):
        try:
            w = apply_rule(spec, ss, e.n)
        except ParameterError as exc:
            raise UsageError(f"{spec}: {exc}") from None
        print(f"{spec}\t{len(w)}\t{_label_list(e, w.members, ss)}")
    return 0


def cmd_axioms(args) -> int:
    if args.expect_table1 and (args.rule or args.axiom):
        raise UsageError("--expect-table1 audits the fixed table; drop --rule/--axiom")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.rule:
        rows = tuple((str(s), str(s), args.stability_l) for s in parse_rules(args.rule))
    else:
        rows = ax.TABLE1_ROWS
    try:
        columns = [ax.AxiomId.parse(a) for a in args.axiom] if args.axiom else None
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    if columns is None:
        results = ax.table1_audit(args.trials, args.seed, args.jobs, rows)
    else:
        results = {}
        for label, rule, _ in rows:
            for axiom in columns:
                results[label, str(axiom)] = ax.check_axiom(
                    rule, axiom, args.trials, args.seed, seeds=ax.known_counterexamples())
    write_output(ax.audit_csv(results), args.out)
    if args.witnesses:
        write_output(ax.witness_dump(results), args.witnesses)
    if args.expect_table1:
        bad = ax.table1_mismatches(results)
        for label, col in bad:
            print(f"mismatch: {label} / {col}", file=sys.stderr)
        return 1 if bad else 0
    return 0


def cmd_simulate(args) -> int:
    rules = parse_rules(args.rules)
    if not rules:
        raise UsageError("--rules is empty")
    grid = parse_grid(args.grid)
    if args.instances < 0:
        raise UsageError("--instances must be non-negative")
    try:
        rows = run_experiment1(rules, args.model, grid, args.instances, args.seed,
                               n=args.voters, m=args.candidates, jobs=args.jobs)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    write_output(experiment_csv(rows), args.out)
    return 0


def _load_instances(args):
    source = args.instances_from
    if source in ("noise", "bias"):
        if args.seed is None:
            raise UsageError("--seed is required for generated instances")
        if args.instances < 1:
            raise UsageError("--instances must be positive")
        return [generate_instance(source, args.param, [args.seed, i], args.voters, args.candidates)
                for i in range(args.instances)]
    try:
        return with_winner(load_hugo_dataset(source))
    except DatasetError as exc:
        raise DataError(str(exc)) from None


def cmd_sweep(args) -> int:
    instances = _load_instances(args)
    if not instances:
        raise DataError("no instances with a known winner")
    grid = parse_rules(args.rules) if args.rules else None
    points = sweep(instances, grid, jobs=args.jobs)
    frontier = pareto_frontier(points)
    write_output(points_csv(points, frontier), args.out)
    if args.frontier:
        write_output(frontier_csv(frontier), args.frontier)
    return 0


def cmd_cluster(args) -> int:
    bf = _load_ballots(args.ballots)
    e = bf.election
    text = args.config.strip()
    if text.lower().startswith("cluster:"):
        text = text.split(":", 1)[1]
    try:
        params = dict(p.split("=", 1) for p in text.split(","))
        cfg = LinkageConfig.from_params({k.strip().lower(): v.strip() for k, v in params.items()})
    except (ValueError, ParameterError) as exc:
        raise UsageError(f"bad clustering config {args.config!r}: {exc}") from None
    ss = sort_scores(approval_scores(e))
    partition = linkage_cluster(ss, cfg)
    for i, cl in enumerate(partition.clusters, start=1):
        print(f"cluster {i}\t[{cl.low}, {cl.high}]\t{_label_list(e, cl.members, ss)}")
    w = apply_rule(parse_rule_spec(f"cluster:{cfg}"), ss, e.n)
    print(f"winners\t{len(w)}\t{_label_list(e, w.members, ss)}")
    return 0


def cmd_hugo(args) -> int:
    try:
        elections = load_hugo_dataset(args.data)
    except DatasetError as exc:
        raise DataError(str(exc)) from None
    if not elections:
        raise DataError(f"{args.data}: no <year>/<category>.ballots files")
    scored = with_winner(elections)
    print(f"elections\t{len(elections)}\twith_winner\t{len(scored)}")
    for spec in parse_rules(args.rule):
        outputs = [apply_rule(spec, h.sorted_scores, h.election.n).members for h in scored]
        if scored:
            prec = precision(outputs, [h.actual_winner for h in scored])
            size = average_size(outputs)
            print(f"{spec}\tavg_size\t{size:.3f}\tprecision\t{prec:.3f}")
    for pos, count in winner_position_histogram(scored).items():
        print(f"position\t{pos}\t{count}")
    if args.eph:
        for h in elections:
            ss = h.sorted_scores
            kept = e_pluribus_hugo(h.election, args.target)
            print(f"eph\t{h.year}/{h.category}\t{_label_list(h.election, kept, ss)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shortlisting", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("winners", help="winner sets of rules on a ballot file")
    p.add_argument("--ballots", required=True)
    p.add_argument("--rule", action="append", required=True, help="rule spec (repeatable, comma list)")
    p.set_defaults(func=cmd_winners)

    p = sub.add_parser("axioms", help="randomized axiom audit")
    p.add_argument("--rule", action="append", help="rules to audit (default: the axiom table rows)")
    p.add_argument("--axiom", action="append", help="axiom id, e.g. unanimity or stability:l=2")
    p.add_argument("--stability-l", type=int, default=2, help="l of the stability column for --rule rows")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV matrix (default stdout)")
    p.add_argument("--witnesses", help="witness dump file")
    p.add_argument("--expect-table1", action="store_true",
                   help="exit 1 unless every cell matches the expected table")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("simulate", help="noise/bias experiment")
    p.add_argument("--model", choices=("noise", "bias"), required=True)
    p.add_argument("--rules", action="append", required=True)
    p.add_argument("--grid", default="0:1:0.05")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--voters", type=int, default=100)
    p.add_argument("--candidates", type=int, default=30)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="parameter sweep and Pareto frontier")
    p.add_argument("--instances-from", required=True, help="data directory, or noise / bias")
    p.add_argument("--param", type=float, default=0.0, help="lambda or gamma for generated instances")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--voters", type=int, default=100)
    p.add_argument("--candidates", type=int, default=30)
    p.add_argument("--rules", action="append", help="rule grid (default: the full sweep grid)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--frontier")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cluster", help="linkage clustering of approval scores")
    p.add_argument("--ballots", required=True)
    p.add_argument("--config", required=True, help="e.g. dist=single,beta=2")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("hugo", help="evaluate rules on a Hugo-style data set")
    p.add_argument("--data", required=True)
    p.add_argument("--rule", action="append", default=[])
    p.add_argument("--eph", action="store_true", help="also report the elimination rule's shortlist")
    p.add_argument("--target", type=int, default=6)
    p.set_defaults(func=cmd_hugo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
