"""Synthetic elections with a known best candidate.

Every candidate has an objective quality drawn from a normal distribution
with mean 0.75 and standard deviation 0.2, truncated to ``[0, 1]``. Under the
*noise* model each voter approves candidate ``c`` with probability
``(1 - lam) * q_c + 0.5 * lam``. Under the *bias* model every candidate is
disadvantaged with probability 1/2 (the best candidate always is), and the
first ``floor(n * gamma)`` voters approve disadvantaged candidates with
probability ``0.5 * q_c`` only.

Seeds
-----
Instance ``i`` of a model is generated from
``numpy.random.default_rng([base_seed, model_id, i])``, the same stream at
every grid point (common random numbers). Neighbouring grid points then
differ only by the parameter, which keeps the sampled trends smooth. With
``common_random_numbers=False`` the grid index is mixed in as well:
``[base_seed, model_id, grid_index, i]``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .core import Election, ParameterError, SortedScores, sort_scores
from .rules import RuleSpec, apply_rule, parse_rule_spec

QUALITY_MEAN = 0.75
QUALITY_SD = 0.2
MODELS = {"noise": 0, "bias": 1}


@dataclass(frozen=True)
class QualityProfile:
    qualities: tuple[float, ...]

    @property
    def true_winner(self) -> int:
        """Index of the best candidate (smallest index on ties)."""
        return int(np.argmax(self.qualities))


@dataclass(frozen=True)
class NoiseConfig:
    lam: float = 0.0
    n_voters: int = 100
    m_candidates: int = 30
    quality_mean: float = QUALITY_MEAN
    quality_sd: float = QUALITY_SD

    def __post_init__(self):
        if not 0 <= self.lam <= 1:
            raise ParameterError(f"lambda: must lie in [0, 1], got {self.lam}")
        _check_population(self)


@dataclass(frozen=True)
class BiasConfig:
    gamma: float = 0.0
    n_voters: int = 100
    m_candidates: int = 30
    quality_mean: float = QUALITY_MEAN
    quality_sd: float = QUALITY_SD

    def __post_init__(self):
        if not 0 <= self.gamma <= 1:
            raise ParameterError(f"gamma: must lie in [0, 1], got {self.gamma}")
        _check_population(self)

    @property
    def n_biased(self) -> int:
        """``floor(n * gamma)``, computed on the decimal value of gamma."""
        return math.floor(Fraction(repr(float(self.gamma))) * self.n_voters)


def _check_population(cfg):
    if cfg.n_voters < 1 or cfg.m_candidates < 1:
        raise ParameterError("population: need at least one voter and one candidate")


@dataclass(frozen=True)
class InstanceRecord:
    """An election with the candidate it should ideally shortlist."""

    election: Election
    true_winner: int
    provenance: tuple = ()
    disadvantaged: frozenset[int] | None = field(default=None, compare=False)
    qualities: tuple[float, ...] | None = field(default=None, compare=False)

    @cached_property
    def sorted_scores(self) -> SortedScores:
        counts = [0] * self.election.m
        for ballot in self.election.ballots:
            for c in ballot:
                counts[c] += 1
        return sort_scores(counts)


def sample_quality_profile(m: int, rng: np.random.Generator,
                           mean: float = QUALITY_MEAN, sd: float = QUALITY_SD) -> QualityProfile:
    """``m`` draws from Normal(mean, sd), each redrawn until it lands in ``[0, 1]``."""
    accepted: list[float] = []
    while len(accepted) < m:
        draws = rng.normal(mean, sd, size=m - len(accepted))
        accepted.extend(draws[(draws >= 0.0) & (draws <= 1.0)].tolist())
    return QualityProfile(tuple(accepted))


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _profile(cfg, rng, profile):
    if profile is None:
        return sample_quality_profile(cfg.m_candidates, rng, cfg.quality_mean, cfg.quality_sd)
    if len(profile.qualities) != cfg.m_candidates:
        raise ParameterError(
            f"profile: {len(profile.qualities)} qualities for {cfg.m_candidates} candidates")
    return profile


def gen_noise_instance(cfg: NoiseConfig, seed, profile: QualityProfile | None = None) -> InstanceRecord:
    """One noise-model election; ``profile`` fixes the qualities instead of sampling them."""
    rng = _rng(seed)
    profile = _profile(cfg, rng, profile)
    q = np.array(profile.qualities)
    p = (1 - cfg.lam) * q + 0.5 * cfg.lam
    approvals = rng.random((cfg.n_voters, cfg.m_candidates)) < p
    return InstanceRecord(Election.from_matrix(approvals), profile.true_winner,
                          ("noise", cfg.lam, _seed_tag(seed)), qualities=profile.qualities)


def gen_bias_instance(cfg: BiasConfig, seed, profile: QualityProfile | None = None) -> InstanceRecord:
    """One bias-model election; ``profile`` fixes the qualities instead of sampling them."""
    rng = _rng(seed)
    profile = _profile(cfg, rng, profile)
    q = np.array(profile.qualities)
    disadvantaged = rng.random(cfg.m_candidates) < 0.5
    disadvantaged[profile.true_winner] = True
    u = rng.random((cfg.n_voters, cfg.m_candidates))
    p = np.tile(q, (cfg.n_voters, 1))
    p[: cfg.n_biased, disadvantaged] *= 0.5
    return InstanceRecord(Election.from_matrix(u < p), profile.true_winner,
                          ("bias", cfg.gamma, _seed_tag(seed)),
                          frozenset(np.flatnonzero(disadvantaged).tolist()), profile.qualities)


def _seed_tag(seed):
    if isinstance(seed, np.random.Generator):
        return None
    return tuple(seed) if isinstance(seed, (list, tuple)) else seed


def instance_seed(base_seed: int, model: str, grid_index: int, instance: int,
                  common_random_numbers: bool = True) -> list[int]:
    if common_random_numbers:
        return [base_seed, MODELS[model], instance]
    return [base_seed, MODELS[model], grid_index, instance]


def generate_instance(model: str, param: float, seed, n: int = 100, m: int = 30) -> InstanceRecord:
    if model == "noise":
        return gen_noise_instance(NoiseConfig(param, n, m), seed)
    if model == "bias":
        return gen_bias_instance(BiasConfig(param, n, m), seed)
    raise ParameterError(f"model: expected noise or bias, got {model!r}")


def default_lambda_grid() -> list[float]:
    return [round(i * 0.05, 10) for i in range(21)]


EXPERIMENT1_RULES = (
    "av", "fgap:k=5", "threshold:alpha=0.5", "isp:s=4", "firstmajority",
    "topfgap:s=10,k=5", "largestgap", "qncsa:q=0.5",
)


@dataclass(frozen=True)
class ExperimentRow:
    rule: str
    model: str
    param: float
    instances: int
    precision: float | None
    avg_size: float | None


def _grid_point(args):
    rules, model, gi, param, count, base_seed, n, m, crn = args
    hits = [0] * len(rules)
    sizes = [0] * len(rules)
    for i in range(count):
        rec = generate_instance(model, param, instance_seed(base_seed, model, gi, i, crn), n, m)
        ss = rec.sorted_scores
        for r, spec in enumerate(rules):
            w = apply_rule(spec, ss, n).members
            hits[r] += rec.true_winner in w
            sizes[r] += len(w)
    return [
        ExperimentRow(str(spec), model, param, count,
                      hits[r] / count if count else None,
                      sizes[r] / count if count else None)
        for r, spec in enumerate(rules)
    ]


def run_experiment1(rules, model: str = "noise", grid=None, instances_per_point: int = 1000,
                    base_seed: int = 0, n: int = 100, m: int = 30, jobs: int = 1,
                    common_random_numbers: bool = True) -> list[ExperimentRow]:
    """Precision and average size of each rule at each grid point.

    Parameters
    ----------
    rules : list of RuleSpec or str
    model : {"noise", "bias"}
    grid : list of float
        Values of lambda (noise) or gamma (bias); defaults to 0, 0.05, ..., 1.
    instances_per_point : int
        Instances generated per grid point; 0 gives rows with no metrics.
    base_seed : int
    jobs : int
        Worker processes; the output does not depend on it.

    Returns
    -------
    list of ExperimentRow
        Grouped by grid point, rules in the given order.
    """
    if model not in MODELS:
        raise ParameterError(f"model: expected noise or bias, got {model!r}")
    if instances_per_point < 0:
        raise ParameterError("instances: must be non-negative")
    rules = [parse_rule_spec(r) if isinstance(r, str) else r for r in rules]
    grid = default_lambda_grid() if grid is None else list(grid)
    tasks = [(rules, model, gi, float(p), instances_per_point, base_seed, n, m, common_random_numbers)
             for gi, p in enumerate(grid)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(_grid_point, tasks))
    else:
        chunks = [_grid_point(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def _fmt(x) -> str:
    return "" if x is None else f"{x:.6f}"


def experiment_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rule_spec", "model", "param", "instances", "precision", "avg_size"])
    for r in rows:
        writer.writerow([r.rule, r.model, f"{r.param:g}", r.instances, _fmt(r.precision), _fmt(r.avg_size)])
    return out.getvalue()
