"""Level-synchronous mining loop.

Seeds with the 2-vertex patterns of the data graph, evaluates each level's
candidates against the level threshold, merges the survivors into the next
level, and stops when candidates run out, the size cap or vertex budget is
hit, or the timeout fires.  Timeouts truncate the report; they never lose
the levels already finished.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .canonical import canonical_key
from .graphs import DataGraph, PatternGraph
from .generation import generate_new_patterns, seed_size2, size2_to_size3
from .matcher import MetricResult, count_mal
from .metrics import MiningConfig, exact_mis, fractional_score, mni, tau


@dataclass
class LevelStats:
    size: int
    tau: int
    generated: int
    searched: int
    frequent: int
    elapsed_ms: float


@dataclass
class FrequentPattern:
    pattern: PatternGraph
    result: MetricResult

    @property
    def parents(self) -> tuple[bytes, ...]:
        return self.pattern.provenance


@dataclass
class MiningReport:
    frequent: dict[int, list[FrequentPattern]] = field(default_factory=dict)
    stats: list[LevelStats] = field(default_factory=list)
    termination: str = "exhausted"

    def patterns(self, size: int | None = None) -> list[PatternGraph]:
        if size is not None:
            return [fp.pattern for fp in self.frequent.get(size, [])]
        return [fp.pattern for level in self.frequent.values() for fp in level]

    def frequent_keys(self, size: int | None = None) -> set[bytes]:
        return {canonical_key(p) for p in self.patterns(size)}

    @property
    def total_frequent(self) -> int:
        return sum(len(v) for v in self.frequent.values())


def size_bound(g: DataGraph, sigma: int, lam: Fraction | float | str, n: int) -> bool:
    """Whether size-n patterns can still fit: n disjoint-embedding budgets
    of tau vertices each must not exceed the data graph."""
    return n * tau(sigma, lam, n) <= g.vertex_count


def _evaluate(g: DataGraph, p: PatternGraph, t: int, cfg: MiningConfig) -> MetricResult:
    if cfg.metric == "mal":
        return count_mal(g, p, t, early_stop=True, max_steps=cfg.max_steps_per_pattern)
    if cfg.metric == "mis":
        count: int | Fraction = exact_mis(g, p, cfg.enum_limit)
    elif cfg.metric == "mni":
        count = mni(g, p, cfg.enum_limit)
    else:
        count = fractional_score(g, p, cfg.enum_limit)
    return MetricResult(count=count, tau=t, frequent=count >= t)


def mine(
    g: DataGraph,
    cfg: MiningConfig,
    candidate_sink: Callable[[int, list[PatternGraph]], None] | None = None,
) -> MiningReport:
    """Run the mining loop and report per-level frequent patterns.

    Candidate lists are canonically sorted, so single-threaded and pooled
    runs emit identical reports.
    """
    report = MiningReport()
    started = time.monotonic()
    deadline = started + cfg.timeout if cfg.timeout is not None else None
    candidates = seed_size2(g)
    size = 2
    pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None
    try:
        while True:
            if not candidates:
                report.termination = "exhausted"
                break
            # the vertex budget only binds metrics that forbid overlap
            budget_bound = cfg.metric in ("mal", "mis")
            if size > cfg.max_size or (
                budget_bound and not size_bound(g, cfg.sigma, cfg.lam, size)
            ):
                report.termination = "size_bound"
                break
            if candidate_sink is not None:
                candidate_sink(size, candidates)
            t = tau(cfg.sigma, cfg.lam, size)
            level_started = time.monotonic()
            searched = 0
            found: list[FrequentPattern] = []
            timed_out = False
            chunk = max(1, cfg.threads) * 8
            for base in range(0, len(candidates), chunk):
                if deadline is not None and time.monotonic() > deadline:
                    timed_out = True
                    break
                batch = candidates[base : base + chunk]
                if pool is not None:
                    results = list(pool.map(lambda p: _evaluate(g, p, t, cfg), batch))
                else:
                    results = [_evaluate(g, p, t, cfg) for p in batch]
                for p, res in zip(batch, results):
                    searched += 1
                    if res.frequent:
                        found.append(FrequentPattern(p, res))
            report.frequent[size] = found
            report.stats.append(
                LevelStats(
                    size=size,
                    tau=t,
                    generated=len(candidates),
                    searched=searched,
                    frequent=len(found),
                    elapsed_ms=(time.monotonic() - level_started) * 1000.0,
                )
            )
            if timed_out:
                report.termination = "timeout"
                break
            if size == cfg.max_size:
                report.termination = "size_bound"
                break
            survivors = [fp.pattern for fp in found]
            if size == 2:
                candidates = size2_to_size3(survivors, g)
            else:
                candidates = generate_new_patterns(survivors)
            size += 1
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    return report
