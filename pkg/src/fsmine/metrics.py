"""Frequency thresholds and exact reference metrics.

The effective threshold interpolates between sigma/n and sigma under the
user slider and is evaluated in exact rational arithmetic, so boundary
cases floor correctly.  The exact maximum-independent-set and
minimum-image metrics are slow reference implementations used as oracles
and as user-selectable alternatives to the greedy sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import DataGraph, PatternGraph
from .matcher import DEFAULT_ENUM_LIMIT, Embedding, MetricResult, enumerate_all

__all__ = [
    "EnumerationLimitError",
    "MetricResult",
    "MiningConfig",
    "tau",
    "exact_mis",
    "mni",
    "fractional_score",
]

METRICS = ("mal", "mis", "mni", "fractional")


class EnumerationLimitError(RuntimeError):
    """The embedding enumeration exceeded the oracle limit."""


def as_fraction(value: float | int | str | Fraction) -> Fraction:
    """Exact rational from a user-supplied slider value.

    Floats go through their shortest repr, so a value typed as a decimal
    (0.3, 0.4, ...) recovers the intended rational exactly.
    """
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def tau(sigma: int, lam: float | int | str | Fraction, n: int) -> int:
    """Effective support threshold: floor(sigma*(1-1/n)*lam + sigma/n).

    Computed in exact rational arithmetic and clamped to at least 1.
    lam=1 gives sigma for every n; lam=0 gives max(1, sigma // n).
    """
    if n < 1:
        raise ValueError("pattern size must be >= 1")
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    frac = as_fraction(lam)
    if not 0 <= frac <= 1:
        raise ValueError("lambda must be in [0,1]")
    value = sigma * (1 - Fraction(1, n)) * frac + Fraction(sigma, n)
    return max(1, value.numerator // value.denominator)


def _embeddings_checked(
    g: DataGraph, p: PatternGraph, limit: int | None
) -> list[Embedding]:
    cap = limit if limit is not None else DEFAULT_ENUM_LIMIT
    embs = enumerate_all(g, p, cap)
    if len(embs) >= cap:
        raise EnumerationLimitError(f"more than {cap} embeddings")
    return embs


def exact_mis(g: DataGraph, p: PatternGraph, limit: int | None = None) -> int:
    """Exact maximum number of pairwise vertex-disjoint embeddings.

    Builds the conflict graph over all embeddings (edge when two share a
    data vertex) and solves maximum independent set by branch and bound
    with a greedy lower bound and a greedy clique-cover upper bound.
    """
    embs = _embeddings_checked(g, p, limit)
    if not embs:
        return 0
    vsets = [_vertex_mask(e) for e in embs]
    m = len(embs)
    conflict = [0] * m
    for i in range(m):
        vi = vsets[i]
        for j in range(i + 1, m):
            if vi & vsets[j]:
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i
    return _max_independent_set(conflict)


def _vertex_mask(emb: Embedding) -> int:
    mask = 0
    for v in emb:
        mask |= 1 << v
    return mask


def _max_independent_set(conflict: list[int]) -> int:
    m = len(conflict)
    full = (1 << m) - 1

    # greedy lower bound, fewest conflicts first
    best = 0
    cand = full
    for v in sorted(range(m), key=lambda v: conflict[v].bit_count()):
        if cand & (1 << v):
            best += 1
            cand &= ~(conflict[v] | (1 << v))

    def clique_cover_bound(cand: int) -> int:
        cliques: list[int] = []
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            for i, cl in enumerate(cliques):
                if cl & ~conflict[v] == 0:
                    cliques[i] = cl | (1 << v)
                    break
            else:
                cliques.append(1 << v)
        return len(cliques)

    def expand(cand: int, size: int) -> None:
        nonlocal best
        while cand:
            if size + clique_cover_bound(cand) <= best:
                return
            pick = -1
            pick_deg = -1
            rest = cand
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                deg = (conflict[v] & cand).bit_count()
                if deg > pick_deg:
                    pick, pick_deg = v, deg
            cand &= ~(1 << pick)
            expand(cand & ~conflict[pick], size + 1)
        if size > best:
            best = size

    expand(full, 0)
    return best


def mni(g: DataGraph, p: PatternGraph, limit: int | None = None) -> int:
    """Minimum over pattern vertices of the number of distinct images."""
    embs = _embeddings_checked(g, p, limit)
    if not embs:
        return 0
    images: list[set[int]] = [set() for _ in range(p.size)]
    for emb in embs:
        for v, dv in enumerate(emb):
            images[v].add(dv)
    return min(len(s) for s in images)


def fractional_score(g: DataGraph, p: PatternGraph, limit: int | None = None) -> Fraction:
    """Image counts refined by splitting each vertex's unit contribution.

    Every data vertex divides one unit equally among its neighbors of a
    given label; a pattern vertex's score for a neighbor label is the sum,
    over its candidate images, of the shares arriving from neighbors with
    that label, and the pattern score is the minimum over pattern vertices
    and their neighbor labels.  This is a comparison oracle calibrated on
    the worked example; it never drives mining.
    """
    embs = _embeddings_checked(g, p, limit)
    if not embs:
        return Fraction(0)
    images: list[set[int]] = [set() for _ in range(p.size)]
    for emb in embs:
        for v, dv in enumerate(emb):
            images[v].add(dv)

    n = g.vertex_count
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for w, _ in g.out_edges[u]:
            neighbors[u].add(w)
            neighbors[w].add(u)
    share_count: dict[tuple[int, int], int] = {}

    def shares(w: int, lab: int) -> int:
        key = (w, lab)
        got = share_count.get(key)
        if got is None:
            got = sum(1 for x in neighbors[w] if g.vertex_labels[x] == lab)
            share_count[key] = got
        return got

    p_und = [set() for _ in range(p.size)]
    for u, v, _ in p.edges:
        p_und[u].add(v)
        p_und[v].add(u)

    score: Fraction | None = None
    for v in range(p.size):
        nbr_labels = {p.vertex_labels[w] for w in p_und[v]}
        own = p.vertex_labels[v]
        for lab in sorted(nbr_labels):
            total = Fraction(0)
            for d in images[v]:
                for w in neighbors[d]:
                    if g.vertex_labels[w] == lab:
                        total += Fraction(1, shares(w, own))
            if score is None or total < score:
                score = total
    return score if score is not None else Fraction(0)


@dataclass
class MiningConfig:
    """Run parameters for the mining loop."""

    sigma: int
    lam: Fraction = Fraction(1)
    max_size: int = 10
    timeout: float | None = None
    metric: str = "mal"
    seed: int = 0
    num_vertex_labels: int = 1
    num_edge_labels: int = 1
    threads: int = 1
    max_steps_per_pattern: int | None = 10_000_000
    enum_limit: int = DEFAULT_ENUM_LIMIT

    def __post_init__(self) -> None:
        self.lam = as_fraction(self.lam)
        if self.sigma < 1:
            raise ValueError("support must be >= 1")
        if not 0 <= self.lam <= 1:
            raise ValueError("lambda must be in [0,1]")
        if self.max_size < 2:
            raise ValueError("max pattern size must be >= 2")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
