"""Backtracking subgraph-monomorphism search over the data graph.

``count_mal`` computes the greedy maximal-independent-set frequency of a
pattern: candidate roots are swept in ascending data-vertex id, at most one
embedding is accepted per root, and the vertices of accepted embeddings are
marked in a bitmap shared across the whole evaluation so later embeddings
cannot reuse them.  The sweep can stop early as soon as a target count is
reached.  ``enumerate_all`` lists every monomorphism (no independence
constraint) and backs the exact reference metrics.

An embedding is a tuple ``map`` of length n with ``map[p]`` the data vertex
assigned to pattern vertex ``p``; it is injective, label-preserving, and
maps every pattern edge onto a data edge with the same label and direction
(extra data edges are allowed).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import DataGraph, PatternGraph, is_connected

Embedding = tuple[int, ...]

DEFAULT_ENUM_LIMIT = 10_000_000


@dataclass
class MetricResult:
    """Outcome of one pattern-frequency evaluation."""

    count: int | Fraction
    tau: int
    frequent: bool
    early_terminated: bool = False
    embeddings: list[Embedding] | None = None


def matching_order(p: PatternGraph, g: DataGraph) -> tuple[int, ...]:
    """Deterministic search order over pattern vertices.

    Starts at the vertex whose label is rarest in the data graph (ties:
    higher total pattern degree, then lower id); every later vertex is
    adjacent in either direction to an earlier one.
    """
    if p.size == 0:
        return ()
    if not is_connected(p):
        raise ValueError("pattern must be connected")
    out, inn = p.out_adj(), p.in_adj()

    def rank(v: int) -> tuple[int, int, int]:
        rarity = len(g.vertices_with_label(p.vertex_labels[v]))
        degree = len(out[v]) + len(inn[v])
        return (rarity, -degree, v)

    order = [min(range(p.size), key=rank)]
    chosen = set(order)
    while len(order) < p.size:
        frontier = [
            v
            for v in range(p.size)
            if v not in chosen
            and (chosen & (set(out[v]) | set(inn[v])))
        ]
        nxt = min(frontier, key=rank)
        order.append(nxt)
        chosen.add(nxt)
    return tuple(order)


def _extension_plan(
    p: PatternGraph, order: tuple[int, ...]
) -> list[list[tuple[int, bool, int]]]:
    """Per-position constraints (earlier_position, pattern_edge_is_outgoing, label).

    ``is_outgoing`` means the pattern edge goes from the vertex at this
    position to the earlier one.  The first constraint of each position is
    used to generate candidates, the rest as filters.
    """
    pos_of = {v: i for i, v in enumerate(order)}
    out = p.out_adj()
    plan: list[list[tuple[int, bool, int]]] = [[] for _ in order]
    for i, v in enumerate(order):
        cons: list[tuple[int, bool, int]] = []
        for w, lab in sorted(out[v].items()):
            if pos_of[w] < i:
                cons.append((pos_of[w], True, lab))
        for w in range(p.size):
            lab = out[w].get(v)
            if lab is not None and pos_of[w] < i:
                cons.append((pos_of[w], False, lab))
        cons.sort()
        plan[i] = cons
    return plan


class _Search:
    """One pattern evaluation; owns the shared used-vertex bitmap."""

    __slots__ = (
        "g", "p", "order", "plan", "labels", "used", "mapping",
        "in_map", "steps", "max_steps", "budget_hit",
    )

    def __init__(self, g: DataGraph, p: PatternGraph, max_steps: int | None) -> None:
        self.g = g
        self.p = p
        self.order = matching_order(p, g)
        self.plan = _extension_plan(p, self.order)
        self.labels = [p.vertex_labels[v] for v in self.order]
        self.used = bytearray(g.vertex_count)
        self.mapping = [-1] * p.size
        self.in_map = bytearray(g.vertex_count)
        self.steps = 0
        self.max_steps = max_steps
        self.budget_hit = False

    def _candidates(self, pos: int) -> list[tuple[int, int]]:
        qpos, is_out, lab = self.plan[pos][0]
        base = self.mapping[qpos]
        # pattern edge v->q needs data edge cand->base, so scan in-neighbors
        rows = self.g.in_edges if is_out else self.g.out_edges
        return [(w, elab) for w, elab in rows[base] if elab == lab]

    def _feasible(self, pos: int, cand: int) -> bool:
        g = self.g
        for qpos, is_out, lab in self.plan[pos][1:]:
            other = self.mapping[qpos]
            have = g.edge_label(cand, other) if is_out else g.edge_label(other, cand)
            if have != lab:
                return False
        return True

    def _embedding(self) -> Embedding:
        emb = [-1] * self.p.size
        for i, v in enumerate(self.order):
            emb[v] = self.mapping[i]
        return tuple(emb)

    def extend_one(self, pos: int, skip_used: bool) -> bool:
        """Depth-first extension that stops at the first full embedding."""
        if pos == self.p.size:
            return True
        for cand, _ in self._candidates(pos):
            if self.max_steps is not None:
                self.steps += 1
                if self.steps > self.max_steps:
                    self.budget_hit = True
                    return False
            if self.in_map[cand] or (skip_used and self.used[cand]):
                continue
            if self.g.vertex_labels[cand] != self.labels[pos]:
                continue
            if not self._feasible(pos, cand):
                continue
            self.mapping[pos] = cand
            self.in_map[cand] = 1
            found = self.extend_one(pos + 1, skip_used)
            self.in_map[cand] = 0
            if found:
                return True
            if self.budget_hit:
                return False
        self.mapping[pos] = -1
        return False

    def extend_all(self, pos: int, sink: list[Embedding], limit: int) -> bool:
        """Collect every extension; returns False once the limit is hit."""
        if pos == self.p.size:
            sink.append(self._embedding())
            return len(sink) < limit
        for cand, _ in self._candidates(pos):
            if self.in_map[cand]:
                continue
            if self.g.vertex_labels[cand] != self.labels[pos]:
                continue
            if not self._feasible(pos, cand):
                continue
            self.mapping[pos] = cand
            self.in_map[cand] = 1
            more = self.extend_all(pos + 1, sink, limit)
            self.in_map[cand] = 0
            if not more:
                return False
        self.mapping[pos] = -1
        return True


def count_mal(
    g: DataGraph,
    p: PatternGraph,
    tau: int,
    collect: bool = False,
    early_stop: bool = True,
    max_steps: int | None = None,
) -> MetricResult:
    """Greedy maximal-independent-set count of ``p`` in ``g``.

    Sweeps label-compatible roots in ascending id; for each root still
    outside the used bitmap a single embedding is searched, its vertices
    are marked used and the count advances.  With ``early_stop`` the sweep
    returns as soon as ``tau`` is reached; otherwise it runs to maximality,
    which may exceed ``tau``.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if p.size == 0:
        raise ValueError("empty pattern")
    search = _Search(g, p, max_steps)
    collected: list[Embedding] = []
    count = 0
    early = False
    for root in g.vertices_with_label(search.labels[0]):
        if search.used[root]:
            continue
        search.mapping[0] = root
        search.in_map[root] = 1
        found = search.extend_one(1, skip_used=True)
        search.in_map[root] = 0
        if found:
            emb = search._embedding()
            for dv in emb:
                search.used[dv] = 1
            count += 1
            if collect:
                collected.append(emb)
            if early_stop and count >= tau:
                early = True
                break
        if search.budget_hit:
            early = True
            break
    return MetricResult(
        count=count,
        tau=tau,
        frequent=count >= tau,
        early_terminated=early,
        embeddings=collected if collect else None,
    )


def enumerate_all(
    g: DataGraph, p: PatternGraph, limit: int | None = DEFAULT_ENUM_LIMIT
) -> list[Embedding]:
    """Every monomorphism of ``p`` into ``g`` in deterministic order.

    Automorphic images are distinct embeddings and are all reported.
    Truncates at ``limit`` when given.
    """
    if p.size == 0:
        return []
    if p.size > g.vertex_count:
        return []
    cap = limit if limit is not None else DEFAULT_ENUM_LIMIT
    search = _Search(g, p, None)
    sink: list[Embedding] = []
    for root in g.vertices_with_label(search.labels[0]):
        search.mapping[0] = root
        search.in_map[root] = 1
        more = search.extend_all(1, sink, cap)
        search.in_map[root] = 0
        if not more:
            break
    return sink


def is_valid_embedding(g: DataGraph, p: PatternGraph, emb: Embedding) -> bool:
    """Check injectivity, label preservation and edge preservation."""
    if len(emb) != p.size or len(set(emb)) != p.size:
        return False
    for v in range(p.size):
        if g.vertex_labels[emb[v]] != p.vertex_labels[v]:
            return False
    for u, v, lab in p.edges:
        if g.edge_label(emb[u], emb[v]) != lab:
            return False
    return True
