"""Canonical forms, isomorphism tests and automorphism groups for
small pattern graphs.

The canonical encoding of a graph is the lexicographically smallest
serialization over all vertex orders that respect an isomorphism-invariant
partition of the vertices: the vertex count as big-endian u16, vertex
labels as u16 in canonical order, the adjacency matrix as row-major
presence bits, then one u16 per present edge (row-major) carrying its
label.  Two graphs are isomorphic exactly when their encodings are
byte-equal; a 64-bit BLAKE2 digest of the encoding serves as a fast
pre-filter.

Vertices are first partitioned by iterated refinement on
(label, degrees, labeled neighborhood colors); the minimal serialization
is then found by a guided search that only branches inside partition
cells and only follows locally minimal extensions.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .graphs import PatternGraph

PATTERN_SIZE_CAP = 10


class SizeCapExceeded(ValueError):
    """Graph is larger than the configured pattern-size cap."""


@dataclass(frozen=True)
class CanonicalForm:
    encoding: bytes
    hash: int
    canon_perm: tuple[int, ...]  # canon_perm[v] = position of v in the encoding


def _refined_colors(labels: tuple[int, ...], edges: tuple[tuple[int, int, int], ...]) -> list[int]:
    """Iso-invariant vertex colors from iterated neighborhood refinement."""
    n = len(labels)
    out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    inn: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, lab in edges:
        out[u].append((v, lab))
        inn[v].append((u, lab))
    colors = _rank([(labels[v], len(out[v]), len(inn[v])) for v in range(n)])
    while True:
        keys = [
            (
                colors[v],
                tuple(sorted((lab, colors[w]) for w, lab in out[v])),
                tuple(sorted((lab, colors[w]) for w, lab in inn[v])),
            )
            for v in range(n)
        ]
        new = _rank(keys)
        if new == colors:
            return colors
        colors = new


def _rank(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _swap_is_automorphism(
    u: int,
    v: int,
    labels: tuple[int, ...],
    out: list[dict[int, int]],
) -> bool:
    if labels[u] != labels[v]:
        return False
    if out[u].get(v) != out[v].get(u):
        return False
    for w in range(len(labels)):
        if w == u or w == v:
            continue
        if out[u].get(w) != out[v].get(w) or out[w].get(u) != out[w].get(v):
            return False
    return True


def _canonical_order(labels: tuple[int, ...], edges: tuple[tuple[int, int, int], ...]) -> list[int]:
    """Vertex order achieving the minimal serialization.

    Positions follow refinement cells.  At each node only vertices whose
    adjacency step to the already-placed prefix is lexicographically
    minimal are explored (the prefix is shared, so a larger step can never
    lead to a smaller order); tied vertices whose transposition is a full
    automorphism give identical completions and are explored once.  The
    remaining tie branches are searched with pruning against the best
    completed step sequence, whose order is returned.
    """
    n = len(labels)
    if n == 0:
        return []
    out: list[dict[int, int]] = [{} for _ in range(n)]
    for u, v, lab in edges:
        out[u][v] = lab
    colors = _refined_colors(labels, edges)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    cell_seq: list[list[int]] = [cells[c] for c in sorted(cells)]

    placed: list[int] = []
    steps: list[tuple[int, ...]] = []
    best_steps: list[tuple[int, ...]] | None = None
    best_order: list[int] | None = None

    def step_vector(c: int) -> tuple[int, ...]:
        vec: list[int] = []
        for w in placed:
            e1 = out[c].get(w)
            e2 = out[w].get(c)
            vec.append(0 if e1 is None else e1 + 1)
            vec.append(0 if e2 is None else e2 + 1)
        return tuple(vec)

    def descend(cell_idx: int, remaining: list[int]) -> None:
        nonlocal best_steps, best_order
        if not remaining:
            nxt = cell_idx + 1
            if nxt == len(cell_seq):
                if best_steps is None or steps < best_steps:
                    best_steps = list(steps)
                    best_order = list(placed)
            else:
                descend(nxt, list(cell_seq[nxt]))
            return
        p = len(placed)
        tight = False
        if best_steps is not None:
            prefix = best_steps[:p]
            if steps > prefix:
                return
            tight = steps == prefix
        vec_of = {c: step_vector(c) for c in remaining}
        m = min(vec_of.values())
        if tight and best_steps is not None and m > best_steps[p]:
            return
        ties = [c for c in remaining if vec_of[c] == m]
        pruned: list[int] = []
        for c in ties:
            if any(_swap_is_automorphism(c, k, labels, out) for k in pruned):
                continue
            pruned.append(c)
        for c in pruned:
            placed.append(c)
            steps.append(m)
            descend(cell_idx, [w for w in remaining if w != c])
            placed.pop()
            steps.pop()

    descend(0, list(cell_seq[0]))
    assert best_order is not None
    return best_order


def _serialize(labels: tuple[int, ...], edges: tuple[tuple[int, int, int], ...], order: list[int]) -> bytes:
    n = len(labels)
    out: list[dict[int, int]] = [{} for _ in range(n)]
    for u, v, lab in edges:
        out[u][v] = lab
    blob = bytearray(n.to_bytes(2, "big"))
    for v in order:
        blob += labels[v].to_bytes(2, "big")
    bits = bytearray((n * n + 7) // 8)
    elabs = bytearray()
    idx = 0
    for i in range(n):
        row = out[order[i]]
        for j in range(n):
            lab = row.get(order[j])
            if lab is not None:
                bits[idx >> 3] |= 0x80 >> (idx & 7)
                elabs += lab.to_bytes(2, "big")
            idx += 1
    return bytes(blob) + bytes(bits) + bytes(elabs)


@lru_cache(maxsize=1 << 16)
def _canonical_cached(
    labels: tuple[int, ...], edges: tuple[tuple[int, int, int], ...]
) -> CanonicalForm:
    order = _canonical_order(labels, edges)
    encoding = _serialize(labels, edges, order)
    digest = hashlib.blake2b(encoding, digest_size=8).digest()
    perm = [0] * len(labels)
    for pos, v in enumerate(order):
        perm[v] = pos
    return CanonicalForm(encoding, int.from_bytes(digest, "big"), tuple(perm))


def canonical_form(p: PatternGraph, cap: int = PATTERN_SIZE_CAP) -> CanonicalForm:
    """Canonical form of a pattern, cached on the instance."""
    if p.size > cap:
        raise SizeCapExceeded(f"graph has {p.size} vertices, cap is {cap}")
    if p._canon is None:
        p._canon = _canonical_cached(p.vertex_labels, p.edges)
    return p._canon


def canonical_key(p: PatternGraph, cap: int = PATTERN_SIZE_CAP) -> bytes:
    return canonical_form(p, cap).encoding


def are_isomorphic(g1: PatternGraph, g2: PatternGraph, cap: int = PATTERN_SIZE_CAP) -> bool:
    f1 = canonical_form(g1, cap)
    f2 = canonical_form(g2, cap)
    if f1.hash != f2.hash:
        return False
    return f1.encoding == f2.encoding


def automorphism_group(p: PatternGraph, cap: int = PATTERN_SIZE_CAP) -> list[tuple[int, ...]]:
    """The full automorphism group, lexicographically sorted.

    Includes the identity.  Images are searched only inside refinement
    cells, with edge consistency checked incrementally.
    """
    if p.size > cap:
        raise SizeCapExceeded(f"graph has {p.size} vertices, cap is {cap}")
    n = p.size
    if n == 0:
        return [()]
    out = p.out_adj()
    colors = _refined_colors(p.vertex_labels, p.edges)
    image = [-1] * n
    taken = [False] * n
    found: list[tuple[int, ...]] = []

    def extend(v: int) -> None:
        if v == n:
            found.append(tuple(image))
            return
        for c in range(n):
            if taken[c] or colors[c] != colors[v]:
                continue
            ok = True
            for w in range(v):
                if out[v].get(w) != out[c].get(image[w]) or out[w].get(v) != out[image[w]].get(c):
                    ok = False
                    break
            if ok:
                image[v] = c
                taken[c] = True
                extend(v + 1)
                taken[c] = False
                image[v] = -1

    extend(0)
    return found


def apply_permutation(p: PatternGraph, perm: Sequence[int]) -> PatternGraph:
    """Relabeled copy of ``p`` where old vertex v becomes perm[v]."""
    return p.permuted(perm)
