"""Shared fixtures and brute-force oracles for the test suite.

The oracles deliberately avoid the library's own search paths: isomorphism
is checked by trying every bijection, embeddings by trying every injective
assignment, maximum independent sets by sweeping all subsets, and the
candidate lattice by one-vertex extension of its parents.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from fsmine import DataGraph, PatternGraph, is_connected, parse_lg

STRIP_LG = """
t # strip
v 0 red
v 1 red
v 2 red
v 3 red
v 4 blue
v 5 blue
v 6 blue
e 0 1 0
e 1 2 0
e 2 3 0
e 4 5 0
e 5 6 0
e 0 4 0
e 1 4 0
e 1 5 0
e 2 5 0
e 2 6 0
e 3 6 0
"""


def bidir(pairs):
    return [e for (u, v, lab) in pairs for e in ((u, v, lab), (v, u, lab))]


def strip_graph() -> DataGraph:
    """Seven vertices in two rows; every edge bidirectional."""
    return parse_lg(STRIP_LG, directed=False)


def triangle_rbr() -> PatternGraph:
    """Bidirectional triangle with two red vertices and a blue one."""
    return PatternGraph([0, 1, 0], bidir([(0, 1, 0), (1, 2, 0), (0, 2, 0)]))


def triangle_rbb() -> PatternGraph:
    """Bidirectional triangle with one red vertex and two blue ones."""
    return PatternGraph([0, 1, 1], bidir([(0, 1, 0), (1, 2, 0), (0, 2, 0)]))


def overlapping_stars_graph() -> DataGraph:
    """Sixteen same-label vertices: a central 3-star whose every vertex is
    also a leaf of its own outer 3-star.  The greedy sweep can pick the
    central star alone while four disjoint outer stars exist."""
    hubs = [(1, 0), (1, 2), (1, 3), (4, 0), (4, 5), (4, 6), (7, 1), (7, 8), (7, 9),
            (10, 2), (10, 11), (10, 12), (13, 3), (13, 14), (13, 15)]
    return DataGraph([0] * 16, bidir([(u, v, 0) for u, v in hubs]))


def star_pattern() -> PatternGraph:
    return PatternGraph([0] * 4, bidir([(0, 1, 0), (0, 2, 0), (0, 3, 0)]))


def oracle_isomorphic(p1: PatternGraph, p2: PatternGraph) -> bool:
    """Try all label-respecting bijections against the definition."""
    if p1.size != p2.size or sorted(p1.vertex_labels) != sorted(p2.vertex_labels):
        return False
    e2 = {(u, v): lab for u, v, lab in p2.edges}
    for perm in permutations(range(p1.size)):
        if any(p1.vertex_labels[v] != p2.vertex_labels[perm[v]] for v in range(p1.size)):
            continue
        mapped = {(perm[u], perm[v]): lab for u, v, lab in p1.edges}
        if mapped == e2:
            return True
    return False


def oracle_embeddings(g: DataGraph, p: PatternGraph) -> set[tuple[int, ...]]:
    """All injective label- and edge-preserving assignments, brute force."""
    found = set()
    for image in permutations(range(g.vertex_count), p.size):
        if any(g.vertex_labels[image[v]] != p.vertex_labels[v] for v in range(p.size)):
            continue
        if all(g.edge_label(image[u], image[v]) == lab for u, v, lab in p.edges):
            found.add(tuple(image))
    return found


def oracle_mis(embeddings: list[tuple[int, ...]]) -> int:
    """Maximum number of pairwise-disjoint embeddings over all subsets."""
    m = len(embeddings)
    assert m <= 18, "subset oracle limited to 18 embeddings"
    masks = []
    for emb in embeddings:
        mask = 0
        for v in emb:
            mask |= 1 << v
        masks.append(mask)
    conflict = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if masks[i] & masks[j]:
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i
    best = 0
    valid = bytearray(1 << m)
    valid[0] = 1
    for subset in range(1, 1 << m):
        low = (subset & -subset).bit_length() - 1
        rest = subset & (subset - 1)
        if valid[rest] and not (conflict[low] & rest):
            valid[subset] = 1
            best = max(best, subset.bit_count())
    return best


def oracle_lattice(frequent: list[PatternGraph], dedupe) -> list[PatternGraph]:
    """All connected (k+1)-patterns whose every connected k-vertex
    sub-pattern is isomorphic to a member of ``frequent``.

    Enumerated by attaching one new vertex to each member in every
    label/edge configuration, independent of the core-merging path.
    ``dedupe`` maps a candidate list to representatives (tests pass either
    a canonical-key dedupe or a pairwise-oracle dedupe).
    """
    labels = sorted({lab for p in frequent for lab in p.vertex_labels})
    elabels = sorted({lab for p in frequent for _, _, lab in p.edges}) or [0]
    states = [None] + [(o, lab) for o in ("out", "in", "both") for lab in elabels]
    raw: list[PatternGraph] = []
    for parent in frequent:
        k = parent.size
        for new_label in labels:
            for assignment in product(states, repeat=k):
                if all(s is None for s in assignment):
                    continue
                edges = list(parent.edges)
                for w, state in enumerate(assignment):
                    if state is None:
                        continue
                    o, lab = state
                    if o in ("out", "both"):
                        edges.append((k, w, lab))
                    if o in ("in", "both"):
                        edges.append((w, k, lab))
                raw.append(PatternGraph(list(parent.vertex_labels) + [new_label], edges))
    candidates = dedupe(raw)
    out = []
    for q in candidates:
        subs = [q.without_vertex(v) for v in range(q.size)]
        if all(
            any(oracle_isomorphic(sub, f) for f in frequent)
            for sub in subs
            if is_connected(sub)
        ):
            out.append(q)
    return out


def random_data_graph(
    rng: random.Random,
    n: int,
    num_labels: int,
    edge_factor: float = 2.0,
    num_elabels: int = 1,
    reciprocate: float = 0.5,
) -> DataGraph:
    labels = [rng.randrange(num_labels) for _ in range(n)]
    edges: dict[tuple[int, int], int] = {}
    target = int(n * edge_factor)
    for _ in range(target * 3):
        if len(edges) >= target:
            break
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        edges.setdefault((u, v), rng.randrange(num_elabels))
        if rng.random() < reciprocate:
            edges.setdefault((v, u), edges[(u, v)])
    return DataGraph(labels, [(u, v, lab) for (u, v), lab in sorted(edges.items())])


def random_pattern(
    rng: random.Random, n: int, num_labels: int, num_elabels: int = 1
) -> PatternGraph:
    """A random connected pattern; pairs carry one or both directions."""
    while True:
        labels = [rng.randrange(num_labels) for _ in range(n)]
        edges = []
        for u, v in combinations(range(n), 2):
            roll = rng.random()
            if roll < 0.45:
                continue
            lab = rng.randrange(num_elabels)
            if roll < 0.65:
                edges.append((u, v, lab))
            elif roll < 0.8:
                edges.append((v, u, lab))
            else:
                edges.append((u, v, lab))
                edges.append((v, u, lab))
        p = PatternGraph(labels, edges)
        if is_connected(p) and (n == 1 or edges):
            return p


def random_induced_pattern(rng: random.Random, g: DataGraph, size: int) -> PatternGraph | None:
    """Connected induced pattern grown from a random start vertex."""
    from fsmine import induced_pattern

    start = rng.randrange(g.vertex_count)
    chosen = [start]
    seen = {start}
    while len(chosen) < size:
        frontier = []
        for u in chosen:
            frontier += [w for w, _ in g.out_edges[u] if w not in seen]
            frontier += [w for w, _ in g.in_edges[u] if w not in seen]
        if not frontier:
            return None
        nxt = rng.choice(sorted(set(frontier)))
        chosen.append(nxt)
        seen.add(nxt)
    return induced_pattern(g, chosen)
