"""Candidate pattern generation by merging cores of smaller patterns.

A core of a pattern is the pattern with one vertex (the marked vertex)
disconnected; cores whose remainders are isomorphic form a group and share
one canonical coordinate frame, in which every member's attachment edges
are expressed.  Merging two group members re-attaches both marked vertices
to the shared remainder, enumerating remainder automorphisms when they
move an attachment.  Cliques need a third parent to supply the edge
between the two marked vertices, which plain merging never adds.

Every emitted candidate is connected, duplicate-free up to isomorphism,
and downward closed: each of its connected one-vertex-deleted sub-patterns
is isomorphic to an input pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .canonical import (
    CanonicalForm,
    automorphism_group,
    canonical_form,
    canonical_key,
)
from .graphs import (
    DataGraph,
    PatternGraph,
    articulation_vertices,
    is_connected,
)

# attachment entry: (edge_points_out_of_marked, neighbor, edge_label)
Attachment = tuple[bool, int, int]


@dataclass
class CoreGraph:
    parent: PatternGraph
    marked: int
    attachment: tuple[Attachment, ...]  # neighbor in parent coordinates
    remainder: PatternGraph  # parent minus marked, order-preserving renumber
    remainder_form: CanonicalForm
    template_attachment: frozenset[Attachment]  # neighbor in template coordinates

    def body(self) -> PatternGraph:
        """The parent with the marked vertex kept but isolated."""
        edges = [
            (u, v, lab)
            for u, v, lab in self.parent.edges
            if u != self.marked and v != self.marked
        ]
        return PatternGraph(self.parent.vertex_labels, edges)

    def reattached(self) -> PatternGraph:
        """Reapply the attachment; reconstructs the parent exactly."""
        edges = list(self.body().edges)
        for out, w, lab in self.attachment:
            edges.append((self.marked, w, lab) if out else (w, self.marked, lab))
        return PatternGraph(self.parent.vertex_labels, edges)


@dataclass
class CoreGroup:
    key: bytes
    template: PatternGraph  # shared remainder in canonical coordinates
    members: list[CoreGraph]


def _core_at(p: PatternGraph, marked: int) -> CoreGraph:
    attachment = []
    for u, v, lab in p.edges:
        if u == marked:
            attachment.append((True, v, lab))
        elif v == marked:
            attachment.append((False, u, lab))
    remainder = p.without_vertex(marked)
    form = canonical_form(remainder)
    shift = lambda w: w - (w > marked)  # noqa: E731
    template_attachment = frozenset(
        (out, form.canon_perm[shift(w)], lab) for out, w, lab in attachment
    )
    return CoreGraph(p, marked, tuple(attachment), remainder, form, template_attachment)


def core_graphs_of(p: PatternGraph) -> list[CoreGraph]:
    """One core per non-articulation vertex of ``p``."""
    if p.size < 3:
        raise ValueError("pattern must have at least 3 vertices")
    cut = articulation_vertices(p)
    return [_core_at(p, v) for v in range(p.size) if v not in cut]


def _all_cores(p: PatternGraph) -> list[CoreGraph]:
    # Grouping admits cores at every vertex, articulation or not: patterns
    # like a same-label 4-cycle are only reachable by re-attaching two
    # marked vertices to a disconnected remainder.
    return [_core_at(p, v) for v in range(p.size)]


def build_core_groups(patterns: list[PatternGraph]) -> list[CoreGroup]:
    """Bucket the cores of same-size patterns by remainder canonical key.

    Members keep their identity even when whole cores are isomorphic, so
    one pattern can contribute several members to the same group.
    """
    if not patterns:
        return []
    sizes = {p.size for p in patterns}
    if len(sizes) > 1:
        raise ValueError(f"mixed pattern sizes: {sorted(sizes)}")
    keys = [canonical_key(p) for p in patterns]
    if len(set(keys)) != len(keys):
        raise ValueError("patterns must be pairwise non-isomorphic")
    for p in patterns:
        if not is_connected(p):
            raise ValueError("patterns must be connected")
    groups: dict[bytes, CoreGroup] = {}
    for p in patterns:
        for core in _all_cores(p):
            key = core.remainder_form.encoding
            grp = groups.get(key)
            if grp is None:
                template = core.remainder.permuted(core.remainder_form.canon_perm)
                grp = CoreGroup(key, template, [])
                groups[key] = grp
            grp.members.append(core)
    return [groups[k] for k in sorted(groups)]


def find_automorphisms(
    group: CoreGroup, c_i: CoreGraph, c_j: CoreGraph
) -> list[tuple[int, ...]]:
    """Automorphisms of the group remainder worth merging over.

    Returns the full group when some automorphism moves either core's
    attachment profile (a different re-attachment exists); otherwise the
    identity alone already covers every merge up to isomorphism.
    """
    for core in (c_i, c_j):
        if core not in group.members:
            raise ValueError("core is not a member of the group")
    autos = automorphism_group(group.template)
    identity = tuple(range(group.template.size))
    for alpha in autos:
        if alpha == identity:
            continue
        for core in (c_i, c_j):
            att = core.template_attachment
            moved = frozenset((out, alpha[w], lab) for out, w, lab in att)
            if moved != att:
                return autos
    return [identity]


def _is_template_automorphism(template: PatternGraph, alpha: tuple[int, ...]) -> bool:
    if sorted(alpha) != list(range(template.size)):
        return False
    for v, lab in enumerate(template.vertex_labels):
        if template.vertex_labels[alpha[v]] != lab:
            return False
    if len(template.edges) != len({(alpha[u], alpha[v]) for u, v, _ in template.edges}):
        return False
    for u, v, lab in template.edges:
        if template.edge_label(alpha[u], alpha[v]) != lab:
            return False
    return True


def merge(c_i: CoreGraph, c_j: CoreGraph, alpha: tuple[int, ...]) -> PatternGraph:
    """Merge two same-group cores into a pattern one vertex larger.

    The result is the shared remainder plus the marked vertex of ``c_i``
    attached as in its parent and the marked vertex of ``c_j`` attached
    through the automorphism ``alpha``; the two marked vertices are not
    joined by an edge.  Marked vertices land at positions t and t+1 where
    t is the remainder size.
    """
    if c_i.remainder_form.encoding != c_j.remainder_form.encoding:
        raise ValueError("cores belong to different groups")
    template = c_i.remainder.permuted(c_i.remainder_form.canon_perm)
    if not _is_template_automorphism(template, alpha):
        raise ValueError("alpha is not an automorphism of the group remainder")
    t = template.size
    labels = list(template.vertex_labels)
    labels.append(c_i.parent.vertex_labels[c_i.marked])
    labels.append(c_j.parent.vertex_labels[c_j.marked])
    edges = list(template.edges)
    for out, w, lab in sorted(c_i.template_attachment):
        edges.append((t, w, lab) if out else ((w, t, lab)))
    for out, w, lab in sorted(c_j.template_attachment):
        edges.append((t + 1, alpha[w], lab) if out else ((alpha[w], t + 1, lab)))
    provenance = (canonical_key(c_i.parent), canonical_key(c_j.parent))
    return PatternGraph(labels, edges, provenance)


def is_clique(p: PatternGraph) -> bool:
    """Every vertex pair carries at least one directed edge."""
    adj = p.out_adj()
    for u, v in combinations(range(p.size), 2):
        if v not in adj[u] and u not in adj[v]:
            return False
    return True


def downward_closed(p: PatternGraph, frequent_keys: set[bytes]) -> bool:
    """All connected one-vertex-deleted sub-patterns are frequent."""
    for v in range(p.size):
        sub = p.without_vertex(v)
        if is_connected(sub) and canonical_key(sub) not in frequent_keys:
            return False
    return True


def _parent_keys(groups: list[CoreGroup]) -> set[bytes]:
    return {canonical_key(m.parent) for grp in groups for m in grp.members}


def _generate_cliques(
    p_merged: PatternGraph,
    c_i: CoreGraph,
    c_j: CoreGraph,
    by_key: dict[bytes, CoreGroup],
    frequent_keys: set[bytes],
    auto_cache: dict[bytes, list[tuple[int, ...]]],
) -> list[PatternGraph]:
    if not (is_clique(c_i.parent) and is_clique(c_j.parent)):
        return []
    k = p_merged.size
    out: list[PatternGraph] = []
    for pivot, other, pivot_pos, other_pos in (
        (c_i, c_j, k - 2, k - 1),
        (c_j, c_i, k - 1, k - 2),
    ):
        other_label = other.parent.vertex_labels[other.marked]
        parent = pivot.parent
        for x in range(parent.size):
            if x == pivot.marked:
                continue
            rem = parent.without_vertex(x)
            form = canonical_form(rem)
            grp = by_key.get(form.encoding)
            if grp is None:
                continue
            pos_u = form.canon_perm[pivot.marked - (pivot.marked > x)]
            autos = auto_cache.get(grp.key)
            if autos is None:
                autos = automorphism_group(grp.template)
                auto_cache[grp.key] = autos
            bundles: set[frozenset[tuple[bool, int]]] = set()
            for member in grp.members:
                if member.parent.vertex_labels[member.marked] != other_label:
                    continue
                member_key = canonical_key(member.parent)
                for alpha in autos:
                    bundle = frozenset(
                        (o, lab)
                        for o, w, lab in member.template_attachment
                        if alpha[w] == pos_u
                    )
                    if not bundle or bundle in bundles:
                        continue
                    bundles.add(bundle)
                    edges = list(p_merged.edges)
                    for o, lab in sorted(bundle):
                        edges.append(
                            (other_pos, pivot_pos, lab) if o else (pivot_pos, other_pos, lab)
                        )
                    cand = PatternGraph(
                        p_merged.vertex_labels,
                        edges,
                        provenance=p_merged.provenance + (member_key,),
                    )
                    if is_clique(cand) and downward_closed(cand, frequent_keys):
                        out.append(cand)
    return out


def generate_cliques(
    p_merged: PatternGraph,
    c_i: CoreGraph,
    c_j: CoreGraph,
    groups: list[CoreGroup],
) -> list[PatternGraph]:
    """Clique candidates completing one merge result.

    Empty unless both parents are cliques.  Other cores of each parent
    locate the groups to search; members there with the right marked label
    supply the missing edges between the two marked vertices, and a clique
    survives only when all of its one-vertex-deleted sub-patterns are
    among the parents.
    """
    by_key = {grp.key: grp for grp in groups}
    return _generate_cliques(p_merged, c_i, c_j, by_key, _parent_keys(groups), {})


def remove_duplicates(candidates: list[PatternGraph]) -> list[PatternGraph]:
    """One first-seen representative per isomorphism class, key-sorted."""
    seen: dict[bytes, PatternGraph] = {}
    for p in candidates:
        key = canonical_key(p)
        if key not in seen:
            seen[key] = p
    return [seen[k] for k in sorted(seen)]


def generate_new_patterns(frequent: list[PatternGraph]) -> list[PatternGraph]:
    """All size-k candidates from frequent size-(k-1) patterns.

    Every unordered member pair of every core group (self-pairs included)
    is merged under each relevant remainder automorphism, clique
    completions are added, duplicates are removed, and candidates that are
    disconnected or have an infrequent connected sub-pattern are dropped.
    Inputs of size 2 yield nothing; that transition has a dedicated path.
    """
    if not frequent:
        return []
    if frequent[0].size < 3:
        return []
    groups = build_core_groups(frequent)
    by_key = {grp.key: grp for grp in groups}
    frequent_keys = {canonical_key(p) for p in frequent}
    auto_cache: dict[bytes, list[tuple[int, ...]]] = {}
    raw: list[PatternGraph] = []
    for grp in groups:
        members = grp.members
        for i in range(len(members)):
            for j in range(i, len(members)):
                c_i, c_j = members[i], members[j]
                for alpha in find_automorphisms(grp, c_i, c_j):
                    p = merge(c_i, c_j, alpha)
                    if is_connected(p):
                        raw.append(p)
                    raw.extend(
                        _generate_cliques(p, c_i, c_j, by_key, frequent_keys, auto_cache)
                    )
    unique = remove_duplicates(raw)
    return [q for q in unique if downward_closed(q, frequent_keys)]


def seed_size2(g: DataGraph) -> list[PatternGraph]:
    """All 2-vertex patterns occurring in the data graph.

    One single-edge pattern per (src label, edge label, dst label) triple,
    plus the bidirectional pattern for every vertex pair carrying both
    directions; deduplicated up to isomorphism.
    """
    raw: list[PatternGraph] = []
    labels = g.vertex_labels
    for u in range(g.vertex_count):
        for v, lab in g.out_edges[u]:
            raw.append(PatternGraph([labels[u], labels[v]], [(0, 1, lab)]))
            if u < v:
                rev = g.edge_label(v, u)
                if rev is not None:
                    raw.append(
                        PatternGraph(
                            [labels[u], labels[v]], [(0, 1, lab), (1, 0, rev)]
                        )
                    )
    return remove_duplicates(raw)


def _data_triples(g: DataGraph) -> set[tuple[int, int, int]]:
    triples = set()
    for u in range(g.vertex_count):
        for v, lab in g.out_edges[u]:
            triples.add((g.vertex_labels[u], lab, g.vertex_labels[v]))
    return triples


def size2_to_size3(
    frequent2: list[PatternGraph], g: DataGraph | None = None
) -> list[PatternGraph]:
    """All connected 3-vertex candidates over frequent 2-vertex patterns.

    Joins every pair of frequent 2-patterns on a shared-label vertex in
    all configurations, closes triangles with a third frequent 2-pattern,
    and keeps candidates whose 2-vertex sub-patterns are all frequent.
    When a data graph is given, candidates using an edge triple absent
    from it are dropped (they cannot have an embedding).
    """
    if not frequent2:
        return []
    for p in frequent2:
        if p.size != 2:
            raise ValueError("inputs must be 2-vertex patterns")
    frequent_keys = {canonical_key(p) for p in frequent2}
    triples = _data_triples(g) if g is not None else None
    raw: list[PatternGraph] = []
    for a in frequent2:
        for b in frequent2:
            for av in (0, 1):
                for bv in (0, 1):
                    if a.vertex_labels[av] != b.vertex_labels[bv]:
                        continue
                    labels = [
                        a.vertex_labels[av],
                        a.vertex_labels[1 - av],
                        b.vertex_labels[1 - bv],
                    ]
                    amap = {av: 0, 1 - av: 1}
                    bmap = {bv: 0, 1 - bv: 2}
                    edges = [(amap[u], amap[v], lab) for u, v, lab in a.edges]
                    edges += [(bmap[u], bmap[v], lab) for u, v, lab in b.edges]
                    wedge = PatternGraph(
                        labels, edges, provenance=(canonical_key(a), canonical_key(b))
                    )
                    raw.append(wedge)
                    for c in frequent2:
                        for cv in (0, 1):
                            if (
                                c.vertex_labels[cv] != labels[1]
                                or c.vertex_labels[1 - cv] != labels[2]
                            ):
                                continue
                            cmap = {cv: 1, 1 - cv: 2}
                            closing = [
                                (cmap[u], cmap[v], lab) for u, v, lab in c.edges
                            ]
                            raw.append(
                                PatternGraph(
                                    labels,
                                    edges + closing,
                                    provenance=wedge.provenance + (canonical_key(c),),
                                )
                            )
    unique = remove_duplicates(raw)
    kept = []
    for q in unique:
        if not downward_closed(q, frequent_keys):
            continue
        if triples is not None and any(
            (q.vertex_labels[u], lab, q.vertex_labels[v]) not in triples
            for u, v, lab in q.edges
        ):
            continue
        kept.append(q)
    return kept
