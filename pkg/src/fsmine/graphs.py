"""Labeled directed graph containers and text-format ingestion.

Two input formats are supported:

* LG: line oriented; ``v <id> <label>`` lines followed by
  ``e <src> <dst> <label>`` lines, ``#`` starts a comment, and an optional
  ``t # <name>`` header may open the file.  A missing edge label defaults
  to the token ``0``.
* SNAP: whitespace separated ``src dst`` integer pairs with ``#``
  comments; vertex and edge labels are drawn from a seeded deterministic
  generator so the same (file, seed) always produces the same graph.

Label tokens are interned into dense integer ids in first-seen order; the
original tokens are kept in per-graph tables so output can be written with
the input vocabulary.  Graphs are simple: no self-loops and at most one
directed edge per (src, dst) pair.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

MASK64 = (1 << 64) - 1


class FormatError(ValueError):
    """Raised for malformed or inconsistent input files."""


class LabelTable:
    """Dense first-seen interning of label tokens."""

    __slots__ = ("tokens", "_ids")

    def __init__(self, tokens: Iterable[str] = ()) -> None:
        self.tokens: list[str] = []
        self._ids: dict[str, int] = {}
        for tok in tokens:
            self.intern(tok)

    def intern(self, token: str) -> int:
        lid = self._ids.get(token)
        if lid is None:
            lid = len(self.tokens)
            self._ids[token] = lid
            self.tokens.append(token)
        return lid

    def get(self, token: str) -> int | None:
        return self._ids.get(token)

    def token(self, lid: int) -> str:
        return self.tokens[lid]

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelTable) and self.tokens == other.tokens

    def __repr__(self) -> str:
        return f"LabelTable({self.tokens!r})"


class PatternGraph:
    """A small labeled directed pattern graph.

    Vertices are 0..n-1.  ``edges`` is a sorted tuple of
    ``(src, dst, edge_label)`` triples with no self-loops and at most one
    edge per ordered pair.  ``provenance`` optionally records the canonical
    keys of the patterns this one was generated from.
    """

    __slots__ = ("vertex_labels", "edges", "provenance", "_canon", "_out", "_in")

    def __init__(
        self,
        vertex_labels: Sequence[int],
        edges: Iterable[tuple[int, int, int]] = (),
        provenance: tuple[bytes, ...] = (),
    ) -> None:
        labels = tuple(int(x) for x in vertex_labels)
        n = len(labels)
        seen: set[tuple[int, int]] = set()
        norm: list[tuple[int, int, int]] = []
        for u, v, lab in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if (u, v) in seen:
                raise ValueError(f"duplicate directed edge ({u}, {v})")
            seen.add((u, v))
            norm.append((u, v, int(lab)))
        self.vertex_labels = labels
        self.edges = tuple(sorted(norm))
        self.provenance = provenance
        self._canon = None
        self._out: list[dict[int, int]] | None = None
        self._in: list[dict[int, int]] | None = None

    @property
    def size(self) -> int:
        return len(self.vertex_labels)

    def out_adj(self) -> list[dict[int, int]]:
        if self._out is None:
            out: list[dict[int, int]] = [{} for _ in range(self.size)]
            inn: list[dict[int, int]] = [{} for _ in range(self.size)]
            for u, v, lab in self.edges:
                out[u][v] = lab
                inn[v][u] = lab
            self._out, self._in = out, inn
        return self._out

    def in_adj(self) -> list[dict[int, int]]:
        self.out_adj()
        assert self._in is not None
        return self._in

    def edge_label(self, u: int, v: int) -> int | None:
        return self.out_adj()[u].get(v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj()[u]

    def permuted(self, perm: Sequence[int]) -> "PatternGraph":
        """Relabel vertices so old vertex v becomes perm[v]."""
        n = self.size
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation")
        labels = [0] * n
        for v, lab in enumerate(self.vertex_labels):
            labels[perm[v]] = lab
        edges = [(perm[u], perm[v], lab) for u, v, lab in self.edges]
        return PatternGraph(labels, edges)

    def without_vertex(self, v: int) -> "PatternGraph":
        """Delete vertex v, renumbering the rest and keeping their order."""
        if not 0 <= v < self.size:
            raise ValueError(f"vertex {v} out of range")
        labels = [lab for i, lab in enumerate(self.vertex_labels) if i != v]
        shift = lambda w: w - (w > v)  # noqa: E731
        edges = [
            (shift(a), shift(b), lab) for a, b, lab in self.edges if a != v and b != v
        ]
        return PatternGraph(labels, edges)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PatternGraph)
            and self.vertex_labels == other.vertex_labels
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertex_labels, self.edges))

    def __repr__(self) -> str:
        return f"PatternGraph(labels={self.vertex_labels}, edges={list(self.edges)})"


def undirected_neighbors(p: PatternGraph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(p.size)]
    for u, v, _ in p.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def is_connected(p: PatternGraph) -> bool:
    """Connectivity of the undirected view; the empty graph is connected."""
    n = p.size
    if n <= 1:
        return True
    adj = undirected_neighbors(p)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def articulation_vertices(p: PatternGraph) -> set[int]:
    """Vertices whose removal disconnects the undirected view.

    Brute force by removal; pattern graphs are tiny.
    """
    n = p.size
    if n <= 2:
        return set()
    adj = undirected_neighbors(p)
    cut: set[int] = set()
    for v in range(n):
        rest = [w for w in range(n) if w != v]
        seen = {rest[0]}
        stack = [rest[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w != v and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n - 1:
            cut.add(v)
    return cut


class DataGraph:
    """Immutable labeled directed data graph with sorted adjacency.

    ``out_edges[v]`` and ``in_edges[v]`` are tuples of ``(neighbor, label)``
    sorted by neighbor id; ``in_edges`` is the exact transpose of
    ``out_edges``.  ``label_index`` maps each vertex label to the sorted
    list of vertices carrying it.
    """

    __slots__ = (
        "vertex_labels",
        "out_edges",
        "in_edges",
        "label_index",
        "vlabels",
        "elabels",
        "original_ids",
        "duplicates_dropped",
        "_out_maps",
    )

    def __init__(
        self,
        vertex_labels: Sequence[int],
        edges: Iterable[tuple[int, int, int]],
        vlabels: LabelTable | None = None,
        elabels: LabelTable | None = None,
        original_ids: Sequence[int] | None = None,
        duplicates_dropped: int = 0,
    ) -> None:
        labels = tuple(int(x) for x in vertex_labels)
        n = len(labels)
        out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        inn: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        out_maps: list[dict[int, int]] = [{} for _ in range(n)]
        for u, v, lab in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if v in out_maps[u]:
                raise ValueError(f"duplicate directed edge ({u}, {v})")
            out_maps[u][v] = int(lab)
            out[u].append((v, int(lab)))
            inn[v].append((u, int(lab)))
        self.vertex_labels = labels
        self.out_edges = tuple(tuple(sorted(lst)) for lst in out)
        self.in_edges = tuple(tuple(sorted(lst)) for lst in inn)
        self._out_maps = tuple(out_maps)
        index: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            index.setdefault(lab, []).append(v)
        self.label_index = {lab: tuple(vs) for lab, vs in index.items()}
        self.vlabels = vlabels if vlabels is not None else _numeric_table(labels)
        self.elabels = (
            elabels
            if elabels is not None
            else _numeric_table([lab for row in self.out_edges for _, lab in row])
        )
        self.original_ids = (
            tuple(original_ids) if original_ids is not None else tuple(range(n))
        )
        self.duplicates_dropped = duplicates_dropped

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_labels)

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.out_edges)

    def edge_label(self, u: int, v: int) -> int | None:
        return self._out_maps[u].get(v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out_maps[u]

    def vertices_with_label(self, lab: int) -> tuple[int, ...]:
        return self.label_index.get(lab, ())

    def __eq__(self, other: object) -> bool:
        """Equality under vertex-id identity, comparing label tokens.

        Internal label ids may differ between two parses of the same
        content (interning order follows the input), so the comparison is
        on the tokenized structure.  Original ids are ignored.
        """
        if not isinstance(other, DataGraph):
            return NotImplemented
        if self.vertex_count != other.vertex_count:
            return False
        if [self.vlabels.token(lab) for lab in self.vertex_labels] != [
            other.vlabels.token(lab) for lab in other.vertex_labels
        ]:
            return False
        mine = {
            (u, v, self.elabels.token(lab))
            for u in range(self.vertex_count)
            for v, lab in self.out_edges[u]
        }
        theirs = {
            (u, v, other.elabels.token(lab))
            for u in range(other.vertex_count)
            for v, lab in other.out_edges[u]
        }
        return mine == theirs

    def __repr__(self) -> str:
        return f"DataGraph(|V|={self.vertex_count}, |E|={self.edge_count})"


def _numeric_table(labels: Iterable[int]) -> LabelTable:
    table = LabelTable()
    top = max(labels, default=-1)
    for i in range(top + 1):
        table.intern(str(i))
    return table


def _content_lines(source: str | Iterable[str]) -> Iterator[tuple[int, str]]:
    lines = source.splitlines() if isinstance(source, str) else source
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_lg(source: str | Iterable[str], directed: bool = True) -> DataGraph:
    """Parse LG text into a DataGraph.

    With ``directed=False`` every input edge yields both directed edges,
    sharing the input edge label.  All ``v`` lines must precede all ``e``
    lines; duplicate vertices or directed edges are errors.
    """
    vlabels = LabelTable()
    elabels = LabelTable()
    dense: dict[int, int] = {}
    original: list[int] = []
    labels: list[int] = []
    edges: list[tuple[int, int, int]] = []
    edge_seen: set[tuple[int, int]] = set()
    in_edge_section = False
    header_done = False

    for lineno, line in _content_lines(source):
        parts = line.split()
        kind = parts[0]
        if kind == "t":
            if header_done or in_edge_section or dense:
                raise FormatError(f"line {lineno}: header after content")
            header_done = True
            continue
        if kind == "v":
            if in_edge_section:
                raise FormatError(f"line {lineno}: vertex line after edges")
            if len(parts) != 3:
                raise FormatError(f"line {lineno}: expected 'v <id> <label>'")
            try:
                vid = int(parts[1])
            except ValueError:
                raise FormatError(f"line {lineno}: vertex id is not an integer") from None
            if vid in dense:
                raise FormatError(f"line {lineno}: duplicate vertex id {vid}")
            dense[vid] = len(original)
            original.append(vid)
            labels.append(vlabels.intern(parts[2]))
            continue
        if kind == "e":
            in_edge_section = True
            if len(parts) not in (3, 4):
                raise FormatError(f"line {lineno}: expected 'e <src> <dst> [<label>]'")
            try:
                src, dst = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError(f"line {lineno}: edge endpoint is not an integer") from None
            tok = parts[3] if len(parts) == 4 else "0"
            for vid in (src, dst):
                if vid not in dense:
                    raise FormatError(f"line {lineno}: edge references undeclared vertex {vid}")
            if src == dst:
                raise FormatError(f"line {lineno}: self-loop on vertex {src}")
            lab = elabels.intern(tok)
            u, v = dense[src], dense[dst]
            pairs = [(u, v)] if directed else [(u, v), (v, u)]
            for a, b in pairs:
                if (a, b) in edge_seen:
                    raise FormatError(f"line {lineno}: duplicate directed edge {src} -> {dst}")
                edge_seen.add((a, b))
                edges.append((a, b, lab))
            continue
        raise FormatError(f"line {lineno}: unknown record type {kind!r}")

    return DataGraph(labels, edges, vlabels, elabels, original)


def serialize_lg(g: DataGraph, name: str = "g") -> str:
    """Write a DataGraph as LG text using dense vertex ids."""
    lines = [f"t # {name}"]
    for v, lab in enumerate(g.vertex_labels):
        lines.append(f"v {v} {g.vlabels.token(lab)}")
    for u in range(g.vertex_count):
        for v, lab in g.out_edges[u]:
            lines.append(f"e {u} {v} {g.elabels.token(lab)}")
    return "\n".join(lines) + "\n"


def parse_pattern_lg(source: str | Iterable[str], g: DataGraph) -> PatternGraph:
    """Parse a pattern from LG text against a data graph's vocabulary.

    Label tokens unknown to the data graph get fresh ids past the data
    tables, so such patterns simply never match.
    """
    parsed = parse_lg(source, directed=True)
    vmap = {tok: i for i, tok in enumerate(parsed.vlabels.tokens)}
    labels = []
    for v in range(parsed.vertex_count):
        tok = parsed.vlabels.token(parsed.vertex_labels[v])
        known = g.vlabels.get(tok)
        labels.append(known if known is not None else len(g.vlabels) + vmap[tok])
    edges = []
    for u in range(parsed.vertex_count):
        for v, lab in parsed.out_edges[u]:
            tok = parsed.elabels.token(lab)
            known = g.elabels.get(tok)
            elab = known if known is not None else len(g.elabels) + lab
            edges.append((u, v, elab))
    return PatternGraph(labels, edges)


def _splitmix64(seed: int) -> Iterator[int]:
    state = seed & MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def parse_snap_edges(
    source: str | Iterable[str],
    num_vertex_labels: int,
    num_edge_labels: int,
    seed: int,
) -> DataGraph:
    """Parse a SNAP edge list, assigning labels from a seeded generator.

    Vertices are renumbered densely in first-seen order.  Self-loops and
    duplicate (src, dst) pairs are dropped and counted.  Labels are a pure
    function of the deduplicated edge list, the seed and the label counts:
    vertex labels are drawn in vertex order, then edge labels in sorted
    edge order.
    """
    if num_vertex_labels < 1 or num_edge_labels < 1:
        raise ValueError("label counts must be >= 1")
    dense: dict[int, int] = {}
    original: list[int] = []
    pairs: set[tuple[int, int]] = set()
    dropped = 0

    def lookup(vid: int) -> int:
        idx = dense.get(vid)
        if idx is None:
            idx = len(original)
            dense[vid] = idx
            original.append(vid)
        return idx

    for lineno, line in _content_lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'src dst'")
        try:
            src, dst = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer token") from None
        u, v = lookup(src), lookup(dst)
        if u == v or (u, v) in pairs:
            dropped += 1
            continue
        pairs.add((u, v))

    if not pairs:
        raise FormatError("empty edge set")

    rng = _splitmix64(seed)
    labels = [next(rng) % num_vertex_labels for _ in original]
    edges = [(u, v, next(rng) % num_edge_labels) for u, v in sorted(pairs)]
    vlabels = LabelTable(str(i) for i in range(num_vertex_labels))
    elabels = LabelTable(str(i) for i in range(num_edge_labels))
    return DataGraph(labels, edges, vlabels, elabels, original, duplicates_dropped=dropped)


def induced_pattern(g: DataGraph, vertex_ids: Sequence[int]) -> PatternGraph:
    """Pattern induced by ``vertex_ids``, renumbered 0..k-1 in input order."""
    pos: dict[int, int] = {}
    for vid in vertex_ids:
        if not 0 <= vid < g.vertex_count:
            raise ValueError(f"vertex {vid} out of range")
        if vid in pos:
            raise ValueError(f"duplicate vertex id {vid}")
        pos[vid] = len(pos)
    labels = [g.vertex_labels[vid] for vid in vertex_ids]
    edges = []
    for vid in vertex_ids:
        for w, lab in g.out_edges[vid]:
            if w in pos:
                edges.append((pos[vid], pos[w], lab))
    return PatternGraph(labels, edges)


def extend_edge_labels(p: PatternGraph) -> tuple[PatternGraph, dict[int, int]]:
    """Rewrite an edge-labeled graph with label-carrying midpoint vertices.

    Every edge (u, v) with label L becomes u -> w -> v where the new vertex
    w carries L.  Original vertex labels map to 2*label and midpoint labels
    to 2*label+1, keeping the two namespaces disjoint in a way that is
    stable across graphs.  Returns the extended graph and a map from each
    midpoint vertex to the index of its originating edge in ``p.edges``.
    """
    labels = [2 * lab for lab in p.vertex_labels]
    edges: list[tuple[int, int, int]] = []
    origin: dict[int, int] = {}
    w = p.size
    for idx, (u, v, lab) in enumerate(p.edges):
        labels.append(2 * lab + 1)
        edges.append((u, w, 0))
        edges.append((w, v, 0))
        origin[w] = idx
        w += 1
    return PatternGraph(labels, edges), origin
