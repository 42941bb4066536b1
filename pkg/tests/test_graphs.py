import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsmine import (
    FormatError,
    PatternGraph,
    extend_edge_labels,
    induced_pattern,
    parse_lg,
    parse_pattern_lg,
    parse_snap_edges,
    serialize_lg,
)
from util import bidir, strip_graph, triangle_rbr


def test_parse_lg_empty_stream():
    g = parse_lg("")
    assert g.vertex_count == 0
    assert g.edge_count == 0


def test_parse_lg_strip_graph_counts():
    g = strip_graph()
    assert g.vertex_count == 7
    assert g.edge_count == 22
    assert g.vertex_labels == (0, 0, 0, 0, 1, 1, 1)
    assert g.vlabels.tokens == ["red", "blue"]


def test_parse_lg_directed_transpose():
    g = parse_lg("v 0 a\nv 1 b\ne 0 1 x\n")
    assert g.vertex_count == 2
    assert g.edge_count == 1
    assert g.in_edges[1] == ((0, 0),)
    assert g.out_edges[1] == ()


def test_parse_lg_default_edge_label():
    g = parse_lg("v 0 a\nv 1 a\ne 0 1\n")
    assert g.elabels.tokens == ["0"]


def test_parse_lg_sparse_ids_renumbered():
    g = parse_lg("v 10 a\nv 3 b\ne 10 3 x\n")
    assert g.original_ids == (10, 3)
    assert g.has_edge(0, 1)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("v 0 a\nv 0 b\n", "duplicate vertex"),
        ("v 0 a\ne 0 1 x\n", "undeclared vertex"),
        ("v 0 a\nv 1 b\ne 0 1 x\ne 0 1 y\n", "duplicate directed edge"),
        ("v 0 a\nv 1 b\ne 0 1 x\nv 2 c\n", "vertex line after edges"),
        ("v zero a\n", "not an integer"),
        ("w 0 a\n", "unknown record"),
        ("v 0 a\ne 0 0 x\n", "self-loop"),
    ],
)
def test_parse_lg_errors_carry_line_numbers(text, fragment):
    with pytest.raises(FormatError) as err:
        parse_lg(text)
    assert fragment in str(err.value)
    assert "line" in str(err.value)


def test_round_trip_strip():
    g = strip_graph()
    again = parse_lg(serialize_lg(g))
    assert again == g


def test_transpose_and_label_index():
    g = strip_graph()
    out_pairs = {(u, v, lab) for u in range(7) for v, lab in g.out_edges[u]}
    in_pairs = {(u, v, lab) for v in range(7) for u, lab in g.in_edges[v]}
    assert out_pairs == in_pairs
    for lab, vertices in g.label_index.items():
        assert list(vertices) == sorted(vertices)
        for v in vertices:
            assert g.vertex_labels[v] == lab
    assert sum(len(v) for v in g.label_index.values()) == g.vertex_count


def test_parse_snap_single_label_graph():
    text = "# comment\n0 5\n5 9\n9 0\n"
    g = parse_snap_edges(text, 1, 1, seed=12345)
    assert g.vertex_count == 3
    assert g.edge_count == 3
    assert set(g.vertex_labels) == {0}


def test_parse_snap_deterministic():
    text = "0 1\n1 2\n2 3\n3 0\n1 3\n"
    a = parse_snap_edges(text, 4, 3, seed=42)
    b = parse_snap_edges(text, 4, 3, seed=42)
    assert a == b
    assert serialize_lg(a) == serialize_lg(b)
    c = parse_snap_edges(text, 4, 3, seed=43)
    assert a != c or a.vertex_labels == c.vertex_labels  # extremely unlikely to match


def test_parse_snap_pure_in_comments_and_duplicates():
    plain = "0 1\n1 2\n"
    noisy = "# header\n0 1\n\n1 2\n1 2\n2 2\n# trailing\n"
    a = parse_snap_edges(plain, 3, 2, seed=7)
    b = parse_snap_edges(noisy, 3, 2, seed=7)
    assert a == b
    assert b.duplicates_dropped == 2


def test_parse_snap_errors():
    with pytest.raises(FormatError):
        parse_snap_edges("0 x\n", 1, 1, seed=0)
    with pytest.raises(FormatError):
        parse_snap_edges("# nothing\n", 1, 1, seed=0)


def test_induced_pattern_triangle_from_strip():
    from fsmine import are_isomorphic

    g = strip_graph()
    p = induced_pattern(g, [0, 4, 1])
    assert are_isomorphic(p, triangle_rbr())


def test_induced_pattern_trivial_cases():
    g = strip_graph()
    single = induced_pattern(g, [2])
    assert single.size == 1 and single.edges == ()
    disconnected = induced_pattern(g, [0, 3])
    assert disconnected.size == 2 and disconnected.edges == ()
    with pytest.raises(ValueError):
        induced_pattern(g, [0, 0])
    with pytest.raises(ValueError):
        induced_pattern(g, [99])


def test_extend_edge_labels_empty_and_single():
    p = PatternGraph([3, 5])
    ext, origin = extend_edge_labels(p)
    assert ext.vertex_labels == (6, 10) and origin == {}
    p = PatternGraph([1, 2], [(0, 1, 4)])
    ext, origin = extend_edge_labels(p)
    assert ext.size == 3
    assert ext.vertex_labels[2] == 9
    assert set(ext.edges) == {(0, 2, 0), (2, 1, 0)}
    assert origin == {2: 0}


def test_extend_edge_labels_core_body():
    # isolated marked vertex plus a bidirectional pair: one midpoint per direction
    body = PatternGraph([0, 1, 0], [(1, 2, 0), (2, 1, 0)])
    ext, origin = extend_edge_labels(body)
    assert ext.size == 5
    assert sorted(origin) == [3, 4]
    assert ext.vertex_labels[3] == ext.vertex_labels[4] == 1


def test_extend_edge_labels_preserves_reachability():
    import random

    from util import random_pattern

    rng = random.Random(2024)
    for _ in range(30):
        p = random_pattern(rng, rng.randint(2, 6), 3, num_elabels=2)
        ext, _ = extend_edge_labels(p)
        assert _reach(p) == {
            (u, v) for u, v in _reach(ext) if u < p.size and v < p.size
        }


def _reach(p: PatternGraph) -> set[tuple[int, int]]:
    out = p.out_adj()
    pairs = set()
    for start in range(p.size):
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in out[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        pairs |= {(start, v) for v in seen if v != start}
    return pairs


def test_pattern_graph_validation():
    with pytest.raises(ValueError):
        PatternGraph([0, 1], [(0, 0, 0)])
    with pytest.raises(ValueError):
        PatternGraph([0, 1], [(0, 1, 0), (0, 1, 1)])
    with pytest.raises(ValueError):
        PatternGraph([0], [(0, 1, 0)])


def test_parse_pattern_lg_uses_data_vocabulary():
    g = strip_graph()
    p = parse_pattern_lg("v 0 blue\nv 1 red\ne 0 1 0\ne 1 0 0\n", g)
    assert p.vertex_labels == (1, 0)
    q = parse_pattern_lg("v 0 green\n", g)
    assert q.vertex_labels[0] >= len(g.vlabels)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lg_round_trip_random(data):
    n = data.draw(st.integers(1, 8))
    labels = data.draw(st.lists(st.sampled_from("abc"), min_size=n, max_size=n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=12)) if pairs else []
    lines = [f"v {i} {lab}" for i, lab in enumerate(labels)]
    lines += [f"e {u} {v} {data.draw(st.sampled_from('xy'))}" for u, v in chosen]
    g = parse_lg("\n".join(lines))
    again = parse_lg(serialize_lg(g))
    assert again == g


def test_bidir_helper_builds_valid_patterns():
    p = PatternGraph([0, 0], bidir([(0, 1, 2)]))
    assert p.edge_label(0, 1) == 2 and p.edge_label(1, 0) == 2
