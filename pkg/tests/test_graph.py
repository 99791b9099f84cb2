import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphpde.errors import GraphFormatError, PartitionError, SignalError
from graphpde.generators import complete_graph, path_graph
from graphpde.graph import (
    Edge,
    VertexSignal,
    WeightedGraph,
    as_signal,
    boundary_of,
    load_graph,
    parse_graph,
    serialize_graph,
)

from conftest import graphs, seeds


def test_tsv_single_edge_defaults_length():
    g = parse_graph("a b 1.0")
    assert g.vertices == ("a", "b")
    assert g.edges == (Edge("a", "b", 1.0, 1.0),)


def test_tsv_tab_separated_with_comments():
    g = parse_graph("# header\na\tb\t2.5\t0.5  # trailing\n\nb\tc\t1\n")
    assert g.vertices == ("a", "b", "c")
    assert g.weight("a", "b") == 2.5
    assert g.edges[0].length == 0.5


def test_tsv_self_loop_rejected_with_line():
    with pytest.raises(GraphFormatError, match="line 2.*self-loop"):
        parse_graph("a b 1\na a 1.0\n")


@pytest.mark.parametrize("text, pattern", [
    ("a b\n", "fields"),
    ("a b 0\n", "weight"),
    ("a b -1\n", "weight"),
    ("a b x\n", "weight"),
    ("a b 1 0\n", "length"),
    ("a b nan\n", "weight"),
    ("a b 1\nb a 2\n", "duplicate"),
])
def test_tsv_rejects_bad_lines(text, pattern):
    with pytest.raises(GraphFormatError, match=pattern):
        parse_graph(text)


def test_json_triangle_degrees():
    text = '{"edges": [{"u": "a", "v": "b", "w": 1}, {"u": "b", "v": "c", "w": 1}, {"u": "c", "v": "a", "w": 1}]}'
    g = parse_graph(text)
    assert g.vertices == ("a", "b", "c")
    np.testing.assert_array_equal(g.degrees, [2.0, 2.0, 2.0])


@pytest.mark.parametrize("text, pattern", [
    ("{", "invalid JSON"),
    ('{"vertices": ["a"]}', "edges"),
    ('{"vertices": ["a", "b", "z"], "edges": [{"u": "a", "v": "b", "w": 1}]}', "isolated"),
    ('{"edges": [{"u": "a", "v": "b", "w": 0}]}', "w"),
    ('{"edges": [{"u": "a"}]}', "'u' and 'v'"),
    ('{"vertices": ["a", "a"], "edges": []}', "duplicate"),
])
def test_json_rejects_bad_documents(text, pattern):
    with pytest.raises(GraphFormatError, match=pattern):
        parse_graph(text, "json")


def test_json_weight_and_length_default_to_one():
    g = parse_graph('{"edges": [{"u": "a", "v": "b"}]}')
    assert g.edges == (Edge("a", "b", 1.0, 1.0),)


def test_constructor_rejects_isolated_and_duplicates():
    with pytest.raises(GraphFormatError, match="isolated"):
        WeightedGraph(("a", "b", "c"), (Edge("a", "b", 1.0),))
    with pytest.raises(GraphFormatError, match="duplicate edge"):
        WeightedGraph.from_edges([("a", "b", 1), ("b", "a", 1)])


def test_disconnected_graph_accepted():
    g = WeightedGraph.from_edges([("a", "b", 1), ("c", "d", 1)])
    assert not g.is_connected()
    assert g.components() == (("a", "b"), ("c", "d"))


def test_load_graph_files(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(serialize_graph(complete_graph(3)))
    assert load_graph(p) == complete_graph(3)
    q = tmp_path / "g.tsv"
    q.write_text("a b 1\n")
    assert load_graph(q).n == 2


@pytest.mark.parametrize("interior, boundary", [
    (["b"], ("a", "c")),
    (["a", "b"], ("c",)),
])
def test_boundary_of_path(interior, boundary):
    g = path_graph(4) if boundary == ("c",) else path_graph(3)
    part = boundary_of(g, interior)
    assert part.boundary == boundary


def test_boundary_of_complete_interior_is_empty():
    part = boundary_of(complete_graph(3), ["a", "b", "c"])
    assert part.boundary == ()
    assert not part.has_boundary


def test_boundary_of_unknown_vertex():
    with pytest.raises(PartitionError):
        boundary_of(path_graph(3), ["z"])


def test_isolated_interior_component_detected():
    g = WeightedGraph.from_edges([("a", "b", 1), ("c", "d", 1), ("b", "e", 1)])
    part = boundary_of(g, ["a", "c", "d"])
    assert part.isolated_components == (("c", "d"),)
    assert not part.touches_boundary


def test_vertex_signal_mapping_and_errors():
    s = VertexSignal.from_mapping({"b": 2.0}, ["a", "b"], default=0.0)
    assert s.as_dict() == {"a": 0.0, "b": 2.0}
    with pytest.raises(SignalError):
        VertexSignal.from_mapping({"z": 1.0}, ["a"])
    with pytest.raises(SignalError):
        as_signal([1.0, 2.0], ["a"], "f")
    np.testing.assert_array_equal(as_signal(s, ["b", "a"]), [2.0, 0.0])


@given(graphs(), seeds)
def test_partition_covers_vertices(g, seed):
    rng = np.random.default_rng(seed)
    interior = [v for v in g.vertices if rng.random() < 0.5]
    part = boundary_of(g, interior)
    S, B = set(part.interior), set(part.boundary)
    rest = set(g.vertices) - S - B
    assert not S & B
    assert S | B | rest == set(g.vertices)
    assert set(part.closure) == S | B
    assert boundary_of(g, interior) == part


@given(graphs(lengths=True))
def test_parse_serialize_roundtrip(g):
    for fmt in ("json", "tsv"):
        first = parse_graph(serialize_graph(g, fmt), fmt)
        again = parse_graph(serialize_graph(first, fmt), fmt)
        assert again == first
        assert again.vertices == first.vertices
        assert all(a.weight == b.weight and a.length == b.length for a, b in zip(again.edges, first.edges))
    assert parse_graph(serialize_graph(g, "json")) == g


@given(st.lists(st.floats(0.01, 100, allow_nan=False), min_size=1, max_size=6))
def test_path_weights_exact_after_roundtrip(ws):
    g = path_graph(len(ws) + 1, ws)
    assert [e.weight for e in parse_graph(serialize_graph(g, "tsv")).edges] == ws
