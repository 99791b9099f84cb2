"""Weighted undirected graphs, file ingestion and Dirichlet boundary partitions.

Vertices are string ids. Matrix rows and columns follow the vertex
declaration order, so every numeric index can be traced back to an id.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import GraphFormatError, PartitionError, SignalError


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    weight: float
    length: float = 1.0


def _check_positive(value, name, line=None):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise GraphFormatError(f"{name} is not a number: {value!r}", line=line, field=name) from None
    if not np.isfinite(x) or x <= 0:
        raise GraphFormatError(f"{name} must be positive and finite, got {value!r}", line=line, field=name)
    return x


@dataclass(frozen=True)
class WeightedGraph:
    """Finite undirected graph with positive edge weights and edge lengths.

    Construction validates the invariants: no self-loops, at most one edge
    per unordered pair, positive weights/lengths and no isolated vertices.
    Instances are immutable and hashable.
    """

    vertices: tuple
    edges: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _adjacency: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple(self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        index = {}
        for i, v in enumerate(vertices):
            if v in index:
                raise GraphFormatError(f"duplicate vertex {v!r}")
            index[v] = i
        adjacency = {v: [] for v in vertices}
        seen = set()
        for k, e in enumerate(edges):
            if e.u not in index or e.v not in index:
                missing = e.u if e.u not in index else e.v
                raise GraphFormatError(f"edge {k} references undeclared vertex {missing!r}")
            if e.u == e.v:
                raise GraphFormatError(f"self-loop at vertex {e.u!r}")
            key = frozenset((e.u, e.v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {e.u!r}-{e.v!r}")
            seen.add(key)
            _check_positive(e.weight, "weight")
            _check_positive(e.length, "length")
            adjacency[e.u].append((e.v, e.weight, e.length))
            adjacency[e.v].append((e.u, e.weight, e.length))
        for v in vertices:
            if not adjacency[v]:
                raise GraphFormatError(f"isolated vertex {v!r}")
            adjacency[v] = tuple(sorted(adjacency[v], key=lambda item: index[item[0]]))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adjacency", adjacency)

    @classmethod
    def from_edges(cls, edges, vertices=None):
        """Build from ``(u, v, weight[, length])`` tuples; vertex order is first appearance."""
        es = []
        order = [] if vertices is None else [str(v) for v in vertices]
        known = set(order)
        for item in edges:
            u, v, w = str(item[0]), str(item[1]), float(item[2])
            length = float(item[3]) if len(item) > 3 else 1.0
            es.append(Edge(u, v, w, length))
            for x in (u, v):
                if x not in known:
                    if vertices is not None:
                        raise GraphFormatError(f"edge references undeclared vertex {x!r}")
                    known.add(x)
                    order.append(x)
        return cls(tuple(order), tuple(es))

    @property
    def n(self):
        return len(self.vertices)

    @property
    def adjacency(self) -> Mapping[str, tuple]:
        return self._adjacency

    def index(self, v):
        try:
            return self._index[v]
        except KeyError:
            raise PartitionError(f"unknown vertex {v!r}") from None

    def indices(self, vs):
        return np.array([self.index(v) for v in vs], dtype=int)

    def __contains__(self, v):
        return v in self._index

    def neighbors(self, v):
        return tuple(nb for nb, _, _ in self._adjacency[v])

    def weight(self, u, v):
        for nb, w, _ in self._adjacency[u]:
            if nb == v:
                return w
        return 0.0

    def has_edge(self, u, v):
        return any(nb == v for nb, _, _ in self._adjacency[u])

    def degree(self, v):
        return float(sum(w for _, w, _ in self._adjacency[v]))

    @property
    def degrees(self):
        d = np.zeros(self.n)
        for e in self.edges:
            d[self._index[e.u]] += e.weight
            d[self._index[e.v]] += e.weight
        return d

    def edge_arrays(self):
        """Index arrays ``(iu, iv)`` and value arrays ``(weight, length)`` in edge order."""
        iu = np.array([self._index[e.u] for e in self.edges], dtype=int)
        iv = np.array([self._index[e.v] for e in self.edges], dtype=int)
        w = np.array([e.weight for e in self.edges], dtype=float)
        ln = np.array([e.length for e in self.edges], dtype=float)
        return iu, iv, w, ln

    def weight_matrix(self):
        iu, iv, w, _ = self.edge_arrays()
        W = np.zeros((self.n, self.n))
        W[iu, iv] = w
        W[iv, iu] = w
        return W

    @property
    def lengths(self):
        return np.array([e.length for e in self.edges], dtype=float)

    def components(self, subset=None):
        """Connected components of the subgraph induced on ``subset`` (default: all of V).

        Components and their members are listed in vertex order.
        """
        if subset is None:
            members = self.vertices
        else:
            wanted = set(subset)
            members = tuple(v for v in self.vertices if v in wanted)
        allowed = set(members)
        seen = set()
        out = []
        for start in members:
            if start in seen:
                continue
            comp = []
            stack = [start]
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for nb, _, _ in self._adjacency[x]:
                    if nb in allowed and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            out.append(tuple(sorted(comp, key=self._index.__getitem__)))
        return tuple(out)

    def is_connected(self):
        return len(self.components()) == 1


# -- file formats -----------------------------------------------------------

def _parse_tsv(text):
    edges = []
    order = []
    known = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        parts = [p.strip() for p in parts if p.strip()]
        if len(parts) not in (3, 4):
            raise GraphFormatError(f"expected 'u v weight [length]', got {len(parts)} fields", line=lineno)
        u, v = parts[0], parts[1]
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u!r}", line=lineno)
        w = _check_positive(parts[2], "weight", lineno)
        ln = _check_positive(parts[3], "length", lineno) if len(parts) == 4 else 1.0
        edges.append((lineno, Edge(u, v, w, ln)))
        for x in (u, v):
            if x not in known:
                known.add(x)
                order.append(x)
    _check_duplicates(edges)
    return _build(order, edges)


def _parse_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict) or "edges" not in doc:
        raise GraphFormatError("JSON graph must be an object with an 'edges' list")
    declared = doc.get("vertices")
    order = [] if declared is None else [str(v) for v in declared]
    known = set(order)
    if len(known) != len(order):
        raise GraphFormatError("duplicate vertex in 'vertices'", field="vertices")
    edges = []
    for k, item in enumerate(doc["edges"]):
        where = f"edges[{k}]"
        if not isinstance(item, dict) or "u" not in item or "v" not in item:
            raise GraphFormatError("edge needs 'u' and 'v'", field=where)
        u, v = str(item["u"]), str(item["v"])
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u!r}", field=where)
        w = _check_positive(item.get("w", 1.0), f"{where}.w")
        ln = _check_positive(item.get("l", 1.0), f"{where}.l")
        for x in (u, v):
            if x not in known:
                if declared is not None:
                    raise GraphFormatError(f"undeclared vertex {x!r}", field=where)
                known.add(x)
                order.append(x)
        edges.append((where, Edge(u, v, w, ln)))
    _check_duplicates(edges, json_fields=True)
    return _build(order, edges)


def _check_duplicates(edges, json_fields=False):
    seen = {}
    for where, e in edges:
        key = frozenset((e.u, e.v))
        if key in seen:
            msg = f"duplicate edge {e.u!r}-{e.v!r} (first at {seen[key]})"
            if json_fields:
                raise GraphFormatError(msg, field=where)
            raise GraphFormatError(msg, line=where)
        seen[key] = where


def _build(order, edges):
    touched = set()
    for _, e in edges:
        touched.update((e.u, e.v))
    for v in order:
        if v not in touched:
            raise GraphFormatError(f"isolated vertex {v!r}", field="vertices")
    return WeightedGraph(tuple(order), tuple(e for _, e in edges))


def parse_graph(text, fmt=None):
    """Parse graph file content in TSV or JSON form.

    ``fmt`` is ``"tsv"``, ``"json"`` or None to sniff (JSON iff the first
    non-blank character is ``{``).
    """
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "tsv"
    if fmt == "json":
        return _parse_json(text)
    if fmt == "tsv":
        return _parse_tsv(text)
    raise GraphFormatError(f"unknown graph format {fmt!r}")


def load_graph(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    fmt = "json" if str(path).endswith(".json") else None
    return parse_graph(text, fmt)


def serialize_graph(g, fmt="json"):
    """Inverse of :func:`parse_graph`; floats are written as shortest round-trip decimals."""
    if fmt == "json":
        doc = {
            "vertices": list(g.vertices),
            "edges": [{"u": e.u, "v": e.v, "w": e.weight, "l": e.length} for e in g.edges],
        }
        return json.dumps(doc, indent=1) + "\n"
    if fmt == "tsv":
        lines = [f"{e.u}\t{e.v}\t{e.weight!r}\t{e.length!r}" for e in g.edges]
        return "\n".join(lines) + "\n"
    raise GraphFormatError(f"unknown graph format {fmt!r}")


# -- Dirichlet scaffolding ---------------------------------------------------

@dataclass(frozen=True)
class BoundaryPartition:
    """Interior ``S``, boundary ``dS`` (vertices outside S adjacent to S) and closure.

    All three tuples list vertices in graph declaration order.
    ``isolated_components`` holds the components of the subgraph induced on
    S that have no edge into the boundary.
    """

    interior: tuple
    boundary: tuple
    closure: tuple
    isolated_components: tuple = ()

    @property
    def touches_boundary(self):
        return not self.isolated_components

    @property
    def has_boundary(self):
        return bool(self.boundary)


def boundary_of(g, interior) -> BoundaryPartition:
    S = set()
    for v in interior:
        if v not in g:
            raise PartitionError(f"interior contains unknown vertex {v!r}")
        S.add(v)
    inner = tuple(v for v in g.vertices if v in S)
    bset = set()
    for v in inner:
        for nb in g.neighbors(v):
            if nb not in S:
                bset.add(nb)
    boundary = tuple(v for v in g.vertices if v in bset)
    closure = tuple(v for v in g.vertices if v in S or v in bset)
    isolated = tuple(
        comp for comp in g.components(inner)
        if not any(nb in bset for x in comp for nb in g.neighbors(x))
    )
    return BoundaryPartition(inner, boundary, closure, isolated)


@dataclass(frozen=True, eq=False)
class VertexSignal:
    """A real-valued function on an explicit, ordered vertex set."""

    vertices: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != len(self.vertices):
            raise SignalError(f"{len(self.vertices)} vertices but {vals.shape[0]} values")
        vals.setflags(write=False)
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, mapping: Mapping, vertices: Iterable, default=None):
        """Collect ``mapping`` on ``vertices``; keys outside ``vertices`` are an error."""
        vertices = tuple(vertices)
        extra = set(mapping) - set(vertices)
        if extra:
            raise SignalError(f"signal defined off its domain: {sorted(extra)}")
        vals = []
        for v in vertices:
            if v in mapping:
                vals.append(float(mapping[v]))
            elif default is not None:
                vals.append(float(default))
            else:
                raise SignalError(f"signal missing value at vertex {v!r}")
        return cls(vertices, np.array(vals))

    @classmethod
    def zeros(cls, vertices):
        vertices = tuple(vertices)
        return cls(vertices, np.zeros(len(vertices)))

    def __getitem__(self, v):
        try:
            return float(self.values[self.vertices.index(v)])
        except ValueError:
            raise KeyError(v) from None

    def __len__(self):
        return len(self.vertices)

    def as_dict(self):
        return {v: float(x) for v, x in zip(self.vertices, self.values)}

    def on(self, vertices):
        """Values reordered/restricted to ``vertices`` (all must be in the domain)."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        try:
            return np.array([self.values[pos[v]] for v in vertices], dtype=float)
        except KeyError as exc:
            raise SignalError(f"signal has no value at vertex {exc.args[0]!r}") from None


def as_signal(f, vertices, name="signal"):
    """Coerce a VertexSignal, mapping or array onto exactly ``vertices``."""
    vertices = tuple(vertices)
    if isinstance(f, VertexSignal):
        if set(f.vertices) != set(vertices):
            raise SignalError(f"{name} must be defined on exactly {list(vertices)}")
        return f.on(vertices)
    if isinstance(f, Mapping):
        return VertexSignal.from_mapping(f, vertices).values
    arr = np.asarray(f, dtype=float).reshape(-1)
    if arr.shape[0] != len(vertices):
        raise SignalError(f"{name} has {arr.shape[0]} values, expected {len(vertices)}")
    return arr
