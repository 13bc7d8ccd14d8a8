"""Labeled multigraphs, spanning trees and forests, tree paths.

Graphs keep the vertex and edge identifiers they were built with. Parallel
edges and self-loops are allowed; a self-loop is never a tree edge.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, NamedTuple


class GraphSpecError(ValueError):
    """A GraphSpec document could not be turned into a graph."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class DisconnectedGraphError(ValueError):
    pass


class Edge(NamedTuple):
    id: int
    u: int
    v: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class LabeledMultigraph:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex identifier")
        seen = set()
        vs = set(self.vertices)
        for e in self.edges:
            if e.id in seen:
                raise ValueError(f"duplicate edge id {e.id}")
            seen.add(e.id)
            if e.u not in vs or e.v not in vs:
                raise ValueError(f"edge {e.id} references an undeclared vertex")

    @classmethod
    def from_pairs(cls, vertices: Iterable[int], pairs: Iterable[tuple[int, int]], first_id: int = 1):
        """Graph whose edges are numbered consecutively from ``first_id``."""
        edges = [Edge(first_id + i, u, v) for i, (u, v) in enumerate(pairs)]
        return cls(tuple(vertices), tuple(edges))

    @cached_property
    def _by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    def edge(self, edge_id: int) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise KeyError(f"no edge with id {edge_id}") from None

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def incidence(self) -> dict[int, list[Edge]]:
        inc: dict[int, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e)
            if not e.is_loop:
                inc[e.v].append(e)
        return inc

    def degree(self, v: int) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Vertex sets of the connected components, in vertex declaration order."""
        uf = UnionFind(self.vertices)
        for e in self.edges:
            uf.union(e.u, e.v)
        groups: dict[int, list[int]] = {}
        for v in self.vertices:
            groups.setdefault(uf.find(v), []).append(v)
        return tuple(tuple(g) for g in groups.values())

    def induced(self, vertices: Iterable[int]) -> LabeledMultigraph:
        keep = set(vertices)
        return LabeledMultigraph(
            tuple(v for v in self.vertices if v in keep),
            tuple(e for e in self.edges if e.u in keep),
        )

    def with_edges(self, edge_ids: Iterable[int]) -> LabeledMultigraph:
        """Spanning subgraph on the given edges."""
        keep = set(edge_ids)
        return LabeledMultigraph(self.vertices, tuple(e for e in self.edges if e.id in keep))

    def disjoint_union(self, other: LabeledMultigraph) -> LabeledMultigraph:
        """Union with ``other`` shifted so no identifier collides."""
        dv = max(self.vertices, default=0) + 1 - min(other.vertices, default=0)
        de = max(self.edge_ids, default=0) + 1 - min(other.edge_ids, default=0)
        return LabeledMultigraph(
            self.vertices + tuple(v + dv for v in other.vertices),
            self.edges + tuple(Edge(e.id + de, e.u + dv, e.v + dv) for e in other.edges),
        )

    def relabeled(self, vertex_map: dict[int, int], edge_map: dict[int, int]) -> LabeledMultigraph:
        return LabeledMultigraph(
            tuple(vertex_map[v] for v in self.vertices),
            tuple(Edge(edge_map[e.id], vertex_map[e.u], vertex_map[e.v]) for e in self.edges),
        )

    def to_spec(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "ends": [e.u, e.v]} for e in self.edges],
        }


@dataclass(frozen=True, order=True)
class SpanningForest:
    """An acyclic, spanning edge subset; stored as a sorted tuple of edge ids."""

    edge_ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_ids", tuple(sorted(self.edge_ids)))

    def __iter__(self):
        return iter(self.edge_ids)

    def __len__(self):
        return len(self.edge_ids)

    def __contains__(self, edge_id):
        return edge_id in self.edge_ids

    def __str__(self):
        return "{" + ",".join(f"l{i}" for i in self.edge_ids) + "}"


class UnionFind:
    def __init__(self, items: Iterable = ()):
        self.parent = {x: x for x in items}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


# -- GraphSpec documents ---------------------------------------------------

_SPEC_KEYS = {"vertices", "edges"}
_EDGE_KEYS = {"id", "ends"}


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def build_graph(spec) -> LabeledMultigraph:
    """Build a graph from a GraphSpec document (a dict, or JSON text)."""
    if isinstance(spec, (str, bytes)):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise GraphSpecError(f"invalid JSON ({exc.msg})", f"line {exc.lineno} col {exc.colno}") from None
    if not isinstance(spec, dict):
        raise GraphSpecError("document must be an object")
    unknown = set(spec) - _SPEC_KEYS
    if unknown:
        raise GraphSpecError(f"unknown field(s) {sorted(unknown)}")
    for key in _SPEC_KEYS:
        if key not in spec:
            raise GraphSpecError(f"missing field '{key}'")
    vertices = spec["vertices"]
    if not isinstance(vertices, list):
        raise GraphSpecError("must be a list", "$.vertices")
    seen_v = set()
    for i, v in enumerate(vertices):
        if not _is_int(v) or v < 0:
            raise GraphSpecError("vertex must be a non-negative integer", f"$.vertices[{i}]")
        if v in seen_v:
            raise GraphSpecError(f"duplicate vertex {v}", f"$.vertices[{i}]")
        seen_v.add(v)
    edges = spec["edges"]
    if not isinstance(edges, list):
        raise GraphSpecError("must be a list", "$.edges")
    out = []
    seen_e = set()
    for i, e in enumerate(edges):
        loc = f"$.edges[{i}]"
        if not isinstance(e, dict):
            raise GraphSpecError("edge must be an object", loc)
        unknown = set(e) - _EDGE_KEYS
        if unknown:
            raise GraphSpecError(f"unknown field(s) {sorted(unknown)}", loc)
        if set(e) != _EDGE_KEYS:
            raise GraphSpecError("edge needs 'id' and 'ends'", loc)
        eid, ends = e["id"], e["ends"]
        if not _is_int(eid):
            raise GraphSpecError("id must be an integer", loc + ".id")
        if eid in seen_e:
            raise GraphSpecError(f"duplicate edge id {eid}", loc + ".id")
        seen_e.add(eid)
        if not isinstance(ends, list) or len(ends) != 2 or not all(_is_int(x) for x in ends):
            raise GraphSpecError("ends must be a pair of integers", loc + ".ends")
        for j, x in enumerate(ends):
            if x not in seen_v:
                raise GraphSpecError(f"dangling endpoint {x}", f"{loc}.ends[{j}]")
        out.append(Edge(eid, ends[0], ends[1]))
    return LabeledMultigraph(tuple(vertices), tuple(out))


def load_graph(path) -> LabeledMultigraph:
    with open(path, encoding="utf-8") as fh:
        return build_graph(fh.read())


# -- connectivity and enumeration ------------------------------------------

def is_connected(g: LabeledMultigraph) -> bool:
    return len(g.components) <= 1


def _trees_of(vertices: tuple[int, ...], edges: list[Edge]) -> list[tuple[int, ...]]:
    """Spanning trees of a connected vertex set by contraction/deletion."""
    need = len(vertices) - 1
    candidates = sorted((e for e in edges if not e.is_loop), key=lambda e: e.id)
    out: list[tuple[int, ...]] = []

    def still_connected(uf: UnionFind, rest) -> bool:
        probe = UnionFind()
        probe.parent = dict(uf.parent)
        for e in rest:
            probe.union(e.u, e.v)
        root = probe.find(vertices[0])
        return all(probe.find(v) == root for v in vertices)

    def rec(i: int, uf: UnionFind, chosen: list[int]):
        if len(chosen) == need:
            out.append(tuple(chosen))
            return
        if len(candidates) - i < need - len(chosen):
            return
        e = candidates[i]
        if uf.find(e.u) != uf.find(e.v):
            contracted = UnionFind()
            contracted.parent = dict(uf.parent)
            contracted.union(e.u, e.v)
            rec(i + 1, contracted, chosen + [e.id])
        if still_connected(uf, candidates[i + 1:]):
            rec(i + 1, uf, chosen)

    rec(0, UnionFind(vertices), [])
    return sorted(out)


def enumerate_spanning_trees(g: LabeledMultigraph) -> list[SpanningForest]:
    """Every spanning tree of a connected graph, sorted by edge-id tuple."""
    if not is_connected(g):
        raise DisconnectedGraphError("spanning trees need a connected graph")
    if not g.vertices:
        return [SpanningForest(())]
    return [SpanningForest(t) for t in _trees_of(g.vertices, list(g.edges))]


def enumerate_spanning_forests(g: LabeledMultigraph) -> list[SpanningForest]:
    """Maximal spanning forests: one spanning tree per connected component."""
    inc = g.incidence()
    per_component = []
    for comp in g.components:
        edges = {e.id: e for v in comp for e in inc[v]}
        per_component.append(_trees_of(comp, list(edges.values())))
    forests = [SpanningForest(sum(choice, ())) for choice in product(*per_component)]
    return sorted(forests)


def is_spanning_forest(g: LabeledMultigraph, f: SpanningForest) -> bool:
    uf = UnionFind(g.vertices)
    for eid in f:
        try:
            e = g.edge(eid)
        except KeyError:
            return False
        if not uf.union(e.u, e.v):
            return False
    return len(f) == len(g.vertices) - len(g.components)


TreePath = tuple[int, ...]  # tree edge ids in walking order


def tree_path(g: LabeledMultigraph, t: SpanningForest, edge_id: int) -> TreePath:
    """Edge ids of the unique path in ``t`` between the ends of ``edge_id``.

    The path is listed from ``u`` to ``v`` of the queried edge; a self-loop
    gives the empty path.
    """
    e = g.edge(edge_id)
    if e.is_loop:
        return ()
    adj: dict[int, list[tuple[int, int]]] = {}
    for tid in t:
        te = g.edge(tid)
        adj.setdefault(te.u, []).append((te.v, tid))
        adj.setdefault(te.v, []).append((te.u, tid))
    back: dict[int, tuple[int, int] | None] = {e.u: None}
    queue = deque([e.u])
    while queue:
        x = queue.popleft()
        if x == e.v:
            break
        for y, tid in adj.get(x, ()):
            if y not in back:
                back[y] = (x, tid)
                queue.append(y)
    if e.v not in back:
        raise ValueError(f"ends of edge {edge_id} lie in different components of the forest")
    path = []
    x = e.v
    while back[x] is not None:
        x, tid = back[x]
        path.append(tid)
    return tuple(reversed(path))


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free elimination)."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def laplacian(g: LabeledMultigraph) -> list[list[int]]:
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(index)
    lap = [[0] * n for _ in range(n)]
    for e in g.edges:
        if e.is_loop:
            continue
        i, j = index[e.u], index[e.v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return lap


def count_spanning_trees_matrix_tree(g: LabeledMultigraph) -> int:
    """Spanning-tree count from a Laplacian minor (Kirchhoff)."""
    if not is_connected(g):
        raise DisconnectedGraphError("matrix-tree count needs a connected graph")
    lap = laplacian(g)
    return _bareiss_det([row[1:] for row in lap[1:]])


# -- canonical forms -------------------------------------------------------

MAX_CANONICAL_VERTICES = 8


def canonical_form(n_vertices: int, edges: Iterable[tuple[int, int]], labels=None) -> tuple:
    """Isomorphism-invariant form of a vertex-labeled multigraph on 0..n-1.

    Brute-force minimisation over relabelings, restricted to permutations
    that preserve a refinement-free vertex invariant.
    """
    if n_vertices > MAX_CANONICAL_VERTICES:
        raise ValueError(f"canonical form limited to {MAX_CANONICAL_VERTICES} vertices")
    edges = [tuple(sorted(e)) for e in edges]
    labels = tuple(labels) if labels is not None else (0,) * n_vertices
    deg = [0] * n_vertices
    loops = [0] * n_vertices
    nbrs: list[list[int]] = [[] for _ in range(n_vertices)]
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        if u == v:
            loops[u] += 1
        else:
            nbrs[u].append(v)
            nbrs[v].append(u)
    inv = [
        (labels[v], deg[v], loops[v], tuple(sorted((labels[w], deg[w]) for w in nbrs[v])))
        for v in range(n_vertices)
    ]
    order = sorted(range(n_vertices), key=lambda v: inv[v])
    classes: list[list[int]] = []
    for v in order:
        if classes and inv[classes[-1][0]] == inv[v]:
            classes[-1].append(v)
        else:
            classes.append([v])
    best = None
    for choice in product(*(permutations(c) for c in classes)):
        pos = {}
        for v in (x for block in choice for x in block):
            pos[v] = len(pos)
        cand = tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in edges))
        if best is None or cand < best:
            best = cand
    return tuple(inv[v] for v in order), best or ()


def graph_canonical_form(g: LabeledMultigraph) -> tuple:
    index = {v: i for i, v in enumerate(g.vertices)}
    return canonical_form(len(index), [(index[e.u], index[e.v]) for e in g.edges])


def frac_str(x) -> str:
    """Rational as ``p/q`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
