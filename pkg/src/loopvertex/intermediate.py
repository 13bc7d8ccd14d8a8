"""Intermediate-field extension and collapse of labeled phi^4 vacuum graphs.

A labeled vacuum graph of order n is a perfect matching of the 4n
half-lines (v, k), v = 1..n, k = 1..4. Splitting every vertex into two
3-valent halves (three ways per vertex) gives the 3^n extensions; the
original lines then form disjoint cycles through the halves, and the
collapse contracts each cycle to one bold vertex joined by the n dotted
lines that record the splits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator

from .graphs import (
    Edge,
    LabeledMultigraph,
    MAX_CANONICAL_VERTICES,
    UnionFind,
    canonical_form,
    frac_str,
)

HalfLine = tuple[int, int]

# Fixed order of the three ways to split four half-lines into two pairs.
PAIRINGS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((1, 2), (3, 4)),
    ((1, 3), (2, 4)),
    ((1, 4), (2, 3)),
)
# side[p][k-1]: which half (0 or 1) receives half-line k under pairing p.
_SIDE = tuple(
    tuple(0 if k in first else 1 for k in range(1, 5)) for first, _ in PAIRINGS
)

MAX_PHI4_ORDER = 4
MAX_CENSUS_ORDER = 3


@dataclass(frozen=True)
class Phi4LabeledGraph:
    order: int
    pairing: tuple[tuple[HalfLine, HalfLine], ...]

    def multigraph(self) -> LabeledMultigraph:
        """Ordinary graph on vertices 1..n; edge ids 1..2n follow ``pairing``."""
        return LabeledMultigraph.from_pairs(
            range(1, self.order + 1), [(a[0], b[0]) for a, b in self.pairing]
        )


def _matchings(items: tuple) -> Iterator[tuple]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for m in _matchings(remaining):
            yield ((first, partner),) + m


def iter_phi4_graphs(n: int) -> Iterator[Phi4LabeledGraph]:
    if not 1 <= n <= MAX_PHI4_ORDER:
        raise ValueError(f"order must be in 1..{MAX_PHI4_ORDER}, got {n}")
    half_lines = tuple((v, k) for v in range(1, n + 1) for k in range(1, 5))
    for m in _matchings(half_lines):
        yield Phi4LabeledGraph(n, m)


def enumerate_phi4_graphs(n: int) -> list[Phi4LabeledGraph]:
    """All (4n-1)!! labeled vacuum graphs of order n."""
    return list(iter_phi4_graphs(n))


@dataclass(frozen=True)
class ExtendedGraph:
    origin: Phi4LabeledGraph
    vertex_splits: tuple[int, ...]  # index into PAIRINGS, one per vertex

    @property
    def order(self) -> int:
        return self.origin.order

    @property
    def weight(self) -> Fraction:
        return Fraction(1, 3 ** self.order)

    def half_of(self, h: HalfLine) -> tuple[int, int]:
        v, k = h
        return v, _SIDE[self.vertex_splits[v - 1]][k - 1]

    @property
    def solid_edges(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        return tuple((self.half_of(a), self.half_of(b)) for a, b in self.origin.pairing)

    @property
    def dotted_edges(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        return tuple(((v, 0), (v, 1)) for v in range(1, self.order + 1))


def enumerate_extensions(g: Phi4LabeledGraph) -> list[ExtendedGraph]:
    return [ExtendedGraph(g, s) for s in product(range(3), repeat=g.order)]


@dataclass(frozen=True)
class CollapsedGraph:
    """Bold vertices 0..b-1 (with the solid length of their cycle) and dotted lines.

    Dotted edge ids are the phi^4 vertex labels they came from.
    """

    cycle_lengths: tuple[int, ...]
    dotted: LabeledMultigraph = field(compare=True)

    @property
    def order(self) -> int:
        return len(self.dotted.edges)

    @classmethod
    def from_pairs(cls, cycle_lengths, pairs) -> CollapsedGraph:
        return cls(tuple(cycle_lengths), LabeledMultigraph.from_pairs(range(len(cycle_lengths)), pairs))


class CollapseError(RuntimeError):
    pass


def collapse(ge: ExtendedGraph) -> CollapsedGraph:
    halves = [(v, s) for v in range(1, ge.order + 1) for s in (0, 1)]
    uf = UnionFind(halves)
    solid = ge.solid_edges
    for a, b in solid:
        uf.union(a, b)
    bold: dict = {}
    for h in halves:  # bold ids in order of smallest half
        bold.setdefault(uf.find(h), len(bold))
    n_halves = [0] * len(bold)
    n_solid = [0] * len(bold)
    for h in halves:
        n_halves[bold[uf.find(h)]] += 1
    for a, _ in solid:
        n_solid[bold[uf.find(a)]] += 1
    if n_halves != n_solid:
        raise CollapseError("solid lines do not form disjoint cycles")
    pairs = [(bold[uf.find(a)], bold[uf.find(b)]) for a, b in ge.dotted_edges]
    return CollapsedGraph(
        tuple(n_solid),
        LabeledMultigraph(tuple(range(len(bold))), tuple(Edge(i + 1, u, v) for i, (u, v) in enumerate(pairs))),
    )


@lru_cache(maxsize=None)
def _key_from(lengths: tuple[int, ...] | None, n: int, pairs: tuple[tuple[int, int], ...]) -> str:
    invariants, edges = canonical_form(n, pairs, lengths)
    order = [inv[0] for inv in invariants]
    e = ",".join(f"{u}-{v}" for u, v in edges)
    if lengths is None:
        return f"V{n}|E:{e}"
    return "L:" + ",".join(map(str, order)) + f"|E:{e}"


def canonical_key(cg: CollapsedGraph, with_cycle_lengths: bool = True) -> str:
    """Text key identical for isomorphic collapsed graphs.

    With ``with_cycle_lengths=False`` the bold-vertex labels are dropped and
    only the dotted structure is compared.
    """
    n = len(cg.cycle_lengths)
    if n > MAX_CANONICAL_VERTICES:
        raise ValueError(f"canonical keys are limited to {MAX_CANONICAL_VERTICES} bold vertices")
    pairs = tuple(sorted(tuple(sorted((e.u, e.v))) for e in cg.dotted.edges))
    return _key_from(cg.cycle_lengths if with_cycle_lengths else None, n, pairs)


@lru_cache(maxsize=None)
def _graph_key(n: int, pairs: tuple[tuple[int, int], ...]) -> str:
    _, edges = canonical_form(n, pairs)
    return f"V{n}|E:" + ",".join(f"{u}-{v}" for u, v in edges)


def multigraph_key(g: LabeledMultigraph) -> str:
    """Isomorphism key of an ordinary (unlabeled-vertex) multigraph."""
    index = {v: i for i, v in enumerate(g.vertices)}
    pairs = tuple(sorted(tuple(sorted((index[e.u], index[e.v]))) for e in g.edges))
    return _graph_key(len(index), pairs)


@dataclass
class CensusClass:
    key: str
    representative: CollapsedGraph
    count: int = 0
    origins: dict[str, int] = field(default_factory=dict)

    @property
    def mass(self) -> Fraction:
        """Extension count times 3^-n, i.e. in units of labeled Feynman graphs."""
        return Fraction(self.count, 3 ** self.representative.order)


@dataclass
class CollapsedCensus:
    order: int
    classes: dict[str, CensusClass]
    origin_graphs: dict[str, LabeledMultigraph]

    @property
    def total(self) -> int:
        return sum(c.count for c in self.classes.values())

    def counts(self) -> dict[str, int]:
        return {k: c.count for k, c in self.classes.items()}

    def to_json(self) -> dict:
        return {k: {"count": frac_str(c.count), "order": self.order} for k, c in sorted(self.classes.items())}


def _collapse_fast(pairing, splits) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    # Same result as collapse(ExtendedGraph(...)) on plain tuples; the census
    # runs this 3^n (4n-1)!! times.
    n = len(splits)
    parent = list(range(2 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (va, ka), (vb, kb) in pairing:
        a = 2 * (va - 1) + _SIDE[splits[va - 1]][ka - 1]
        b = 2 * (vb - 1) + _SIDE[splits[vb - 1]][kb - 1]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    bold: dict[int, int] = {}
    lengths: list[int] = []
    for h in range(2 * n):
        r = find(h)
        if r not in bold:
            bold[r] = len(bold)
            lengths.append(0)
        lengths[bold[r]] += 1
    pairs = tuple(sorted(
        tuple(sorted((bold[find(2 * v)], bold[find(2 * v + 1)]))) for v in range(n)
    ))
    return tuple(lengths), pairs


def collapsed_census(n: int) -> CollapsedCensus:
    """Extension counts per isomorphism class of collapsed graph at order n.

    Signs, powers of lambda and 1/n! are left to the caller; the grand
    total is 3^n (4n-1)!!.
    """
    if not 1 <= n <= MAX_CENSUS_ORDER:
        raise ValueError(f"census order must be in 1..{MAX_CENSUS_ORDER}, got {n}")
    classes: dict[str, CensusClass] = {}
    origins: dict[str, LabeledMultigraph] = {}
    splits_all = list(product(range(3), repeat=n))
    for g in iter_phi4_graphs(n):
        mg = g.multigraph()
        okey = multigraph_key(mg)
        origins.setdefault(okey, mg)
        for splits in splits_all:
            lengths, pairs = _collapse_fast(g.pairing, splits)
            key = _key_from(lengths, len(lengths), pairs)
            cls = classes.get(key)
            if cls is None:
                cls = classes[key] = CensusClass(key, CollapsedGraph.from_pairs(lengths, pairs))
            cls.count += 1
            cls.origins[okey] = cls.origins.get(okey, 0) + 1
    return CollapsedCensus(n, classes, origins)
