"""Relative weights of spanning trees and forests in a graph.

For a spanning tree T of a connected graph G the weight is

    w(G, T) = int_[0,1]^T  prod_{l not in T} x_l(w)  dw,

where x_l is the smallest interpolation parameter on the tree path joining
the ends of the loop line l (a self-loop contributes 1). The integral is
split into the |T|! sectors 0 < w_{p1} < ... < w_{pk} < 1; within a sector
every factor is a single w, so each sector is a monomial integral over an
ordered simplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import NamedTuple, Sequence

import numpy as np

from .graphs import (
    LabeledMultigraph,
    SpanningForest,
    enumerate_spanning_forests,
    is_connected,
    is_spanning_forest,
    tree_path,
)


@dataclass(frozen=True)
class SectorMonomial:
    """Integrand of one sector: ``ordering`` lists tree edges by increasing w."""

    ordering: tuple[int, ...]
    exponents: dict[int, int] = field(hash=False)

    def exponent_vector(self) -> tuple[int, ...]:
        return tuple(self.exponents.get(e, 0) for e in self.ordering)


@dataclass
class WeightTable:
    entries: dict[SpanningForest, Fraction]
    total: Fraction

    def __iter__(self):
        return iter(self.entries.items())


class MonteCarloEstimate(NamedTuple):
    value: float
    stderr: float
    samples: int


def _loop_paths(g: LabeledMultigraph, t: SpanningForest) -> list[tuple[int, ...]]:
    """Tree paths of all non-loop edges outside ``t``; self-loops are skipped."""
    out = []
    for e in g.edges:
        if e.id in t or e.is_loop:
            continue
        out.append(tree_path(g, t, e.id))
    return out


def _check_tree(g: LabeledMultigraph, t: SpanningForest):
    if not is_connected(g):
        raise ValueError("tree weights need a connected graph; use forest_weight")
    if not is_spanning_forest(g, t):
        raise ValueError(f"{t} is not a spanning tree of the graph")


def weakening_exponents(g: LabeledMultigraph, t: SpanningForest, sector_ordering: Sequence[int]) -> SectorMonomial:
    """Power of each tree parameter inside the sector ``sector_ordering``."""
    ordering = tuple(sector_ordering)
    if sorted(ordering) != sorted(t):
        raise ValueError("sector ordering must permute exactly the tree edges")
    rank = {e: i for i, e in enumerate(ordering)}
    exps = dict.fromkeys(ordering, 0)
    for path in _loop_paths(g, t):
        exps[min(path, key=rank.__getitem__)] += 1
    return SectorMonomial(ordering, exps)


def ordered_simplex_integral(m: SectorMonomial) -> Fraction:
    """Integral of prod w^e over 0 < w_{p1} < ... < w_{pk} < 1.

    Integrating the smallest variable first gives
    prod_j 1 / (j + e_{p1} + ... + e_{pj}).
    """
    out = Fraction(1)
    acc = 0
    for j, e in enumerate(m.exponent_vector(), start=1):
        acc += e
        out /= j + acc
    return out


def tree_weight_by_sectors(g: LabeledMultigraph, t: SpanningForest) -> Fraction:
    """Sum of the |T|! sector integrals, one ordering at a time."""
    _check_tree(g, t)
    return sum(
        (ordered_simplex_integral(weakening_exponents(g, t, p)) for p in permutations(t.edge_ids)),
        Fraction(0),
    )


def _weight_from_paths(tree_edges: tuple[int, ...], paths: list[tuple[int, ...]]) -> Fraction:
    # Sectors grouped by the set S of the j smallest parameters: the running
    # exponent sum at step j counts the loop lines whose path meets S.
    k = len(tree_edges)
    bit = {e: 1 << i for i, e in enumerate(tree_edges)}
    masks = [sum(bit[e] for e in p) for p in paths]
    full = (1 << k) - 1
    f = [Fraction(0)] * (1 << k)
    f[0] = Fraction(1)
    for s in range(1, full + 1):
        hit = sum(1 for m in masks if m & s)
        acc = Fraction(0)
        x = s
        while x:
            low = x & -x
            acc += f[s ^ low]
            x ^= low
        f[s] = acc / (s.bit_count() + hit)
    return f[full]


def tree_weight(g: LabeledMultigraph, t: SpanningForest) -> Fraction:
    """Relative weight w(G, T) of a spanning tree of a connected graph."""
    _check_tree(g, t)
    return _weight_from_paths(t.edge_ids, _loop_paths(g, t))


def forest_weight(g: LabeledMultigraph, f: SpanningForest) -> Fraction:
    """Product of the tree weights over the connected components of ``g``."""
    if not is_spanning_forest(g, f):
        raise ValueError(f"{f} is not a spanning forest of the graph")
    out = Fraction(1)
    for comp in g.components:
        sub = g.induced(comp)
        ids = set(sub.edge_ids)
        out *= _weight_from_paths(
            tuple(e for e in f if e in ids),
            _loop_paths(sub, SpanningForest(tuple(e for e in f if e in ids))),
        )
    return out


def weight_table(g: LabeledMultigraph) -> WeightTable:
    entries = {f: forest_weight(g, f) for f in enumerate_spanning_forests(g)}
    return WeightTable(entries, sum(entries.values(), Fraction(0)))


def monte_carlo_weight_oracle(g: LabeledMultigraph, t: SpanningForest, samples: int, seed: int = 0,
                              chunk: int = 200_000) -> MonteCarloEstimate:
    """Plain Monte Carlo estimate of the defining integral with uniform w."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    _check_tree(g, t)
    col = {e: i for i, e in enumerate(t.edge_ids)}
    paths = [[col[e] for e in p] for p in _loop_paths(g, t)]
    rng = np.random.default_rng(seed)
    total = total_sq = 0.0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        w = rng.random((n, len(col)))
        vals = np.ones(n)
        for p in paths:
            vals *= w[:, p].min(axis=1)
        total += vals.sum()
        total_sq += (vals * vals).sum()
        done += n
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return MonteCarloEstimate(float(mean), float(np.sqrt(var / samples)), samples)
