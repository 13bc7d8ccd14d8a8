"""Tree repackings of zero-dimensional phi^4 perturbation theory.

Two regroupings are provided. The naive one spreads every ordinary
Feynman graph over its own spanning forests. The loop-vertex one spreads
every collapsed graph (bold cycles joined by dotted lines) over the
spanning forests of its dotted lines, so trees collect pieces from
different orders in lambda.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable

from .graphs import LabeledMultigraph, SpanningForest, frac_str
from .intermediate import (
    CollapsedCensus,
    CollapsedGraph,
    _key_from,
    _matchings,
    canonical_key,
    collapsed_census,
    iter_phi4_graphs,
    multigraph_key,
)
from .series import I, SQRT2, QI2, SqrtLambdaSeries
from .weights import weight_table
from .zerodim import double_factorial

MAX_PROFILE_FIELDS = 12

# sigma-field multiplicity per loop vertex, sorted ascending
SigmaVertexProfile = tuple[int, ...]


@lru_cache(maxsize=None)
def census(n: int) -> CollapsedCensus:
    """Memoised collapsed census (the order-3 one takes a few seconds)."""
    return collapsed_census(n)


# -- sigma-side Wick contractions ------------------------------------------

def normalize_profile(multiplicities: Iterable[int]) -> SigmaVertexProfile:
    p = tuple(sorted(int(m) for m in multiplicities))
    if not p or any(m <= 0 for m in p):
        raise ValueError("profile needs positive multiplicities")
    if sum(p) % 2:
        raise ValueError(f"odd number of sigma fields in profile {p}")
    if sum(p) > MAX_PROFILE_FIELDS:
        raise ValueError(f"profiles are limited to {MAX_PROFILE_FIELDS} sigma fields")
    return p


@dataclass
class ContractionCensus:
    profile: tuple[int, ...]
    classes: dict[str, int]
    total_pairings: int
    representatives: dict[str, CollapsedGraph] = field(default_factory=dict)


def sigma_wick_census(profile: Iterable[int]) -> ContractionCensus:
    """Group the Gaussian pairings of the sigma fields on labeled loop vertices.

    Loop vertex i carries ``profile[i]`` fields; each pairing gives a dotted
    multigraph on the loop vertices (intra-vertex pairs become self-loops).
    """
    p = normalize_profile(profile)
    fields = tuple((i, s) for i, m in enumerate(p) for s in range(m))
    classes: dict[str, int] = defaultdict(int)
    reps: dict[str, CollapsedGraph] = {}
    total = 0
    for m in _matchings(fields):
        pairs = tuple(sorted(tuple(sorted((a[0], b[0]))) for a, b in m))
        key = _key_from(p, len(p), pairs)
        if key not in reps:
            reps[key] = CollapsedGraph.from_pairs(p, pairs)
        classes[key] += 1
        total += 1
    return ContractionCensus(p, dict(classes), total, reps)


def relative_class_weights(c: ContractionCensus) -> dict[str, Fraction]:
    if c.total_pairings <= 0:
        raise ValueError("empty contraction census")
    return {k: Fraction(n, c.total_pairings) for k, n in c.classes.items()}


def scaled_combinatoric_factors(c: ContractionCensus, total_count) -> dict[str, Fraction]:
    if total_count < 0:
        raise ValueError("total count must be non-negative")
    return {k: w * total_count for k, w in relative_class_weights(c).items()}


def _log_coefficient(m: int) -> QI2:
    # coefficient of (mu sigma)^m in log(1 + 2 i sqrt2 mu sigma)
    x = I * SQRT2 * 2
    out = QI2(1)
    for _ in range(m):
        out = out * x
    return out * Fraction((-1) ** (m + 1), m)


def profile_total_from_loop_vertices(profile: Iterable[int]) -> Fraction:
    """Total count of a profile read off the expansion of exp(-V).

    Normalised like the Feynman side: the number of labeled order-n graphs
    (each extension counting 3^-n) that the profile accounts for.
    """
    p = normalize_profile(profile)
    k, n = len(p), sum(p) // 2
    arrangements = factorial(k) // prod(factorial(p.count(m)) for m in set(p))
    c = QI2(1)
    for m in p:
        c = c * _log_coefficient(m) * Fraction(1, 2)
    z_part = c * Fraction((-1) ** k * arrangements * double_factorial(sum(p) - 1), factorial(k))
    mass = z_part * ((-1) ** n * factorial(n))
    if not mass.is_rational():
        raise ArithmeticError(f"profile {p} gave a non-rational total {mass!r}")
    return mass.one


def profiles(n: int) -> list[SigmaVertexProfile]:
    """All sigma-vertex profiles contributing at lambda^n (partitions of 2n)."""
    out = []

    def rec(left, smallest, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for m in range(smallest, left + 1):
            rec(left - m, m, acc + [m])

    rec(2 * n, 1, [])
    return out


def class_profile(cg: CollapsedGraph) -> SigmaVertexProfile:
    return tuple(sorted(cg.cycle_lengths))


@dataclass(frozen=True)
class ProfileRow:
    profile: tuple[int, ...]
    class_key: str
    pairings: int
    relative_weight: Fraction
    factor: Fraction          # relative weight times the Feynman-side profile total
    feynman_factor: Fraction  # extension count / 3^n for the same class


def cross_pipeline_table(n: int) -> list[ProfileRow]:
    """Compare sigma-side factors with the extension/collapse census at order n."""
    cen = census(n)
    by_profile: dict[tuple, dict[str, Fraction]] = defaultdict(dict)
    for key, cls in cen.classes.items():
        by_profile[class_profile(cls.representative)][key] = cls.mass
    rows = []
    for p in profiles(n):
        feyn = by_profile.get(p, {})
        wick = sigma_wick_census(p)
        factors = scaled_combinatoric_factors(wick, sum(feyn.values(), Fraction(0)))
        weights = relative_class_weights(wick)
        for key in sorted(set(wick.classes) | set(feyn)):
            rows.append(ProfileRow(p, key, wick.classes.get(key, 0), weights.get(key, Fraction(0)),
                                   factors.get(key, Fraction(0)), feyn.get(key, Fraction(0))))
    return rows


# -- naive repacking ---------------------------------------------------------

GROUPINGS = ("shape", "labeled", "edges")


@dataclass
class TreeRepacking:
    masses: dict[str, Fraction]
    representatives: dict[str, LabeledMultigraph]
    graph_total: Fraction

    @property
    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))


@lru_cache(maxsize=None)
def _table_for(vertices: tuple[int, ...], pairs: tuple[tuple[int, int], ...]):
    g = LabeledMultigraph.from_pairs(vertices, pairs)
    return g, weight_table(g)


def _tree_key(g: LabeledMultigraph, f: SpanningForest, group_by: str) -> str:
    if group_by == "edges":
        return str(f)
    sub = g.with_edges(f)
    if group_by == "labeled":
        return ",".join(f"{u}-{v}" for u, v in sorted(tuple(sorted((e.u, e.v))) for e in sub.edges))
    return multigraph_key(sub)


def naive_tree_repacking(graphs: Iterable[LabeledMultigraph], group_by: str = "shape") -> TreeRepacking:
    """Sum of w(G, F) over graphs G (unit amplitudes) regrouped by forest F.

    ``group_by`` selects what identifies a forest across graphs: its
    isomorphism class (``shape``), its vertex pairs on labeled vertices
    (``labeled``) or its edge ids (``edges``, for a single graph).
    """
    if group_by not in GROUPINGS:
        raise ValueError(f"group_by must be one of {GROUPINGS}")
    masses: dict[str, Fraction] = defaultdict(Fraction)
    reps: dict[str, LabeledMultigraph] = {}
    n_graphs = 0
    for g in graphs:
        n_graphs += 1
        if group_by == "edges":
            table = weight_table(g)
            host = g
        else:
            pairs = tuple(sorted(tuple(sorted((e.u, e.v))) for e in g.edges))
            host, table = _table_for(g.vertices, pairs)
        for f, w in table:
            key = _tree_key(host, f, group_by)
            masses[key] += w
            reps.setdefault(key, host.with_edges(f))
    return TreeRepacking(dict(masses), reps, Fraction(n_graphs))


def naive_tree_repacking_order(n: int, group_by: str = "shape") -> TreeRepacking:
    return naive_tree_repacking((g.multigraph() for g in iter_phi4_graphs(n)), group_by)


# -- loop vertex repacking ---------------------------------------------------

def forest_key(cg: CollapsedGraph, f: SpanningForest) -> str:
    sub = CollapsedGraph(cg.cycle_lengths, cg.dotted.with_edges(f))
    return canonical_key(sub, with_cycle_lengths=False)


@lru_cache(maxsize=None)
def class_tree_weights(cg: CollapsedGraph) -> dict[str, Fraction]:
    """w(G, F) summed over the spanning forests F of each tree class."""
    out: dict[str, Fraction] = defaultdict(Fraction)
    for f, w in weight_table(cg.dotted):
        out[forest_key(cg, f)] += w
    return dict(out)


@dataclass(frozen=True)
class LVERow:
    order: int
    tree_key: str
    class_key: str
    weight: Fraction
    mass: Fraction          # weight * extension count / 3^n
    contribution: Fraction  # signed coefficient of lambda^n in Z

    def tsv(self) -> str:
        return "\t".join([str(self.order), self.tree_key, self.class_key,
                          frac_str(self.weight), frac_str(self.contribution)])


def z_sign(n: int) -> Fraction:
    """(-1)^n / n!: the factor taking a labeled-graph count to the lambda^n coefficient of Z."""
    return Fraction((-1) ** n, factorial(n))


def lve_rows(max_order: int) -> list[LVERow]:
    rows = []
    for n in range(1, max_order + 1):
        for key, cls in sorted(census(n).classes.items()):
            for tkey, w in sorted(class_tree_weights(cls.representative).items()):
                mass = w * cls.mass
                rows.append(LVERow(n, tkey, key, w, mass, mass * z_sign(n)))
    return rows


@dataclass
class TreeContribution:
    key: str
    forest: LabeledMultigraph
    masses: dict[int, Fraction]
    per_order: SqrtLambdaSeries

    @property
    def first_order(self) -> int:
        return min(n for n, m in self.masses.items() if m)


def lve_tree_contributions(max_order: int) -> list[TreeContribution]:
    """Tree amplitudes A_T truncated at lambda^max_order (D = 0)."""
    masses: dict[str, dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    reps: dict[str, LabeledMultigraph] = {}
    for row in lve_rows(max_order):
        masses[row.tree_key][row.order] += row.mass
        if row.tree_key not in reps:
            cg = census(row.order).classes[row.class_key].representative
            for f, _ in weight_table(cg.dotted):
                if forest_key(cg, f) == row.tree_key:
                    reps[row.tree_key] = cg.dotted.with_edges(f)
                    break
    out = []
    for key in sorted(masses, key=lambda k: (min(masses[k]), k)):
        m = dict(masses[key])
        coeffs = [Fraction(0)] + [m.get(n, Fraction(0)) * z_sign(n) for n in range(1, max_order + 1)]
        out.append(TreeContribution(key, reps[key], m, SqrtLambdaSeries.from_lambda(coeffs, max_order)))
    return out


@dataclass(frozen=True)
class MassBalance:
    order: int
    before: Fraction   # sum of class masses
    after: Fraction    # sum over trees of regrouped masses
    labeled_graphs: int

    @property
    def conserved(self) -> bool:
        return self.before == self.after == self.labeled_graphs


def mass_conservation(max_order: int) -> list[MassBalance]:
    rows = lve_rows(max_order)
    out = []
    for n in range(1, max_order + 1):
        before = sum((c.mass for c in census(n).classes.values()), Fraction(0))
        after = sum((r.mass for r in rows if r.order == n), Fraction(0))
        out.append(MassBalance(n, before, after, double_factorial(4 * n - 1)))
    return out
