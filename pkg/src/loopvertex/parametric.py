"""Kirchhoff-Symanzik polynomials and parametric amplitudes in real dimension D.

    A_{D,G} = int_(0,inf)^E  exp(-m^2 sum_l alpha_l) / U_G(alpha)^(D/2)  d alpha

is evaluated by randomized quasi-Monte Carlo after mapping each alpha to the
unit interval: alpha = t / (1 - t) (``rational``), or alpha = t^2 / (1 - t)^2
(``squared``), which tames the alpha -> 0 singularity of tadpole lines.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .graphs import DisconnectedGraphError, LabeledMultigraph, enumerate_spanning_trees, is_connected
from .resummation import census, class_tree_weights, z_sign


@dataclass(frozen=True)
class SymanzikPolynomial:
    """U_G = sum over spanning trees of the product of alpha over edges not in the tree."""

    graph: LabeledMultigraph
    terms: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.terms)

    def is_multilinear(self) -> bool:
        # terms are sets of edge ids, so every variable has degree <= 1
        return all(isinstance(t, frozenset) for t in self.terms) and len(set(self.terms)) == len(self.terms)

    def evaluate(self, alpha) -> float | np.ndarray:
        """U at a mapping edge_id -> value, or at an array of shape (..., E) in graph edge order."""
        if isinstance(alpha, dict):
            return sum(math.prod(alpha[e] for e in t) for t in self.terms)
        alpha = np.asarray(alpha, dtype=float)
        col = {e: i for i, e in enumerate(self.graph.edge_ids)}
        out = np.zeros(alpha.shape[:-1])
        for t in self.terms:
            term = np.ones(alpha.shape[:-1])
            for e in t:
                term = term * alpha[..., col[e]]
            out = out + term
        return out

    def __str__(self):
        mono = ["*".join(f"a{e}" for e in sorted(t)) or "1" for t in self.terms]
        return " + ".join(mono)


def symanzik(g: LabeledMultigraph) -> SymanzikPolynomial:
    if not is_connected(g):
        raise DisconnectedGraphError("Symanzik polynomial needs a connected graph")
    ids = frozenset(g.edge_ids)
    return SymanzikPolynomial(g, tuple(ids - frozenset(t) for t in enumerate_spanning_trees(g)))


TRANSFORMS = ("rational", "squared")


@dataclass(frozen=True)
class AmplitudeConfig:
    dimension: float
    mass: float = 1.0
    budget: int = 2**16
    seed: int = 0
    replicas: int = 16
    transform: str = "rational"

    def __post_init__(self):
        if self.transform not in TRANSFORMS:
            raise ValueError(f"transform must be one of {TRANSFORMS}")
        if not 0 <= self.dimension < 2:
            raise ValueError("dimension must lie in [0, 2); D >= 2 needs renormalization")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.budget <= 0:
            raise ValueError("integrator budget must be positive")
        if not 2 <= self.replicas <= self.budget:
            raise ValueError("need at least two randomizations and one point per randomization")


@dataclass(frozen=True)
class AmplitudeResult:
    value: float
    error: float
    evaluations: int

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error, "evaluations": self.evaluations}


def _integrand(u: SymanzikPolynomial, t: np.ndarray, cfg: AmplitudeConfig) -> np.ndarray:
    t = np.clip(t, 1e-15, 1 - 1e-15)
    one_minus = 1.0 - t
    if cfg.transform == "rational":
        alpha = t / one_minus
        jac = np.prod(one_minus ** -2, axis=1)
    else:
        alpha = (t / one_minus) ** 2
        jac = np.prod(2 * t / one_minus**3, axis=1)
    out = np.exp(-cfg.mass**2 * alpha.sum(axis=1)) * jac
    if cfg.dimension:
        out = out * u.evaluate(alpha) ** (-cfg.dimension / 2)
    return out


def amplitude(g: LabeledMultigraph, cfg: AmplitudeConfig) -> AmplitudeResult:
    """Scrambled-Sobol estimate of A_{D,G}; the error is the standard error over randomizations."""
    u = symanzik(g)
    dim = len(g.edges)
    if dim == 0:
        return AmplitudeResult(1.0, 0.0, 0)
    per = cfg.budget // cfg.replicas
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.replicas)
    means = np.empty(cfg.replicas)
    for r, ss in enumerate(seeds):
        sampler = qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(ss))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # non power-of-two sample counts
            t = sampler.random(per)
        means[r] = _integrand(u, t, cfg).mean()
    value = float(means.mean())
    error = float(means.std(ddof=1) / math.sqrt(cfg.replicas))
    return AmplitudeResult(value, error, per * cfg.replicas)


def amplitude_any(g: LabeledMultigraph, cfg: AmplitudeConfig) -> AmplitudeResult:
    """Amplitude of a possibly disconnected graph as the product over components."""
    value, rel2, evals = 1.0, 0.0, 0
    for comp in g.components:
        r = amplitude(g.induced(comp), cfg)
        value *= r.value
        if r.value:
            rel2 += (r.error / r.value) ** 2
        evals += r.evaluations
    return AmplitudeResult(value, abs(value) * math.sqrt(rel2), evals)


NORMALIZATIONS = ("series", "raw")


def tree_amplitude_partial(tree_key: str, cfg: AmplitudeConfig, max_order: int,
                           normalization: str = "series") -> list[AmplitudeResult]:
    """Per-order partial sums of A_{D,T} for one tree class.

    Each extension contributes w(collapsed graph, T) times the amplitude of
    its original phi^4 graph, times 3^-n. With ``series`` normalization the
    order-n sum is also multiplied by (-1)^n / n!, so that at D = 0 and
    m = 1 it equals the lambda^n coefficient of the zero-dimensional tree
    amplitude; ``raw`` leaves that factor out and drops 3^-n as well.
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    if not 1 <= max_order <= 3:
        raise ValueError("tree amplitudes are available for orders 1..3")
    results = []
    found = False
    amp_cache: dict[str, AmplitudeResult] = {}
    for n in range(1, max_order + 1):
        cen = census(n)
        coeff_by_origin: dict[str, Fraction] = {}
        for cls in cen.classes.values():
            w = class_tree_weights(cls.representative).get(tree_key)
            if not w:
                continue
            found = True
            for okey, cnt in cls.origins.items():
                coeff_by_origin[okey] = coeff_by_origin.get(okey, Fraction(0)) + w * cnt
        scale = z_sign(n) / 3**n if normalization == "series" else Fraction(1)
        value, var, evals = 0.0, 0.0, 0
        for okey, c in sorted(coeff_by_origin.items()):
            if okey not in amp_cache:
                amp_cache[okey] = amplitude_any(cen.origin_graphs[okey], cfg)
            a = amp_cache[okey]
            k = float(c * scale)
            value += k * a.value
            var += (k * a.error) ** 2
            evals += a.evaluations
        results.append(AmplitudeResult(value, math.sqrt(var), evals))
    if not found:
        raise KeyError(f"unknown tree class {tree_key!r} up to order {max_order}")
    return results
