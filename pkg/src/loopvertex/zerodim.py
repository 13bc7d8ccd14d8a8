"""Zero-dimensional phi^4: the partition function on both sides of the intermediate field.

Z = (2 pi)^-1/2 int exp(-phi^2/2 - lambda phi^4) dphi
  = (2 pi)^-1/2 int exp(-sigma^2/2 - V) dsigma,   V = 1/2 log(1 + 2 i sqrt(2 lambda) sigma).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .intermediate import MAX_CENSUS_ORDER, iter_phi4_graphs
from .series import I, SQRT2, QI2, SigmaPolynomial, SqrtLambdaSeries, series_log


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def gaussian_moment(k: int) -> int:
    """E[sigma^k] for a standard normal sigma."""
    if k < 0:
        raise ValueError("moment order must be non-negative")
    return 0 if k % 2 else double_factorial(k - 1)


def log_expansion(max_sigma_degree: int, truncation: int) -> SigmaPolynomial:
    """log(1 + x) with x = 2 i sqrt2 mu sigma, as a polynomial in sigma.

    ``truncation`` is the highest power of mu kept.
    """
    x = I * SQRT2 * 2  # coefficient of mu sigma
    coeffs = {}
    power = QI2(1)
    for m in range(1, max_sigma_degree + 1):
        power = power * x
        if m > truncation:
            break
        c = power * Fraction((-1) ** (m + 1), m)
        cs = [QI2()] * (m + 1)
        cs[m] = c
        coeffs[m] = SqrtLambdaSeries(truncation, tuple(cs))
    return SigmaPolynomial(coeffs, max_sigma_degree, truncation)


def log_vertex_expansion(max_sigma_degree: int, truncation: int) -> SigmaPolynomial:
    """The loop vertex V = 1/2 log(1 + 2 i sqrt(2 lambda) sigma)."""
    return log_expansion(max_sigma_degree, truncation).scale(Fraction(1, 2))


def loop_vertex_contributions(order: int) -> list[SqrtLambdaSeries]:
    """Gaussian expectations of (-1)^k V^k / k!, for k = 0 .. 2*order.

    The list index is k; each entry is truncated at lambda^order.
    """
    mu_order = 2 * order
    v = log_vertex_expansion(mu_order, mu_order)
    out = []
    vk = SigmaPolynomial.constant(1, mu_order, mu_order)
    for k in range(mu_order + 1):
        if k:
            vk = vk * v
        term = vk.gaussian_expectation() * Fraction((-1) ** k, factorial(k))
        out.append(term)
    return out


def z_from_loop_vertices(order: int) -> SqrtLambdaSeries:
    total = SqrtLambdaSeries.zero(2 * order)
    for term in loop_vertex_contributions(order):
        total = total + term
    return total


def wick_count(n: int) -> int:
    """Number of labeled order-n vacuum graphs; enumerated for n <= 3."""
    if n == 0:
        return 1
    if n <= MAX_CENSUS_ORDER:
        return sum(1 for _ in iter_phi4_graphs(n))
    return double_factorial(4 * n - 1)


def z_from_feynman(order: int) -> SqrtLambdaSeries:
    """1 + sum_n (-lambda)^n (number of labeled graphs) / n!."""
    return SqrtLambdaSeries.from_lambda(
        [Fraction((-1) ** n * wick_count(n), factorial(n)) for n in range(order + 1)], order
    )


def log_z(order: int) -> SqrtLambdaSeries:
    return series_log(z_from_feynman(order))


@dataclass(frozen=True)
class IdentityCheckSample:
    phi: float
    lam: float
    half_width: float = 12.0
    step: float = 1e-3

    def __post_init__(self):
        if self.half_width <= 0 or self.step <= 0:
            raise ValueError("quadrature half-width and step must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


@dataclass(frozen=True)
class IdentityCheckResult:
    residual: float
    quadrature: complex
    exact: float

    @property
    def imag(self) -> float:
        return self.quadrature.imag


def intermediate_field_identity_check(sample: IdentityCheckSample) -> IdentityCheckResult:
    """Trapezoidal check of exp(-lam phi^4 / 2) = E[exp(i sqrt(lam) sigma phi^2)]."""
    n = int(round(2 * sample.half_width / sample.step)) + 1
    sigma = np.linspace(-sample.half_width, sample.half_width, n)
    f = np.exp(-sigma**2 / 2 + 1j * np.sqrt(sample.lam) * sigma * sample.phi**2) / np.sqrt(2 * np.pi)
    quad = complex(np.trapezoid(f, sigma))
    exact = float(np.exp(-sample.lam * sample.phi**4 / 2))
    return IdentityCheckResult(abs(quad - exact), quad, exact)
