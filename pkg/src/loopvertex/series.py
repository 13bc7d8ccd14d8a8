"""Exact truncated power series in mu = sqrt(lambda) over Q(i, sqrt 2)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .graphs import frac_str

_BASIS = ("one", "i", "sqrt2", "i_sqrt2")

# Products of basis elements: (index, scalar).
#   i*i = -1, sqrt2*sqrt2 = 2, (i sqrt2)^2 = -2,
#   i*sqrt2 = i sqrt2, i*(i sqrt2) = -sqrt2, sqrt2*(i sqrt2) = 2i
_MUL = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 2): (0, 2), (2, 3): (1, 2),
    (3, 3): (0, -2),
}


class QI2:
    """Element a + b i + c sqrt2 + d i sqrt2 with rational a, b, c, d."""

    __slots__ = ("c",)

    def __init__(self, one=0, i=0, sqrt2=0, i_sqrt2=0):
        self.c = (Fraction(one), Fraction(i), Fraction(sqrt2), Fraction(i_sqrt2))

    @classmethod
    def _from(cls, comps) -> QI2:
        out = cls.__new__(cls)
        out.c = tuple(comps)
        return out

    @classmethod
    def coerce(cls, x) -> QI2:
        if isinstance(x, QI2):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        return cls(x)

    @property
    def one(self) -> Fraction:
        return self.c[0]

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        try:
            other = QI2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        other = QI2.coerce(other)
        return QI2._from(a + b for a, b in zip(self.c, other.c))

    __radd__ = __add__

    def __neg__(self):
        return QI2._from(-a for a in self.c)

    def __sub__(self, other):
        return self + (-QI2.coerce(other))

    def __rsub__(self, other):
        return QI2.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QI2._from(a * other for a in self.c)
        other = QI2.coerce(other)
        out = [Fraction(0)] * 4
        for p, a in enumerate(self.c):
            if not a:
                continue
            for q, b in enumerate(other.c):
                if not b:
                    continue
                idx, s = _MUL[(p, q) if p <= q else (q, p)]
                out[idx] += s * a * b
        return QI2._from(out)

    __rmul__ = __mul__

    def conjugates(self):
        """Images under the four field automorphisms (i -> +-i, sqrt2 -> +-sqrt2)."""
        a, b, c, d = self.c
        return [QI2(a, si * b, s2 * c, si * s2 * d) for si in (1, -1) for s2 in (1, -1)]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QI2._from(a / other for a in self.c)
        other = QI2.coerce(other)
        # Multiply by the other three conjugates to get a rational norm.
        conj = other.conjugates()[1:]
        num = self
        den = other
        for z in conj:
            num = num * z
            den = den * z
        if not den.is_rational() or not den.one:
            raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
        return num / den.one

    def __complex__(self):
        a, b, c, d = (float(x) for x in self.c)
        r2 = 2 ** 0.5
        return complex(a + c * r2, b + d * r2)

    def to_json(self) -> dict:
        return {k: frac_str(v) for k, v in zip(_BASIS, self.c)}

    @classmethod
    def from_json(cls, d: Mapping[str, str]) -> QI2:
        return cls(*(Fraction(d.get(k, "0")) for k in _BASIS))

    def __repr__(self):
        parts = []
        for name, v in zip(("", "i", "sqrt2", "i*sqrt2"), self.c):
            if v:
                parts.append(f"{v}" if not name else f"{v}*{name}")
        return "QI2(" + (" + ".join(parts) or "0") + ")"


I = QI2(i=1)
SQRT2 = QI2(sqrt2=1)


@dataclass(frozen=True)
class SqrtLambdaSeries:
    """sum_k coeffs[k] mu^k for k = 0..order, with mu^2 = lambda."""

    order: int
    coeffs: tuple[QI2, ...]

    def __post_init__(self):
        cs = [QI2.coerce(c) for c in self.coeffs][: self.order + 1]
        cs += [QI2()] * (self.order + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, order: int) -> SqrtLambdaSeries:
        return cls(order, ())

    @classmethod
    def constant(cls, c, order: int) -> SqrtLambdaSeries:
        return cls(order, (c,))

    @classmethod
    def from_lambda(cls, coeffs: Iterable, lambda_order: int) -> SqrtLambdaSeries:
        """Series sum_n coeffs[n] lambda^n, truncated at lambda^lambda_order."""
        cs: list = []
        for c in coeffs:
            cs += [c, 0]
        return cls(2 * lambda_order, tuple(cs))

    def __getitem__(self, k: int) -> QI2:
        return self.coeffs[k] if 0 <= k <= self.order else QI2()

    def _align(self, other) -> tuple[SqrtLambdaSeries, int]:
        if not isinstance(other, SqrtLambdaSeries):
            other = SqrtLambdaSeries.constant(other, self.order)
        return other, min(self.order, other.order)

    def __add__(self, other):
        other, n = self._align(other)
        return SqrtLambdaSeries(n, tuple(self[k] + other[k] for k in range(n + 1)))

    __radd__ = __add__

    def __neg__(self):
        return SqrtLambdaSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other, n = self._align(other)
        return SqrtLambdaSeries(n, tuple(self[k] - other[k] for k in range(n + 1)))

    def __mul__(self, other):
        if not isinstance(other, SqrtLambdaSeries):
            other = QI2.coerce(other)
            return SqrtLambdaSeries(self.order, tuple(c * other for c in self.coeffs))
        n = min(self.order, other.order)
        out = [QI2() for _ in range(n + 1)]
        for i in range(n + 1):
            a = self[i]
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return SqrtLambdaSeries(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, p: int):
        out = SqrtLambdaSeries.constant(1, self.order)
        for _ in range(p):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SqrtLambdaSeries):
            return NotImplemented
        n = max(self.order, other.order)
        return self.order == other.order and all(self[k] == other[k] for k in range(n + 1))

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def truncate(self, order: int) -> SqrtLambdaSeries:
        return SqrtLambdaSeries(min(order, self.order), self.coeffs)

    def is_real_in_lambda(self) -> bool:
        return all(
            (not c) if k % 2 else c.is_rational()
            for k, c in enumerate(self.coeffs)
        )

    def lambda_coefficients(self) -> list[Fraction]:
        """Rational coefficients of lambda^0, lambda^1, ...; the series must be real in lambda."""
        if not self.is_real_in_lambda():
            raise ValueError("series has odd mu powers or irrational/imaginary parts")
        return [self.coeffs[k].one for k in range(0, self.order + 1, 2)]

    def to_json(self) -> list[dict]:
        return [{"mu_power": k, "coeff": c.to_json()} for k, c in enumerate(self.coeffs)]

    @classmethod
    def from_json(cls, items: list[dict]) -> SqrtLambdaSeries:
        order = max((it["mu_power"] for it in items), default=0)
        cs = [QI2()] * (order + 1)
        for it in items:
            cs[it["mu_power"]] = QI2.from_json(it["coeff"])
        return cls(order, tuple(cs))


def series_log(s: SqrtLambdaSeries) -> SqrtLambdaSeries:
    """Formal logarithm of a series with constant term 1."""
    if s[0] != 1:
        raise ValueError("formal log needs constant term 1")
    # s * (log s)' = s'  solved degree by degree: k b_k = k a_k - sum_{j<k} j b_j a_{k-j}
    n = s.order
    b = [QI2() for _ in range(n + 1)]
    for k in range(1, n + 1):
        acc = s[k] * k
        for j in range(1, k):
            acc = acc - b[j] * s[k - j] * j
        b[k] = acc / k
    return SqrtLambdaSeries(n, tuple(b))


def series_exp(s: SqrtLambdaSeries) -> SqrtLambdaSeries:
    """Formal exponential of a series with zero constant term."""
    if s[0]:
        raise ValueError("formal exp needs zero constant term")
    # e' = s' e  ->  k e_k = sum_{j=1..k} j s_j e_{k-j}
    n = s.order
    e = [QI2() for _ in range(n + 1)]
    e[0] = QI2(1)
    for k in range(1, n + 1):
        acc = QI2()
        for j in range(1, k + 1):
            acc = acc + s[j] * e[k - j] * j
        e[k] = acc / k
    return SqrtLambdaSeries(n, tuple(e))


class SigmaPolynomial:
    """Polynomial in sigma whose coefficients are SqrtLambdaSeries."""

    def __init__(self, coeffs: Mapping[int, SqrtLambdaSeries], degree_bound: int, order: int):
        self.degree_bound = degree_bound
        self.order = order
        self.coeffs = {
            j: c.truncate(order) for j, c in coeffs.items()
            if j <= degree_bound and any(c.truncate(order).coeffs)
        }

    @classmethod
    def constant(cls, c, degree_bound: int, order: int) -> SigmaPolynomial:
        return cls({0: SqrtLambdaSeries.constant(c, order)}, degree_bound, order)

    def __getitem__(self, j: int) -> SqrtLambdaSeries:
        return self.coeffs.get(j, SqrtLambdaSeries.zero(self.order))

    def __add__(self, other: SigmaPolynomial) -> SigmaPolynomial:
        keys = set(self.coeffs) | set(other.coeffs)
        return SigmaPolynomial({j: self[j] + other[j] for j in keys},
                               min(self.degree_bound, other.degree_bound), min(self.order, other.order))

    def scale(self, c) -> SigmaPolynomial:
        return SigmaPolynomial({j: s * c for j, s in self.coeffs.items()}, self.degree_bound, self.order)

    def __mul__(self, other: SigmaPolynomial) -> SigmaPolynomial:
        d = min(self.degree_bound, other.degree_bound)
        n = min(self.order, other.order)
        out: dict[int, SqrtLambdaSeries] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j > d:
                    continue
                term = a * b
                out[i + j] = out[i + j] + term if i + j in out else term
        return SigmaPolynomial(out, d, n)

    def gaussian_expectation(self) -> SqrtLambdaSeries:
        """Replace sigma^j by its standard Gaussian moment."""
        from .zerodim import gaussian_moment

        out = SqrtLambdaSeries.zero(self.order)
        for j, c in self.coeffs.items():
            m = gaussian_moment(j)
            if m:
                out = out + c * m
        return out
