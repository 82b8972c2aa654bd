"""Exact Laurent polynomials and truncated Laurent series in ``u = q^(1/2)``.

Every exponent stored here is an integer power of ``u``; ``q^n`` is ``u^(2n)``.
Coefficients are :class:`fractions.Fraction`.

A :class:`QSeriesTrunc` knows its coefficients exactly on ``[floor, ceiling)``.
Anything at or above ``ceiling`` is unknown (not zero), and arithmetic
propagates the tightest ceiling that is still valid.  ``ceiling`` may be
``math.inf`` for a series that is known exactly (a Laurent polynomial).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Union

from .errors import ZeroLeadingTerm

Rational = Fraction
Number = Union[int, Fraction]
INF = math.inf


def _clean(coeffs: Mapping[int, Number]) -> Dict[int, Fraction]:
    return {int(e): Fraction(c) for e, c in coeffs.items() if c != 0}


class HalfLaurent:
    """Finitely supported Laurent polynomial in ``u``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        self._coeffs = _clean(coeffs or {})

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1) -> "HalfLaurent":
        return cls({exponent: coeff})

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, e: int) -> Fraction:
        return self._coeffs.get(e, Fraction(0))

    def __iter__(self):
        return iter(sorted(self._coeffs.items()))

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent({0: other})
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: "HalfLaurent") -> "HalfLaurent":
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return HalfLaurent(out)

    def __neg__(self):
        return HalfLaurent({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "HalfLaurent") -> "HalfLaurent":
        if isinstance(other, (int, Fraction)):
            return HalfLaurent({e: c * other for e, c in self._coeffs.items()})
        out: Dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return HalfLaurent(out)

    __rmul__ = __mul__

    def min_exponent(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    def max_exponent(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    def shift(self, k: int) -> "HalfLaurent":
        """Multiply by ``u^k``."""
        return HalfLaurent({e + k: c for e, c in self._coeffs.items()})

    def to_series(self, ceiling: float = INF) -> "QSeriesTrunc":
        return QSeriesTrunc(self._coeffs, ceiling)

    def __repr__(self):
        return f"HalfLaurent({dict(sorted(self._coeffs.items()))!r})"

    def __str__(self):
        return format_half_laurent(self)


def format_half_laurent(p: HalfLaurent) -> str:
    """Render as ``q^{k/2}`` terms, ascending in ``k``."""
    if not p:
        return "0"
    parts = []
    for e, c in p:
        mag = abs(c)
        coef = "" if mag == 1 and e != 0 else str(mag)
        if e == 0:
            term = coef or "1"
        else:
            term = f"{coef}{'*' if coef else ''}q^{{{e}/2}}"
        parts.append(("-" if c < 0 else "+", term))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


class QSeriesTrunc:
    """Laurent series in ``u`` known exactly below ``ceiling``.

    ``floor`` is computed, never declared: it is the lowest exponent carrying a
    nonzero coefficient, or ``ceiling`` when nothing nonzero is known.
    """

    __slots__ = ("_coeffs", "ceiling", "floor")

    def __init__(self, coeffs: Mapping[int, Number] | None = None, ceiling: float = INF):
        if ceiling != INF:
            ceiling = int(ceiling)
        self.ceiling = ceiling
        self._coeffs = {e: c for e, c in _clean(coeffs or {}).items() if e < ceiling}
        self.floor = min(self._coeffs) if self._coeffs else ceiling

    # construction helpers
    @classmethod
    def zero(cls, ceiling: float = INF) -> "QSeriesTrunc":
        return cls({}, ceiling)

    @classmethod
    def one(cls, ceiling: float = INF) -> "QSeriesTrunc":
        return cls({0: 1}, ceiling)

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1, ceiling: float = INF) -> "QSeriesTrunc":
        return cls({exponent: coeff}, ceiling)

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._coeffs)

    @property
    def is_exact(self) -> bool:
        return self.ceiling == INF

    def __getitem__(self, e: int) -> Fraction:
        if e >= self.ceiling:
            raise KeyError(f"coefficient of u^{e} is beyond the truncation ceiling {self.ceiling}")
        return self._coeffs.get(e, Fraction(0))

    def items(self):
        return sorted(self._coeffs.items())

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeriesTrunc):
            return NotImplemented
        return self.ceiling == other.ceiling and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.ceiling, frozenset(self._coeffs.items())))

    def agrees_with(self, other: "QSeriesTrunc") -> bool:
        """Equality of all coefficients both sides know."""
        top = min(self.ceiling, other.ceiling)
        a = {e: c for e, c in self._coeffs.items() if e < top}
        b = {e: c for e, c in other._coeffs.items() if e < top}
        return a == b

    def truncate(self, ceiling: float) -> "QSeriesTrunc":
        return QSeriesTrunc(self._coeffs, min(self.ceiling, ceiling))

    def shift(self, k: int) -> "QSeriesTrunc":
        """Multiply by ``u^k``; the ceiling moves with the series."""
        return QSeriesTrunc({e + k: c for e, c in self._coeffs.items()}, self.ceiling + k)

    def scale(self, c: Number) -> "QSeriesTrunc":
        return QSeriesTrunc({e: v * c for e, v in self._coeffs.items()}, self.ceiling)

    def to_half_laurent(self) -> HalfLaurent:
        """The known part as a Laurent polynomial."""
        return HalfLaurent(self._coeffs)

    def __add__(self, other):
        return series_add(self, other)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return series_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QSeriesTrunc":
        return series_pow(self, n)

    def __repr__(self):
        return f"QSeriesTrunc({dict(self.items())!r}, ceiling={self.ceiling})"


def series_add(a: QSeriesTrunc, b: QSeriesTrunc) -> QSeriesTrunc:
    ceiling = min(a.ceiling, b.ceiling)
    out = {e: c for e, c in a._coeffs.items() if e < ceiling}
    for e, c in b._coeffs.items():
        if e < ceiling:
            out[e] = out.get(e, 0) + c
    return QSeriesTrunc(out, ceiling)


def series_sum(terms: Iterable[QSeriesTrunc]) -> QSeriesTrunc:
    """Sum of many series; the empty sum is the exact zero."""
    ceiling = INF
    out: Dict[int, Fraction] = {}
    terms = list(terms)
    for t in terms:
        ceiling = min(ceiling, t.ceiling)
    for t in terms:
        for e, c in t._coeffs.items():
            if e < ceiling:
                out[e] = out.get(e, 0) + c
    return QSeriesTrunc(out, ceiling)


def series_mul(a: QSeriesTrunc, b: QSeriesTrunc) -> QSeriesTrunc:
    # Unknown terms of a start at a.ceiling and meet b no lower than b.floor.
    ceiling = min(a.ceiling + b.floor, b.ceiling + a.floor)
    out: Dict[int, Fraction] = {}
    for e1, c1 in a._coeffs.items():
        for e2, c2 in b._coeffs.items():
            e = e1 + e2
            if e < ceiling:
                out[e] = out.get(e, 0) + c1 * c2
    return QSeriesTrunc(out, ceiling)


def series_inv(a: QSeriesTrunc) -> QSeriesTrunc:
    if not a._coeffs:
        raise ZeroLeadingTerm("series has no nonzero coefficient below its ceiling")
    e0 = a.floor
    lead = a._coeffs[e0]
    if a.is_exact and len(a._coeffs) == 1:
        return QSeriesTrunc({-e0: 1 / lead})
    if a.is_exact:
        raise ValueError("inverse of a non-monomial Laurent polynomial needs a ceiling; truncate first")
    # relative precision is preserved: a.ceiling - e0 terms past the leading one
    length = a.ceiling - e0
    rel = {e - e0: c for e, c in a._coeffs.items()}
    inv = [Fraction(0)] * length
    inv[0] = 1 / lead
    for n in range(1, length):
        acc = Fraction(0)
        for j, c in rel.items():
            if 1 <= j <= n:
                acc += c * inv[n - j]
        inv[n] = -acc / lead
    return QSeriesTrunc({n - e0: c for n, c in enumerate(inv)}, length - e0)


def series_pow(a: QSeriesTrunc, n: int) -> QSeriesTrunc:
    if n < 0:
        return series_pow(series_inv(a), -n)
    result = QSeriesTrunc.one()
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def one_minus_q() -> QSeriesTrunc:
    """The exact polynomial ``1 - q``."""
    return QSeriesTrunc({0: 1, 2: -1})


def qfactorial_inv(n: int, ceiling: int) -> QSeriesTrunc:
    """``1/((1-q)(1-q^2)...(1-q^n))`` as a power series, known below u-exponent ``ceiling``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if ceiling <= 0:
        return QSeriesTrunc.zero(ceiling)
    c = [Fraction(0)] * ceiling
    c[0] = Fraction(1)
    for j in range(1, n + 1):
        step = 2 * j
        # in-place division by (1 - u^step)
        for e in range(step, ceiling):
            c[e] += c[e - step]
    return QSeriesTrunc(dict(enumerate(c)), ceiling)


def pochhammer_coeff(n: int, ceiling: int) -> QSeriesTrunc:
    """Coefficient of ``z^n`` in ``(z;q)_inf``: ``(-1)^n q^(n(n-1)/2) / (q;q)_n``."""
    shift = n * (n - 1)
    base = qfactorial_inv(n, ceiling - shift)
    if n % 2:
        base = -base
    return base.shift(shift)


def pochhammer_coeffs(max_power: int, ceiling: int) -> list[QSeriesTrunc]:
    """Coefficients ``b_0 .. b_max_power`` of ``(z;q)_inf``, each known below ``ceiling``."""
    if max_power < 0:
        raise ValueError("max_power must be nonnegative")
    return [pochhammer_coeff(n, ceiling) for n in range(max_power + 1)]
