"""Sparse polynomials over Q in the slot variables ``x[i, a]`` of a dimension vector.

For a dimension vector ``gamma`` the variables are laid out vertex by vertex:
vertex 0 owns flat slots ``0 .. gamma[0]-1``, vertex 1 the next ``gamma[1]``,
and so on.  A monomial is the flat exponent tuple; ``MultiPoly.matrix`` gives
the per-vertex view ``E[i][a-1]``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import gcd
from operator import add
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import InternalNonPolynomial, ShapeMismatch

Exponent = Tuple[int, ...]
Terms = Dict[Exponent, Fraction]


def slot_offsets(gamma: Sequence[int]) -> list[int]:
    offs, acc = [], 0
    for g in gamma:
        offs.append(acc)
        acc += g
    return offs


def _canon(terms: Mapping[Exponent, Fraction]) -> Terms:
    return {e: c for e, c in terms.items() if c != 0}


# dict-level kernels, shared by the shuffle product


def t_add_into(acc: Terms, other: Mapping[Exponent, Fraction], scale=1) -> None:
    for e, c in other.items():
        v = acc.get(e, 0) + scale * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def t_mul(a: Mapping[Exponent, Fraction], b: Mapping[Exponent, Fraction]) -> Terms:
    out: Terms = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(map(add, ea, eb))
            out[e] = get(e, 0) + ca * cb
    return _canon(out)


def t_linear_power(n_vars: int, b: int, a: int, power: int) -> Terms:
    """``(x_b - x_a)^power`` expanded by the binomial theorem."""
    from math import comb

    out: Terms = {}
    for k in range(power + 1):
        e = [0] * n_vars
        e[b] += k
        e[a] += power - k
        out[tuple(e)] = out.get(tuple(e), 0) + comb(power, k) * (-1) ** (power - k)
    return _canon(out)


def t_div_linear(p: Mapping[Exponent, Fraction], b: int, a: int) -> Terms:
    """Exact quotient of ``p`` by ``(x_b - x_a)``.

    Synthetic division in ``x_b`` with coefficients free of ``x_b``; raises
    :class:`InternalNonPolynomial` if the remainder ``p|_{x_b = x_a}`` is nonzero.
    """
    if not p:
        return {}
    by_deg: Dict[int, Terms] = defaultdict(dict)
    for e, c in p.items():
        rest = e[:b] + (0,) + e[b + 1:]
        by_deg[e[b]][rest] = c
    top = max(by_deg)
    quotient: Terms = {}
    carry: Terms = {}
    for k in range(top, 0, -1):
        cur = dict(by_deg.get(k, {}))
        for e, c in carry.items():
            e2 = e[:a] + (e[a] + 1,) + e[a + 1:]
            v = cur.get(e2, 0) + c
            if v:
                cur[e2] = v
            else:
                cur.pop(e2, None)
        carry = cur
        for e, c in cur.items():
            quotient[e[:b] + (k - 1,) + e[b + 1:]] = c
    rem = dict(by_deg.get(0, {}))
    for e, c in carry.items():
        e2 = e[:a] + (e[a] + 1,) + e[a + 1:]
        v = rem.get(e2, 0) + c
        if v:
            rem[e2] = v
        else:
            rem.pop(e2, None)
    if rem:
        raise InternalNonPolynomial(f"division by (x{b} - x{a}) left a remainder with {len(rem)} terms")
    return quotient


def t_integral(p: Mapping[Exponent, Fraction]) -> Tuple[Dict[Exponent, int], int]:
    """``(q, den)`` with integer ``q`` and ``p = q / den``."""
    den = 1
    for c in p.values():
        d = Fraction(c).denominator
        den = den * d // gcd(den, d)
    return {e: int(c * den) for e, c in p.items()}, den


def t_permute(p: Mapping[Exponent, Fraction], target: Sequence[int], n_vars: int) -> Terms:
    """Send flat slot ``s`` of ``p`` to slot ``target[s]`` of an ``n_vars``-slot layout."""
    if len(target) == n_vars:
        inverse = [0] * n_vars
        for s, t in enumerate(target):
            inverse[t] = s
        return {tuple([e[s] for s in inverse]): c for e, c in p.items()}
    out: Terms = {}
    for e, c in p.items():
        new = [0] * n_vars
        for s, x in enumerate(e):
            new[target[s]] = x
        out[tuple(new)] = c
    return out


class MultiPoly:
    """Polynomial in the slots of a fixed dimension vector ``gamma``."""

    __slots__ = ("gamma", "terms")

    def __init__(self, gamma: Sequence[int], terms: Mapping[Exponent, Fraction | int] | None = None):
        self.gamma = tuple(int(g) for g in gamma)
        n = sum(self.gamma)
        clean: Terms = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ShapeMismatch(f"exponent {e} has {len(e)} slots, gamma {self.gamma} has {n}")
            if c != 0:
                clean[e] = clean.get(e, 0) + Fraction(c)
        self.terms = _canon(clean)

    @classmethod
    def _raw(cls, gamma: Tuple[int, ...], terms: Terms) -> "MultiPoly":
        """Wrap already-clean terms (nonzero Fractions, right shape) without copying."""
        out = cls.__new__(cls)
        out.gamma = gamma
        out.terms = terms
        return out

    @property
    def n_vars(self) -> int:
        return sum(self.gamma)

    @classmethod
    def constant(cls, gamma: Sequence[int], c=1) -> "MultiPoly":
        n = sum(gamma)
        return cls(gamma, {(0,) * n: c})

    @classmethod
    def variable(cls, gamma: Sequence[int], i: int, a: int) -> "MultiPoly":
        """The variable ``x[i, a]`` (vertex ``i`` 0-based, slot ``a`` 1-based)."""
        gamma = tuple(gamma)
        if not (0 <= i < len(gamma)) or not (1 <= a <= gamma[i]):
            raise ShapeMismatch(f"x[{i},{a}] is not a variable for gamma {gamma}")
        e = [0] * sum(gamma)
        e[slot_offsets(gamma)[i] + a - 1] = 1
        return cls(gamma, {tuple(e): 1})

    def matrix(self, e: Exponent) -> Tuple[Tuple[int, ...], ...]:
        offs = slot_offsets(self.gamma)
        return tuple(tuple(e[o:o + g]) for o, g in zip(offs, self.gamma))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.gamma == other.gamma and self.terms == other.terms

    def __hash__(self):
        return hash((self.gamma, frozenset(self.terms.items())))

    def _same_shape(self, other: "MultiPoly"):
        if self.gamma != other.gamma:
            raise ShapeMismatch(f"shapes {self.gamma} and {other.gamma} differ")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._same_shape(other)
        out = dict(self.terms)
        t_add_into(out, other.terms)
        return MultiPoly(self.gamma, out)

    def __neg__(self):
        return MultiPoly(self.gamma, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiPoly(self.gamma, {e: c * other for e, c in self.terms.items()})
        self._same_shape(other)
        return MultiPoly(self.gamma, t_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        out = MultiPoly.constant(self.gamma)
        for _ in range(n):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def homogeneous_degree(self) -> int | None:
        """Total degree if homogeneous and nonzero, else ``None``."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def swap_slots(self, s: int, t: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            l = list(e)
            l[s], l[t] = l[t], l[s]
            out[tuple(l)] = c
        return MultiPoly(self.gamma, out)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Canonical order: descending total degree, then descending lexicographic."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __repr__(self):
        return f"MultiPoly({self.gamma}, {self.terms!r})"


def symmetric_orbit_sum(gamma: Sequence[int], exps: Iterable[Exponent]) -> MultiPoly:
    """Sum of distinct monomials in the per-vertex permutation orbits of ``exps``."""
    from itertools import permutations, product

    gamma = tuple(gamma)
    offs = slot_offsets(gamma)
    seen: set[Exponent] = set()
    for e in exps:
        blocks = [set(permutations(e[o:o + g])) for o, g in zip(offs, gamma)]
        for combo in product(*blocks):
            seen.add(tuple(x for blk in combo for x in blk))
    return MultiPoly(gamma, {e: 1 for e in seen})
