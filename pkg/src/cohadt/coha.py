"""The polynomial model of the Cohomological Hall algebra of a symmetric quiver.

``H_gamma`` is the ring of polynomials in ``x[i, a]`` (``1 <= a <= gamma[i]``)
invariant under permuting the slots of each vertex.  The product of
``H_g1 x H_g2 -> H_(g1+g2)`` is a sum over shuffles of a rational kernel;
it is computed here over the common denominator ``prod_i prod_{a<b} (x_b - x_a)``
and divided out exactly at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterator, Sequence, Tuple

from .errors import (
    NegativeDifference,
    NotHomogeneous,
    NotSymmetric,
    QuiverMismatch,
    ShapeMismatch,
    ZeroDimensionVector,
)
from .poly import (
    Exponent,
    MultiPoly,
    Terms,
    slot_offsets,
    symmetric_orbit_sum,
    t_add_into,
    t_div_linear,
    t_integral,
    t_linear_power,
    t_mul,
    t_permute,
)
from .quiver import DimVector, Quiver, SignTwist, decompositions, euler_form, twist_psi


def is_symmetric(f: MultiPoly, gamma: Sequence[int]) -> bool:
    """True iff ``f`` is fixed by every adjacent transposition inside each vertex."""
    gamma = tuple(gamma)
    if f.gamma != gamma:
        raise ShapeMismatch(f"polynomial has shape {f.gamma}, expected {gamma}")
    for off, g in zip(slot_offsets(gamma), gamma):
        for s in range(off, off + g - 1):
            if f.swap_slots(s, s + 1) != f:
                return False
    return True


@dataclass(frozen=True)
class CohaElement:
    """An element of ``H_gamma``: a slot-symmetric polynomial."""

    gamma: DimVector
    poly: MultiPoly

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(self.gamma))
        if self.poly.gamma != self.gamma:
            raise ShapeMismatch(f"polynomial shape {self.poly.gamma} does not match gamma {self.gamma}")
        if not is_symmetric(self.poly, self.gamma):
            raise NotSymmetric(f"polynomial is not invariant under the slot permutations of {self.gamma}")

    @classmethod
    def _trusted(cls, gamma: DimVector, poly: MultiPoly) -> "CohaElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "gamma", tuple(gamma))
        object.__setattr__(obj, "poly", poly)
        return obj

    @classmethod
    def one(cls, gamma: Sequence[int]) -> "CohaElement":
        return cls(tuple(gamma), MultiPoly.constant(gamma))

    @classmethod
    def unit(cls, vertex_count: int) -> "CohaElement":
        """The unit ``1`` of ``H_0``."""
        return cls.one((0,) * vertex_count)

    def __bool__(self):
        return bool(self.poly)

    def __add__(self, other: "CohaElement") -> "CohaElement":
        return CohaElement._trusted(self.gamma, self.poly + other.poly)

    def __sub__(self, other: "CohaElement") -> "CohaElement":
        return CohaElement._trusted(self.gamma, self.poly - other.poly)

    def __neg__(self):
        return CohaElement._trusted(self.gamma, -self.poly)

    def scale(self, c) -> "CohaElement":
        return CohaElement._trusted(self.gamma, self.poly * Fraction(c))


def sigma(gamma: Sequence[int]) -> CohaElement:
    """``sigma_gamma``, the sum of all slot variables."""
    gamma = tuple(gamma)
    n = sum(gamma)
    terms = {tuple(int(s == t) for s in range(n)): 1 for t in range(n)}
    return CohaElement(gamma, MultiPoly(gamma, terms))


@dataclass(frozen=True)
class Bidegree:
    gamma: DimVector
    k: int

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(tuple(a + b for a, b in zip(self.gamma, other.gamma)), self.k + other.k)

    def __str__(self):
        return f"(({','.join(map(str, self.gamma))}),{self.k})"


def bidegree(Q: Quiver, f: CohaElement) -> Bidegree:
    d = f.poly.homogeneous_degree()
    if d is None:
        raise NotHomogeneous("bidegree needs a nonzero homogeneous polynomial")
    return Bidegree(f.gamma, 2 * d + euler_form(Q, f.gamma, f.gamma))


# shuffle product


def shuffles(
    gamma1: DimVector, gamma2: DimVector, signed: Sequence[int] | None = None
) -> Iterator[Tuple[list[int], int]]:
    """Yield ``(target, sign)`` for every shuffle of ``gamma1`` into ``gamma1 + gamma2``.

    ``target`` maps the standard layout (first-factor slots of each vertex
    first) onto the shuffled one.  ``sign`` is ``(-1)^inversions`` over the
    vertices in ``signed`` (all of them by default); it relates the partial
    denominator to the Vandermonde of those vertices.
    """
    gamma = tuple(a + b for a, b in zip(gamma1, gamma2))
    signed = set(range(len(gamma)) if signed is None else signed)
    offs = slot_offsets(gamma)
    per_vertex = []
    for i, g in enumerate(gamma):
        choices = []
        for chosen in combinations(range(g), gamma1[i]):
            rest = [p for p in range(g) if p not in chosen]
            inv = sum(1 for a in rest for b in chosen if a < b) if i in signed else 0
            choices.append(([offs[i] + p for p in chosen] + [offs[i] + p for p in rest], inv))
        per_vertex.append(choices)
    for combo in product(*per_vertex):
        target: list[int] = []
        inv = 0
        for tgt, c in combo:
            target.extend(tgt)
            inv += c
        yield target, (-1) ** inv


def shuffle_count(gamma1: Sequence[int], gamma2: Sequence[int]) -> int:
    from math import comb

    out = 1
    for a, b in zip(gamma1, gamma2):
        out *= comb(a + b, a)
    return out


def _embed(f: Terms, gamma1: DimVector, gamma2: DimVector, second: bool) -> Terms:
    gamma = tuple(a + b for a, b in zip(gamma1, gamma2))
    offs = slot_offsets(gamma)
    target = []
    src = gamma2 if second else gamma1
    for i, g in enumerate(src):
        base = offs[i] + (gamma1[i] if second else 0)
        target.extend(base + p for p in range(g))
    return t_permute(f, target, sum(gamma))


def _loop_free(arrows: Tuple[Tuple[int, ...], ...]) -> Tuple[int, ...]:
    return tuple(i for i in range(len(arrows)) if arrows[i][i] == 0)


@lru_cache(maxsize=4096)
def _kernel_numerator(arrows: Tuple[Tuple[int, ...], ...], gamma1: DimVector, gamma2: DimVector) -> Tuple:
    """Standard-layout kernel, already over the Vandermonde of the loop-free vertices.

    At a vertex with loops the same-vertex factor ``(x'' - x')^(a_ii - 1)`` is
    a polynomial, so only loop-free vertices keep a denominator.
    """
    gamma = tuple(a + b for a, b in zip(gamma1, gamma2))
    n = sum(gamma)
    offs = slot_offsets(gamma)
    first = [[offs[i] + p for p in range(gamma1[i])] for i in range(len(gamma))]
    second = [[offs[i] + gamma1[i] + p for p in range(gamma2[i])] for i in range(len(gamma))]
    acc: Terms = {(0,) * n: 1}
    for i in range(len(gamma)):
        for j in range(len(gamma)):
            power = arrows[i][j] - (i == j)
            if power <= 0:
                continue
            for s1 in first[i]:
                for s2 in second[j]:
                    acc = t_mul(acc, t_linear_power(n, s2, s1, power))
    for i in _loop_free(arrows):
        for block in (first[i], second[i]):
            for s, t in combinations(block, 2):
                acc = t_mul(acc, t_linear_power(n, t, s, 1))
    return tuple(acc.items())


def _check_quiver(Q: Quiver, *elements: CohaElement):
    for f in elements:
        if len(f.gamma) != Q.vertex_count:
            raise QuiverMismatch(f"element with gamma {f.gamma} does not live over a {Q.vertex_count}-vertex quiver")


def shuffle_multiply(Q: Quiver, f1: CohaElement, f2: CohaElement) -> CohaElement:
    """The Cohomological Hall algebra product ``f1 * f2``."""
    _check_quiver(Q, f1, f2)
    g1, g2 = f1.gamma, f2.gamma
    gamma = tuple(a + b for a, b in zip(g1, g2))
    n = sum(gamma)
    if not f1.poly or not f2.poly:
        return CohaElement._trusted(gamma, MultiPoly(gamma))
    # integer arithmetic throughout; the denominators come back at the end
    p1, d1 = t_integral(f1.poly.terms)
    p2, d2 = t_integral(f2.poly.terms)
    kernel = dict(_kernel_numerator(Q.arrows, g1, g2))
    standard = t_mul(t_mul(_embed(p1, g1, g2, False), _embed(p2, g1, g2, True)), kernel)
    loop_free = _loop_free(Q.arrows)
    total: Terms = {}
    for target, sign in shuffles(g1, g2, loop_free):
        t_add_into(total, t_permute(standard, target, n), sign)
    offs = slot_offsets(gamma)
    for i in loop_free:
        for a in range(offs[i], offs[i] + gamma[i]):
            for b in range(a + 1, offs[i] + gamma[i]):
                total = t_div_linear(total, b, a)
    den = d1 * d2
    return CohaElement._trusted(gamma, MultiPoly._raw(gamma, {e: Fraction(c, den) for e, c in total.items()}))


def star_multiply(Q: Quiver, twist: SignTwist, f1: CohaElement, f2: CohaElement) -> CohaElement:
    """The sign-twisted, super-commutative product."""
    prod = shuffle_multiply(Q, f1, f2)
    return -prod if twist_psi(twist, f1.gamma, f2.gamma) else prod


# graded pieces and the primitive-dimension oracle


@lru_cache(maxsize=None)
def partitions(size: int, max_parts: int, max_part: int | None = None) -> Tuple[Tuple[int, ...], ...]:
    """Partitions of ``size`` with at most ``max_parts`` parts, nonincreasing tuples."""
    if max_part is None:
        max_part = size
    if size == 0:
        return ((),)
    if max_parts == 0:
        return ()
    out = []
    for first in range(min(size, max_part), 0, -1):
        for rest in partitions(size - first, max_parts - 1, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def basis_labels(gamma: DimVector, d: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """Tuples of per-vertex partitions labelling the degree-``d`` basis of ``H_gamma``."""
    out = []

    def rec(i, remaining, acc):
        if i == len(gamma):
            if remaining == 0:
                out.append(tuple(acc))
            return
        for size in range(remaining + 1):
            for lam in partitions(size, gamma[i]):
                rec(i + 1, remaining - size, acc + [lam])

    rec(0, d, [])
    return tuple(sorted(out))


def dominant_exponent(gamma: DimVector, label) -> Exponent:
    """The monomial whose coefficient is the ``label`` coordinate of a symmetric polynomial."""
    out = []
    for g, lam in zip(gamma, label):
        out.extend(lam + (0,) * (g - len(lam)))
    return tuple(out)


@lru_cache(maxsize=None)
def _basis_cached(gamma: DimVector, d: int) -> Tuple[CohaElement, ...]:
    return tuple(
        CohaElement._trusted(gamma, symmetric_orbit_sum(gamma, [dominant_exponent(gamma, lab)]))
        for lab in basis_labels(gamma, d)
    )


def basis(gamma: Sequence[int], d: int) -> list[CohaElement]:
    """Products of monomial symmetric functions, one per vertex, of total degree ``d``."""
    return list(_basis_cached(tuple(gamma), d))


def coordinates(f: CohaElement, d: int) -> Dict[int, Fraction]:
    """Coordinates of a degree-``d`` homogeneous element in :func:`basis`."""
    labels = basis_labels(f.gamma, d)
    out = {}
    for idx, lab in enumerate(labels):
        c = f.poly.terms.get(dominant_exponent(f.gamma, lab))
        if c:
            out[idx] = c
    return out


class Echelon:
    """Incremental exact row reduction; ``rank`` counts independent rows added."""

    def __init__(self):
        self.rows: Dict[int, Dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, vec: Dict[int, Fraction]) -> bool:
        vec = {k: Fraction(v) for k, v in vec.items() if v}
        while vec:
            p = min(vec)
            row = self.rows.get(p)
            if row is None:
                lead = vec[p]
                self.rows[p] = {k: v / lead for k, v in vec.items()}
                return True
            c = vec[p]
            for k, v in row.items():
                nv = vec.get(k, 0) - c * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return False


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def decomposable_span_dim(Q: Quiver, gamma: Sequence[int], d: int) -> int:
    """Rank of the span of products ``H_g1 * H_g2`` inside the degree-``d`` slice of ``H_gamma``."""
    gamma = Q.check_dim(gamma)
    if not any(gamma):
        raise ZeroDimensionVector("decomposable span needs nonzero gamma")
    full = len(basis_labels(gamma, d))
    ech = Echelon()
    for g1, g2 in decompositions(gamma):
        total = d + euler_form(Q, g1, g2)
        if total < 0:
            continue
        for d1 in range(total + 1):
            for b1 in _basis_cached(g1, d1):
                for b2 in _basis_cached(g2, total - d1):
                    prod = shuffle_multiply(Q, b1, b2)
                    if not prod.poly:
                        continue
                    if prod.poly.homogeneous_degree() != d:
                        raise AssertionError(f"product degree {prod.poly.degrees()} != {d}")
                    ech.add(coordinates(prod, d))
                    if ech.rank == full:
                        return full
    return ech.rank


def vprim_dims(Q: Quiver, gamma: Sequence[int], d_max: int) -> list[int]:
    """Dimensions of the primitive generators of ``H_gamma`` in polynomial degrees ``0..d_max``.

    Entry ``d`` is the number of generators at ``k = 2d + chi(gamma, gamma)``.
    """
    gamma = Q.check_dim(gamma)
    if not any(gamma):
        raise ZeroDimensionVector("vprim_dims needs nonzero gamma")
    out = []
    prev = 0
    for d in range(d_max + 1):
        v = len(basis_labels(gamma, d)) - decomposable_span_dim(Q, gamma, d)
        diff = v - prev
        if diff < 0:
            raise NegativeDifference(f"gamma={gamma}, d={d}: indecomposable count dropped from {prev} to {v}")
        out.append(diff)
        prev = v
    return out
