"""Symmetric quivers, their Euler form, and the sign twist of the product."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence, Tuple

from .errors import AsymmetricQuiver, DimensionMismatch, ZeroDimensionVector

DimVector = Tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    """A finite quiver given by its arrow-count matrix ``arrows[i][j]``.

    Only symmetric quivers are accepted.  Vertex order is the order of rows.
    """

    arrows: Tuple[Tuple[int, ...], ...]
    names: Tuple[str, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.arrows)
        object.__setattr__(self, "arrows", rows)
        n = len(rows)
        if n == 0:
            raise ValueError("a quiver needs at least one vertex")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"arrow matrix row {i} has length {len(row)}, expected {n}")
            for j, a in enumerate(row):
                if a < 0:
                    raise ValueError(f"negative arrow count at ({i},{j})")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise AsymmetricQuiver(
                        f"arrows[{i}][{j}]={rows[i][j]} but arrows[{j}][{i}]={rows[j][i]}"
                    )
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != n or len(set(names)) != n:
                raise ValueError("vertex names must be unique, one per vertex")
            object.__setattr__(self, "names", names)

    @classmethod
    def loops(cls, m: int) -> "Quiver":
        """The one-vertex quiver with ``m`` loops."""
        return cls(((m,),))

    @property
    def vertex_count(self) -> int:
        return len(self.arrows)

    def zero(self) -> DimVector:
        return (0,) * self.vertex_count

    def unit_vector(self, i: int) -> DimVector:
        return tuple(int(j == i) for j in range(self.vertex_count))

    def check_dim(self, gamma: Sequence[int]) -> DimVector:
        gamma = tuple(int(g) for g in gamma)
        if len(gamma) != self.vertex_count:
            raise DimensionMismatch(
                f"dimension vector {gamma} has length {len(gamma)}, quiver has {self.vertex_count} vertices"
            )
        if any(g < 0 for g in gamma):
            raise DimensionMismatch(f"dimension vector {gamma} has a negative entry")
        return gamma


def euler_form(Q: Quiver, gamma1: Sequence[int], gamma2: Sequence[int]) -> int:
    g1, g2 = Q.check_dim(gamma1), Q.check_dim(gamma2)
    n = Q.vertex_count
    diag = sum(g1[i] * g2[i] for i in range(n))
    arrows = sum(Q.arrows[i][j] * g1[i] * g2[j] for i in range(n) for j in range(n))
    return diag - arrows


def parity_epsilon(Q: Quiver, gamma: Sequence[int]) -> int:
    """``chi(gamma, gamma) mod 2``, via the linear formula ``sum (1 + a_ii) gamma_i``."""
    g = Q.check_dim(gamma)
    return sum((1 + Q.arrows[i][i]) * g[i] for i in range(Q.vertex_count)) % 2


def n_bound(Q: Quiver, gamma: Sequence[int]) -> int:
    """The bound ``N_gamma(Q)``: primitive classes live in ``chi <= k < chi + 2N``."""
    g = Q.check_dim(gamma)
    if not any(g):
        raise ZeroDimensionVector("N_gamma is defined only for nonzero gamma")
    n = Q.vertex_count
    a = Q.arrows
    twice = sum(a[i][j] * g[i] * g[j] for i in range(n) for j in range(n) if i != j)
    twice += sum(max(a[i][i] - 1, 0) * g[i] * (g[i] - 1) for i in range(n))
    # both sums are even: off-diagonal terms pair up, g(g-1) is even
    return twice // 2 - sum(g) + 2


@dataclass(frozen=True)
class SignTwist:
    eps: Tuple[int, ...]
    beta: Tuple[Tuple[int, ...], ...]
    psi: Tuple[Tuple[int, ...], ...]


def build_sign_twist(Q: Quiver) -> SignTwist:
    """Parity, its symmetric form, and the upper-triangular choice of ``psi``."""
    n = Q.vertex_count
    e = [Q.unit_vector(i) for i in range(n)]
    eps = tuple(parity_epsilon(Q, e[i]) for i in range(n))
    beta = tuple(
        tuple((euler_form(Q, e[i], e[j]) + eps[i] * eps[j]) % 2 for j in range(n)) for i in range(n)
    )
    psi = tuple(tuple(beta[i][j] if i < j else 0 for j in range(n)) for i in range(n))
    return SignTwist(eps, beta, psi)


def twist_psi(twist: SignTwist, gamma1: Sequence[int], gamma2: Sequence[int]) -> int:
    n = len(twist.eps)
    if len(gamma1) != n or len(gamma2) != n:
        raise DimensionMismatch("dimension vectors do not match the sign twist")
    return sum(twist.psi[i][j] * gamma1[i] * gamma2[j] for i in range(n) for j in range(n)) % 2


def dim_vectors(vertex_count: int, max_total: int, min_total: int = 0) -> list[DimVector]:
    """All dimension vectors of total size in ``[min_total, max_total]``.

    Ordered by total size, then lexicographically.
    """
    vecs = [v for v in product(range(max_total + 1), repeat=vertex_count) if min_total <= sum(v) <= max_total]
    return sorted(vecs, key=lambda v: (sum(v), v))


def decompositions(gamma: DimVector) -> list[tuple[DimVector, DimVector]]:
    """Ordered pairs ``(g1, g2)`` with ``g1 + g2 = gamma`` and both nonzero."""
    out = []
    for g1 in product(*(range(g + 1) for g in gamma)):
        g2 = tuple(g - h for g, h in zip(gamma, g1))
        if any(g1) and any(g2):
            out.append((tuple(g1), g2))
    return out
