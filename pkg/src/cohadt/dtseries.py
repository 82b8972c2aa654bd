"""Generating series of the algebra and its q-Pochhammer factorization.

The series lives in ``Q((u))[[t_i]]`` with ``u = q^(1/2)``, truncated at total
``t``-degree ``D``.  Factorizing it into ``(u^k t^gamma; q)_inf`` powers gives
the quantum DT invariants ``c[gamma, k]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import (
    IndexMapMismatch,
    InsufficientPrecision,
    NonIntegralCoefficient,
    NormalizationFailure,
    ZeroDimensionVector,
)
from .qarith import (
    INF,
    HalfLaurent,
    QSeriesTrunc,
    one_minus_q,
    pochhammer_coeff,
    qfactorial_inv,
    series_mul,
    series_sum,
)
from .quiver import DimVector, Quiver, dim_vectors, euler_form, n_bound

log = logging.getLogger(__name__)

DEFAULT_MARGIN = 8


@dataclass
class TSeries:
    """Truncated series in ``t_i`` with :class:`QSeriesTrunc` coefficients.

    A dimension vector missing from ``coeffs`` has coefficient exactly zero.
    """

    vertex_count: int
    max_total_degree: int
    coeffs: Dict[DimVector, QSeriesTrunc] = field(default_factory=dict)

    def __getitem__(self, gamma: DimVector) -> QSeriesTrunc:
        return self.coeffs.get(tuple(gamma), QSeriesTrunc.zero())

    def __mul__(self, other: "TSeries") -> "TSeries":
        D = min(self.max_total_degree, other.max_total_degree)
        buckets: Dict[DimVector, list] = {}
        for g1, a in self.coeffs.items():
            s1 = sum(g1)
            for g2, b in other.coeffs.items():
                if s1 + sum(g2) > D:
                    continue
                g = tuple(x + y for x, y in zip(g1, g2))
                buckets.setdefault(g, []).append(series_mul(a, b))
        return TSeries(self.vertex_count, D, {g: series_sum(v) for g, v in buckets.items()})

    def agrees_with(self, other: "TSeries") -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        D = min(self.max_total_degree, other.max_total_degree)
        return all(self[g].agrees_with(other[g]) for g in keys if sum(g) <= D)


def generating_series(Q: Quiver, D: int, q_ceiling: int) -> TSeries:
    """``sum_gamma (-u)^chi(gamma,gamma) / prod_i (q;q)_{gamma_i} t^gamma``.

    Every coefficient is known below ``u^(2 q_ceiling)``.
    """
    if D < 0:
        raise ValueError("D must be nonnegative")
    ceiling = 2 * q_ceiling
    out = {}
    for gamma in dim_vectors(Q.vertex_count, D):
        chi = euler_form(Q, gamma, gamma)
        coeff = QSeriesTrunc.monomial(chi, (-1) ** (chi % 2))
        # each factorial has floor 0, so computing it to ceiling - chi loses nothing
        for g in gamma:
            coeff = series_mul(coeff, qfactorial_inv(g, ceiling - chi))
        out[gamma] = coeff.truncate(ceiling)
    return TSeries(Q.vertex_count, D, out)


def window(Q: Quiver, gamma: DimVector) -> Tuple[int, int]:
    """Admissible ``[lo, hi)`` range of ``k`` for ``c[gamma, k]``."""
    chi = euler_form(Q, gamma, gamma)
    return chi, chi + 2 * n_bound(Q, gamma)


def default_q_ceiling(Q: Quiver, D: int, margin: int = DEFAULT_MARGIN) -> int:
    """Smallest ``q_ceiling`` whose u-ceiling reaches every window top plus ``margin``."""
    tops = [window(Q, g)[1] for g in dim_vectors(Q.vertex_count, D, min_total=1)]
    need = max(tops, default=0) + margin
    return max(1, math.ceil(need / 2))


@dataclass
class DTTable:
    """Quantum DT invariants ``c[gamma, k] > 0`` with the precision they were extracted at.

    ``ceilings[gamma]`` is the u-exponent below which the extraction at
    ``gamma`` was exact; entries at or above it are unknown.
    """

    entries: Dict[Tuple[DimVector, int], int]
    D: int
    q_ceiling: int | None = None
    ceilings: Dict[DimVector, int] = field(default_factory=dict)
    quiver_digest: str | None = None

    def rows(self) -> list[Tuple[DimVector, int, int]]:
        return sorted((g, k, c) for (g, k), c in self.entries.items())

    def for_gamma(self, gamma: DimVector) -> Dict[int, int]:
        gamma = tuple(gamma)
        return {k: c for (g, k), c in self.entries.items() if g == gamma}

    def without(self, gamma: DimVector, k: int) -> "DTTable":
        entries = dict(self.entries)
        del entries[(tuple(gamma), k)]
        return DTTable(entries, self.D, self.q_ceiling, dict(self.ceilings), self.quiver_digest)


def _pochhammer_power(k: int, e: int, max_m: int, tops: Sequence[float]) -> list[QSeriesTrunc]:
    """Coefficients of ``s^0 .. s^max_m`` in ``(u^k s; q)_inf^e``.

    ``tops[m]`` is the ceiling wanted at ``s^m``.
    """
    base = [QSeriesTrunc.one()]
    base += [pochhammer_coeff(m, int(tops[m]) - k * m).shift(k * m) for m in range(1, max_m + 1)]
    if e < 0:
        base = _s_inverse(base)
    out = [QSeriesTrunc.one()] + [QSeriesTrunc.zero() for _ in range(max_m)]
    for _ in range(abs(e)):
        out = _s_mul(out, base)
    return [c.truncate(t) for c, t in zip(out, tops)]


def _s_mul(a: list[QSeriesTrunc], b: list[QSeriesTrunc]) -> list[QSeriesTrunc]:
    n = len(a)
    return [series_sum(series_mul(a[i], b[m - i]) for i in range(m + 1)) for m in range(n)]


def _s_inverse(a: list[QSeriesTrunc]) -> list[QSeriesTrunc]:
    # a[0] == 1 exactly
    inv = [QSeriesTrunc.one()]
    for m in range(1, len(a)):
        inv.append(-series_sum(series_mul(a[j], inv[m - j]) for j in range(1, m + 1)))
    return inv


def factor_series(
    vertex_count: int, D: int, gamma: DimVector, exponents: Mapping[int, int], known_ceiling: float, floor: float
) -> TSeries:
    """``prod_k (u^k t^gamma; q)_inf^exponents[k]`` along the multiples of ``gamma``.

    Exponents of ``k`` at or above ``known_ceiling`` are unknown; since every
    ``k`` is at least ``floor``, the ``t^(m gamma)`` coefficient is only known
    below ``known_ceiling + (m - 1) floor``.
    """
    size = sum(gamma)
    max_m = D // size
    tops = [INF] + [known_ceiling + (m - 1) * floor for m in range(1, max_m + 1)]
    acc = [QSeriesTrunc.one()] + [QSeriesTrunc.zero(tops[m]) for m in range(1, max_m + 1)]
    for k, e in sorted(exponents.items()):
        if e:
            acc = _s_mul(acc, _pochhammer_power(k, e, max_m, tops))
    acc = [c.truncate(t) for c, t in zip(acc, tops)]
    coeffs = {tuple(m * g for g in gamma): acc[m] for m in range(max_m + 1)}
    return TSeries(vertex_count, D, coeffs)


def _extract(residual: QSeriesTrunc, gamma: DimVector) -> Tuple[Dict[int, int], QSeriesTrunc]:
    """Read ``c[gamma, k]`` off ``(1 - q) * residual = sum_k (-1)^k c u^k``."""
    poly = series_mul(residual, one_minus_q())
    found = {}
    for k, coeff in poly.items():
        c = coeff * (-1) ** (k % 2)
        if c.denominator != 1 or c < 0:
            raise NonIntegralCoefficient(
                f"gamma={gamma}, k={k}: coefficient {coeff} is not (-1)^k times a nonnegative integer"
            )
        found[k] = int(c)
    return found, poly


def factorize(H: TSeries, Q: Quiver, *, require_window: bool = True) -> DTTable:
    """Peel off one Pochhammer factor per dimension vector, smallest total degree first."""
    D = H.max_total_degree
    residual = H
    entries: Dict[Tuple[DimVector, int], int] = {}
    ceilings: Dict[DimVector, int] = {}
    for gamma in dim_vectors(Q.vertex_count, D, min_total=1):
        found, poly = _extract(residual[gamma], gamma)
        lo, hi = window(Q, gamma)
        ceilings[gamma] = poly.ceiling
        if require_window and hi > lo and poly.ceiling < hi:
            raise InsufficientPrecision(
                f"gamma={gamma}: known below u^{poly.ceiling}, admissible k-range reaches {hi - 1}"
            )
        for k, c in found.items():
            entries[(gamma, k)] = c
        exps = {k: -((-1) ** ((k - 1) % 2)) * c for k, c in found.items()}
        inverse = factor_series(Q.vertex_count, D, gamma, exps, poly.ceiling, poly.floor)
        residual = residual * inverse
        log.debug("gamma=%s ceiling=%s found=%s", gamma, poly.ceiling, found)
    return DTTable(entries, D, ceilings=ceilings)


def compute_dt_table(
    Q: Quiver, D: int, q_ceiling: int | None = None, margin: int = DEFAULT_MARGIN, max_rounds: int = 12
) -> DTTable:
    """Generate and factorize ``H_Q``.

    With ``q_ceiling=None`` the precision starts at :func:`default_q_ceiling`
    and is raised until every extraction ceiling clears its window top by
    ``margin``.
    """
    auto = q_ceiling is None
    qc = default_q_ceiling(Q, D, margin) if auto else q_ceiling
    for _ in range(max_rounds):
        table = factorize(generating_series(Q, D, qc), Q, require_window=not auto)
        table.q_ceiling = qc
        if not auto:
            return table
        deficit = 0
        for gamma, ceil in table.ceilings.items():
            deficit = max(deficit, window(Q, gamma)[1] + margin - ceil)
        if deficit <= 0:
            return table
        qc += math.ceil(deficit / 2)
    raise InsufficientPrecision(f"precision still short after {max_rounds} rounds (q_ceiling={qc})")


def omega(table: DTTable, Q: Quiver, gamma: Sequence[int]) -> HalfLaurent:
    """``Omega(gamma) = sum_k c[gamma, k] u^k``."""
    gamma = Q.check_dim(gamma)
    if not any(gamma):
        raise ZeroDimensionVector("Omega is defined for nonzero gamma")
    return HalfLaurent(table.for_gamma(gamma))


def omega_tilde(table: DTTable, Q: Quiver, gamma: Sequence[int]) -> HalfLaurent:
    """``u^(-chi) Omega(gamma)``, checked to be a polynomial in ``q`` with constant term 1."""
    gamma = Q.check_dim(gamma)
    om = omega(table, Q, gamma)
    if not om:
        raise NormalizationFailure(f"Omega({gamma}) is zero")
    chi = euler_form(Q, gamma, gamma)
    res = om.shift(-chi)
    problems = []
    if res[0] != 1:
        problems.append(f"constant term {res[0]} != 1")
    if any(c < 0 for _, c in res):
        problems.append("negative coefficient")
    if res.min_exponent() < 0:
        problems.append(f"negative power u^{res.min_exponent()}")
    if any(e % 2 for e, _ in res):
        problems.append("odd power of u")
    if res.max_exponent() >= 2 * n_bound(Q, gamma):
        problems.append(f"u-degree {res.max_exponent()} >= 2N = {2 * n_bound(Q, gamma)}")
    if problems:
        raise NormalizationFailure(f"Omega~({gamma}): " + "; ".join(problems))
    return res


# bound verification


@dataclass
class GammaBounds:
    gamma: DimVector
    window: Tuple[int, int]
    support: Tuple[int, ...]
    failures: Tuple[str, ...]
    ceiling: int | None
    window_covered: bool | None
    margin_covered: bool | None

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class BoundsReport:
    records: list[GammaBounds]
    margin: int

    @property
    def failures(self) -> list[str]:
        return [f"gamma={r.gamma}: {f}" for r in self.records for f in r.failures]

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def precision_ok(self) -> bool:
        return all(r.window_covered is not False for r in self.records)

    @property
    def margin_ok(self) -> bool:
        return all(r.margin_covered is True for r in self.records)


def verify_bounds(table: DTTable, Q: Quiver, margin: int = DEFAULT_MARGIN) -> BoundsReport:
    """Check parity, window and positivity of every entry; failures are recorded, not raised."""
    gammas = set(g for g, _ in table.entries) | set(dim_vectors(Q.vertex_count, table.D, min_total=1))
    records = []
    for gamma in sorted(gammas, key=lambda g: (sum(g), g)):
        fails = []
        if not any(gamma):
            fails.append("entry at gamma = 0")
            lo = hi = 0
        else:
            lo, hi = window(Q, gamma)
        row = table.for_gamma(gamma)
        for k, c in sorted(row.items()):
            if (k - lo) % 2:
                fails.append(f"parity: k={k} but chi={lo} (mod 2 differs)")
            if k < lo:
                fails.append(f"lower bound: k={k} < chi={lo}")
            if k >= hi:
                fails.append(f"upper bound: k={k} >= chi + 2N = {hi}")
            if not (isinstance(c, int) and c > 0):
                fails.append(f"positivity: c={c} at k={k}")
        ceil = table.ceilings.get(gamma)
        records.append(
            GammaBounds(
                gamma=gamma,
                window=(lo, hi),
                support=tuple(sorted(row)),
                failures=tuple(fails),
                ceiling=ceil,
                window_covered=None if ceil is None else (hi <= lo or ceil >= hi),
                margin_covered=None if ceil is None else ceil >= hi + margin,
            )
        )
    return BoundsReport(records, margin)


def refactor_check(table: DTTable, Q: Quiver, D: int, q_ceiling: int) -> bool:
    """Multiply the factors back out and compare with ``H_Q`` where both are known."""
    H = generating_series(Q, D, q_ceiling)
    product = TSeries(Q.vertex_count, D, {Q.zero(): QSeriesTrunc.one()})
    for gamma in dim_vectors(Q.vertex_count, D, min_total=1):
        row = table.for_gamma(gamma)
        known = table.ceilings.get(gamma, 2 * q_ceiling)
        floor = min(row) if row else known
        exps = {k: (-1) ** ((k - 1) % 2) * c for k, c in row.items()}
        product = product * factor_series(Q.vertex_count, D, gamma, exps, known, floor)
    return product.agrees_with(H)


# the m-loop specialization


def reineke_index(m: int, n: int, kappa: int) -> Tuple[int, int]:
    """Where the factor ``(u^kappa t^n; q)^((-1)^(kappa-1) c)`` of ``H_{Q_m}`` lands.

    Applying ``t -> (-1)^(m-1) t q^((1-m)/2)``, ``q -> q^(-1)`` and then
    ``t -> (-1)^(m-1) t`` turns it into ``(sign q^k t^n; q^-1)``.  Returns
    ``(k, s)`` with ``d[n, k] = s * c``; raises if the image is not of the
    expected shape.  The two sign flips on ``t`` cancel; the full identity is
    checked separately by re-expansion in :func:`reineke_dt`.
    """
    half = -kappa + (1 - m) * n  # power of q^(1/2) in the new argument
    if half % 2:
        raise IndexMapMismatch(f"(n={n}, kappa={kappa}) maps to the half-integral power q^({half}/2)")
    # exponent relation (-1)^(kappa-1) c = -(-1)^((m-1)n) d
    s = -((-1) ** ((kappa - 1) % 2)) * (-1) ** (((m - 1) * n) % 2)
    return half // 2, s


def _reineke_side_by_side(m: int, n_max: int, d: Mapping[Tuple[int, int], int], ceilings: Mapping[int, int]):
    """Expand both sides of the m-loop identity in ``p = q^-1`` (``u^2 = p``)."""
    lhs_c = {}
    top = max(ceilings.values())
    for n in range(n_max + 1):
        shift = -(m - 1) * n * (n - 1)
        c = qfactorial_inv(n, top - shift).shift(shift)
        lhs_c[(n,)] = -c if ((m - 1) * n) % 2 else c
    lhs = TSeries(1, n_max, lhs_c)
    rhs = TSeries(1, n_max, {(0,): QSeriesTrunc.one()})
    for n in range(1, n_max + 1):
        row = {k: v for (nn, k), v in d.items() if nn == n}
        exps = {-2 * k: -((-1) ** (((m - 1) * n) % 2)) * v for k, v in row.items()}
        known = ceilings[n]
        floor = min(exps) if exps else known
        rhs = rhs * factor_series(1, n_max, (n,), exps, known, floor)
    return lhs, rhs


def reineke_dt(m: int, n_max: int, q_ceiling: int | None = None) -> Dict[Tuple[int, int], int]:
    """``d[n, k]`` with ``DT_n^(m)(q) = sum_k d[n, k] q^k``, validated by re-expansion."""
    if m < 1 or n_max < 1:
        raise ValueError("need m >= 1 and n_max >= 1")
    Q = Quiver.loops(m)
    table = compute_dt_table(Q, n_max, q_ceiling)
    d: Dict[Tuple[int, int], int] = {}
    ceilings = {}
    for ((n,), kappa), c in table.entries.items():
        k, s = reineke_index(m, n, kappa)
        d[(n, k)] = s * c
    for (n,), ceil in table.ceilings.items():
        # unknown kappa >= ceil means u-exponent -2k >= ceil + (m-1) n after the map
        ceilings[n] = ceil + (m - 1) * n
    lhs, rhs = _reineke_side_by_side(m, n_max, d, ceilings)
    if not lhs.agrees_with(rhs):
        raise IndexMapMismatch(f"re-expansion of H_{m} disagrees through t^{n_max}")
    if any(v < 0 for v in d.values()):
        raise IndexMapMismatch("negative d after re-indexing")
    return dict(sorted(d.items()))


def reineke_polynomial(d: Mapping[Tuple[int, int], int], n: int) -> Dict[int, int]:
    return {k: v for (nn, k), v in sorted(d.items()) if nn == n and v}


def reineke_checks(m: int, d: Mapping[Tuple[int, int], int], n_max: int) -> Dict[int, list[str]]:
    """Property failures per ``n``: support window, monic top degree, divisibility."""
    out = {}
    for n in range(1, n_max + 1):
        poly = reineke_polynomial(d, n)
        fails = []
        if poly:
            deg = (m - 1) * n * (n - 1) // 2
            if any(v < 0 for v in poly.values()):
                fails.append("negative coefficient")
            if max(poly) != deg:
                fails.append(f"degree {max(poly)} != {deg}")
            elif poly[deg] != 1:
                fails.append(f"leading coefficient {poly[deg]} != 1")
            if min(poly) < n - 1:
                fails.append(f"not divisible by q^{n - 1}")
        out[n] = fails
    return out
