"""Exact computations in the Cohomological Hall algebra of a symmetric quiver.

Shuffle products, the q-Pochhammer factorization of the generating series
into quantum DT invariants, and an independent linear-algebra count of
primitive generators to check it against.
"""

__version__ = "0.1.0"

from .quiver import Quiver, SignTwist, build_sign_twist, euler_form, n_bound, parity_epsilon, twist_psi
from .coha import (
    Bidegree,
    CohaElement,
    basis,
    bidegree,
    decomposable_span_dim,
    is_symmetric,
    shuffle_multiply,
    sigma,
    star_multiply,
    vprim_dims,
)
from .dtseries import (
    DTTable,
    compute_dt_table,
    factorize,
    generating_series,
    omega,
    omega_tilde,
    refactor_check,
    reineke_dt,
    verify_bounds,
)

__all__ = [
    "Quiver",
    "SignTwist",
    "build_sign_twist",
    "euler_form",
    "n_bound",
    "parity_epsilon",
    "twist_psi",
    "Bidegree",
    "CohaElement",
    "basis",
    "bidegree",
    "decomposable_span_dim",
    "is_symmetric",
    "shuffle_multiply",
    "sigma",
    "star_multiply",
    "vprim_dims",
    "DTTable",
    "compute_dt_table",
    "factorize",
    "generating_series",
    "omega",
    "omega_tilde",
    "refactor_check",
    "reineke_dt",
    "verify_bounds",
]
