import pytest
from hypothesis import given, strategies as st

from cohadt.errors import AsymmetricQuiver, DimensionMismatch, ZeroDimensionVector
from cohadt.quiver import (
    Quiver,
    build_sign_twist,
    decompositions,
    dim_vectors,
    euler_form,
    n_bound,
    parity_epsilon,
    twist_psi,
)


def test_euler_form_examples():
    assert euler_form(Quiver.loops(2), (2,), (3,)) == -6
    Q = Quiver(((1, 2), (2, 0)))
    assert euler_form(Q, (1, 1), (1, 1)) == -3
    assert euler_form(Q, (0, 0), (4, 1)) == 0


def test_m_loop_euler_form_closed_form():
    for m in range(5):
        for a in range(4):
            for b in range(4):
                assert euler_form(Quiver.loops(m), (a,), (b,)) == (1 - m) * a * b


def test_parity_examples():
    assert parity_epsilon(Quiver.loops(0), (1,)) == 1
    assert parity_epsilon(Quiver.loops(0), (0,)) == 0
    assert all(parity_epsilon(Quiver.loops(1), (n,)) == 0 for n in range(6))


def test_n_bound_examples():
    assert n_bound(Quiver.loops(2), (3,)) == 2
    assert n_bound(Quiver.loops(0), (1,)) == 1
    assert n_bound(Quiver(((1, 0), (0, 1))), (1, 1)) == 0
    for m in range(1, 5):
        for n in range(1, 6):
            assert n_bound(Quiver.loops(m), (n,)) == (m - 1) * n * (n - 1) // 2 - n + 2
    with pytest.raises(ZeroDimensionVector):
        n_bound(Quiver.loops(1), (0,))


def test_n_bound_is_one_for_simple_roots():
    Q = Quiver(((0, 3, 1), (3, 2, 0), (1, 0, 5)))
    for i in range(3):
        assert n_bound(Q, Q.unit_vector(i)) == 1


def test_sign_twist_examples():
    t = build_sign_twist(Quiver.loops(1))
    assert (t.eps, t.beta, t.psi) == ((0,), ((0,),), ((0,),))
    t = build_sign_twist(Quiver.loops(0))
    assert (t.eps, t.beta, t.psi) == ((1,), ((0,),), ((0,),))
    t = build_sign_twist(Quiver(((1, 1), (1, 1))))
    assert t.psi == ((0, 1), (0, 0))


def test_single_vertex_psi_vanishes():
    for m in range(4):
        t = build_sign_twist(Quiver.loops(m))
        assert all(twist_psi(t, (a,), (b,)) == 0 for a in range(4) for b in range(4))


def test_validation():
    with pytest.raises(AsymmetricQuiver):
        Quiver(((0, 1), (2, 0)))
    with pytest.raises(ValueError):
        Quiver(((0, -1), (-1, 0)))
    with pytest.raises(ValueError):
        Quiver(())
    with pytest.raises(DimensionMismatch):
        euler_form(Quiver.loops(1), (1, 0), (1,))


def test_dim_vectors_order():
    assert dim_vectors(2, 2, min_total=1) == [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert dim_vectors(1, 0) == [(0,)]


def test_decompositions():
    assert decompositions((2,)) == [((1,), (1,))]
    assert sorted(decompositions((1, 1))) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]


# properties


@st.composite
def quivers(draw, max_vertices=3):
    n = draw(st.integers(1, max_vertices))
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = draw(st.integers(0, 4))
    return Quiver(tuple(tuple(r) for r in a))


@st.composite
def quiver_and_vectors(draw, count):
    Q = draw(quivers())
    vecs = [tuple(draw(st.lists(st.integers(0, 4), min_size=Q.vertex_count, max_size=Q.vertex_count))) for _ in range(count)]
    return Q, vecs


@given(quiver_and_vectors(2))
def test_euler_symmetric(data):
    Q, (a, b) = data
    assert euler_form(Q, a, b) == euler_form(Q, b, a)


@given(quiver_and_vectors(3))
def test_euler_bilinear(data):
    Q, (a, b, c) = data
    ab = tuple(x + y for x, y in zip(a, b))
    assert euler_form(Q, ab, c) == euler_form(Q, a, c) + euler_form(Q, b, c)
    assert euler_form(Q, c, ab) == euler_form(Q, c, a) + euler_form(Q, c, b)


@given(quiver_and_vectors(2))
def test_epsilon_additive_and_matches_chi(data):
    Q, (a, b) = data
    ab = tuple(x + y for x, y in zip(a, b))
    assert parity_epsilon(Q, ab) == parity_epsilon(Q, a) ^ parity_epsilon(Q, b)
    assert parity_epsilon(Q, a) == euler_form(Q, a, a) % 2


@given(quiver_and_vectors(2))
def test_psi_defining_identity(data):
    Q, (a, b) = data
    t = build_sign_twist(Q)
    lhs = twist_psi(t, a, b) ^ twist_psi(t, b, a)
    assert lhs == (euler_form(Q, a, b) + parity_epsilon(Q, a) * parity_epsilon(Q, b)) % 2


@given(quivers())
def test_beta_zero_diagonal(Q):
    t = build_sign_twist(Q)
    assert all(t.beta[i][i] == 0 for i in range(Q.vertex_count))
