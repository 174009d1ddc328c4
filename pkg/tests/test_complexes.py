"""Incidence, cochain calculus and the simplex duality map."""

import random
from fractions import Fraction

import pytest

from simfec import linalg
from simfec.complexes import (Cochain, Simplex, SimplicialComplex,
                              basis_cochain, boundary,
                              check_augmented_exactness, coboundary,
                              coboundary_matrix, face_complex,
                              hodge_cochain_map, hodge_matrix, incidence,
                              opposite, simplex)

TRI = simplex(0, 1, 2)
TET = simplex(0, 1, 2, 3)


def test_simplex_validation():
    with pytest.raises(ValueError):
        Simplex((1, 0))
    with pytest.raises(ValueError):
        Simplex((0, 0))
    with pytest.raises(ValueError):
        Simplex((0, 1), sign=2)
    assert simplex(2, 0, 1).vertices == (0, 1, 2)


def test_incidence_examples():
    assert incidence(TRI, simplex(1, 2)) == 1
    assert incidence(TRI, simplex(0, 2)) == -1
    assert incidence(TRI, simplex(0)) == 0
    # orientation signs flip the value
    assert incidence(Simplex((0, 1, 2), sign=-1), simplex(1, 2)) == -1


def test_double_face_identity():
    # sum over middle faces of o(T,T'')o(T'',T') vanishes
    for t in [TET] + TET.faces(2):
        for tpp in t.faces(t.dim - 2):
            acc = sum(incidence(t, mid) * incidence(mid, tpp)
                      for mid in t.faces(t.dim - 1))
            assert acc == 0


def test_coboundary_example_indicator_vertex():
    K = face_complex(TRI)
    c = basis_cochain(K, simplex(0))
    dc = coboundary(c)
    assert dc[simplex(0, 1)] == -1
    assert dc[simplex(0, 2)] == -1
    assert dc[simplex(1, 2)] == 0


def test_coboundary_of_constants_vanishes():
    K = face_complex(TET)
    c = Cochain(K, 0, {s: Fraction(1) for s in K.simplices(0)})
    assert all(v == 0 for v in coboundary(c).vector())


def test_delta_delta_zero_random():
    K = face_complex(TET)
    rng = random.Random(0)
    for _ in range(100):
        c = Cochain(K, 0, {s: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                           for s in K.simplices(0)})
        assert all(v == 0 for v in coboundary(coboundary(c)).vector())


def test_boundary_example_and_adjointness():
    K = face_complex(TRI)
    c = basis_cochain(K, simplex(0, 1))
    bc = boundary(c)
    assert bc[simplex(1)] == 1
    assert bc[simplex(0)] == -1
    # boundary of the coherent boundary of the triangle vanishes
    top = basis_cochain(K, TRI)
    assert all(v == 0 for v in boundary(boundary(top)).vector())
    # adjointness <delta a, b> = <a, delta' b>
    rng = random.Random(1)
    for _ in range(20):
        a = Cochain(K, 0, {s: Fraction(rng.randint(-5, 5)) for s in K.simplices(0)})
        b = Cochain(K, 1, {s: Fraction(rng.randint(-5, 5)) for s in K.simplices(1)})
        lhs = sum(x * y for x, y in zip(coboundary(a).vector(), b.vector()))
        rhs = sum(x * y for x, y in zip(a.vector(), boundary(b).vector()))
        assert lhs == rhs


def test_opposite_examples():
    t_hat, s = opposite(TET, simplex(0, 1))
    assert t_hat.vertices == (2, 3) and s == 1
    t_hat, s = opposite(TRI, simplex(1))
    assert t_hat.vertices == (0, 2) and s == -1
    with pytest.raises(ValueError, match="not a face"):
        opposite(TRI, simplex(0, 1, 3))
    with pytest.raises(ValueError, match="opposite is empty"):
        opposite(TRI, TRI)


def test_hodge_vertex_example():
    K = face_complex(TRI)
    out = hodge_cochain_map(TRI, basis_cochain(K, simplex(0)))
    assert out[simplex(1, 2)] == 1
    assert out[simplex(0, 1)] == 0


def test_hodge_intertwines_exactly():
    for u in (TRI, TET, simplex(0, 1, 2, 3, 4)):
        K = face_complex(u)
        for k in range(0, u.dim):
            for s0 in K.simplices(k):
                c = basis_cochain(K, s0)
                assert hodge_cochain_map(u, coboundary(c)).vector() == \
                    boundary(hodge_cochain_map(u, c)).vector()


def test_hodge_matrix_commutation_residual_zero_on_tet():
    for k in range(0, 3):
        s_up = hodge_matrix(TET, k + 1)
        s_k = hodge_matrix(TET, k)
        d_k = coboundary_matrix(face_complex(TET), k)
        # boundary on degree 3-k-1+1 cochains is the transpose of coboundary
        dp = linalg.transpose(coboundary_matrix(face_complex(TET), 3 - k - 2)) \
            if 3 - k - 2 >= 0 else []
        lhs = linalg.matmul(s_up, d_k)
        rhs = linalg.matmul(dp, s_k) if dp else lhs
        assert lhs == rhs


def test_hodge_twice_is_signed_identity_on_triangle():
    m0 = hodge_matrix(TRI, 0)   # C^0 -> C^1
    m1 = hodge_matrix(TRI, 1)   # C^1 -> C^0
    twice = linalg.matmul(m1, m0)
    for i in range(3):
        for j in range(3):
            assert abs(twice[i][j]) == (1 if i == j else 0)


def test_augmented_exactness_single_simplex():
    for u in (simplex(0, 1), TRI, TET, simplex(0, 1, 2, 3, 4)):
        assert check_augmented_exactness(u)


def test_complex_closure_and_errors():
    with pytest.raises(ValueError, match="not closed"):
        SimplicialComplex([TRI])
    K = SimplicialComplex.from_cells([TRI, simplex(1, 2, 3)])
    assert len(K.simplices(1)) == 5
    assert K.dim == 2
    assert simplex(1, 2) in K
    assert K.skeleton(1).dim == 1
