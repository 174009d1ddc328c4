"""Exact algebra of barycentric polynomial forms."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from simfec.complexes import face_complex, incidence, simplex
from simfec.forms import (BaryForm, affine_pullback, canonicalize, de_rham,
                          evaluate, evaluate_scalar, exterior_derivative,
                          form_to_text, integrate, integrate_over_face,
                          koszul, monomial_volume_integral, multi_indices,
                          polynomial_degree, pullback_to_face, wedge)
from simfec.whitney import whitney

TRI = simplex(0, 1, 2)
TET = simplex(0, 1, 2, 3)


def rand_form(rng, amb, k, deg, density=0.5):
    terms = {}
    for a in multi_indices(len(amb.vertices), deg):
        for J in combinations(amb.vertices, k):
            if rng.random() < density:
                terms[(a, J)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return BaryForm(amb, k, terms)


# -- canonicalization --------------------------------------------------------

def test_canonicalize_projection():
    rng = random.Random(0)
    for _ in range(20):
        u = rand_form(rng, TET, rng.randint(0, 3), rng.randint(0, 3))
        cu = canonicalize(u)
        assert canonicalize(cu).terms == cu.terms
        assert not canonicalize(u - cu).terms
        # canonical terms avoid the eliminated vertex
        for (alpha, J) in cu.terms:
            assert alpha[0] == 0 and 0 not in J


def test_partition_of_unity_collapses():
    u = BaryForm.zero(TRI, 0)
    for v in TRI.vertices:
        u = u + BaryForm.coordinate(TRI, v)
    cu = canonicalize(u)
    assert cu.terms == {((0, 0, 0), ()): Fraction(1)}
    assert polynomial_degree(u) == 0


# -- wedge -------------------------------------------------------------------

def test_wedge_examples():
    l0, l1 = BaryForm.coordinate(TRI, 0), BaryForm.coordinate(TRI, 1)
    dl1, dl2 = BaryForm.d_coordinate(TRI, 1), BaryForm.d_coordinate(TRI, 2)
    u = wedge(l0, dl1)
    assert wedge(u, u).is_zero()
    assert wedge(dl1, dl2) == -1 * wedge(dl2, dl1)


def test_wedge_bilinear_anticommutative_random():
    rng = random.Random(2)
    for _ in range(10):
        k, l = rng.randint(0, 2), rng.randint(0, 2)
        u = rand_form(rng, TET, k, 2)
        v = rand_form(rng, TET, l, 2)
        assert wedge(u, v) == Fraction((-1) ** (k * l)) * wedge(v, u)


def test_wedge_mismatched_ambient_error():
    with pytest.raises(ValueError):
        wedge(BaryForm.one(TRI), BaryForm.one(TET))


# -- exterior derivative -----------------------------------------------------

def test_d_whitney_edge_example():
    u = BaryForm(TRI, 1, {((1, 0, 0), (1,)): 1, ((0, 1, 0), (0,)): -1})
    assert exterior_derivative(u) == BaryForm(TRI, 2, {((0, 0, 0), (0, 1)): 2})


def test_dd_zero_and_constants():
    u = BaryForm.monomial(TRI, (2, 1, 0))
    assert exterior_derivative(exterior_derivative(u)).is_zero()
    assert exterior_derivative(BaryForm.one(TRI)).is_zero()


def test_leibniz_rule():
    rng = random.Random(3)
    for _ in range(10):
        k = rng.randint(0, 1)
        u = rand_form(rng, TET, k, 2)
        v = rand_form(rng, TET, rng.randint(0, 2), 2)
        lhs = exterior_derivative(wedge(u, v))
        rhs = wedge(exterior_derivative(u), v) + \
            Fraction((-1) ** k) * wedge(u, exterior_derivative(v))
        assert lhs == rhs


# -- koszul ------------------------------------------------------------------

def test_koszul_examples():
    dl1 = BaryForm.d_coordinate(TRI, 1)
    dl0 = BaryForm.d_coordinate(TRI, 0)
    assert koszul(dl1, 0) == BaryForm.coordinate(TRI, 1)
    assert koszul(dl0, 0) == BaryForm.coordinate(TRI, 0) - BaryForm.one(TRI)
    two_form = wedge(dl1, BaryForm.d_coordinate(TRI, 2))
    assert koszul(koszul(two_form, 0), 0).is_zero()
    with pytest.raises(ValueError):
        koszul(dl1, 9)


def test_koszul_koszul_zero_random():
    rng = random.Random(4)
    for _ in range(20):
        u = rand_form(rng, TET, rng.randint(1, 3), 2)
        assert koszul(koszul(u, 1), 1).is_zero()


def test_homotopy_identity_on_canonical_terms():
    # (d kappa + kappa d) u = (|alpha| + k) u for canonical single terms
    rng = random.Random(5)
    for _ in range(30):
        k = rng.randint(0, 3)
        alpha = list(random.Random(rng.random()).choice(multi_indices(4, rng.randint(0, 3))))
        alpha[0] = 0
        J = tuple(sorted(random.Random(rng.random()).sample([1, 2, 3], k)))
        u = BaryForm(TET, k, {(tuple(alpha), J): Fraction(3, 7)})
        lhs = exterior_derivative(koszul(u, 0)) + koszul(exterior_derivative(u), 0)
        assert lhs == (sum(alpha) + k) * u


def test_koszul_against_coordinate_oracle():
    # contraction with the position field, computed in explicit coordinates
    rng = random.Random(6)
    coords = [(Fraction(0), Fraction(0)), (Fraction(3), Fraction(1)),
              (Fraction(1), Fraction(2))]
    # gradients of barycentric coordinates: rows of the inverse affine matrix
    from simfec import linalg
    A = [[Fraction(1)] * 3, [c[0] for c in coords], [c[1] for c in coords]]
    Ainv = linalg.inv(A)
    grads = {v: (Ainv[i][1], Ainv[i][2]) for i, v in enumerate(TRI.vertices)}
    for base in TRI.vertices:
        for _ in range(5):
            u = rand_form(rng, TRI, 2, 2, density=0.8)
            pt_w = [rng.randint(1, 5) for _ in range(3)]
            s = sum(pt_w)
            pt = tuple(Fraction(x, s) for x in pt_w)
            cart = tuple(sum(pt[i] * coords[i][d] for i in range(3)) for d in (0, 1))
            x_vec = tuple(cart[d] - coords[TRI.index(base)][d] for d in (0, 1))
            # contraction: (kappa u)(xi) = u(X, xi) for basis vectors xi
            vals = evaluate(u, pt)
            kv = evaluate(koszul(u, base), pt)
            for e in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))):
                direct = Fraction(0)
                for (j1, j2), c in vals.items():
                    g1, g2 = grads[j1], grads[j2]
                    a1 = g1[0] * x_vec[0] + g1[1] * x_vec[1]
                    a2 = g2[0] * e[0] + g2[1] * e[1]
                    b1 = g1[0] * e[0] + g1[1] * e[1]
                    b2 = g2[0] * x_vec[0] + g2[1] * x_vec[1]
                    direct += c * (a1 * a2 - b1 * b2)
                via_koszul = Fraction(0)
                for (j,), c in kv.items():
                    g = grads[j]
                    via_koszul += c * (g[0] * e[0] + g[1] * e[1])
                assert direct == via_koszul


# -- pullback ----------------------------------------------------------------

def test_pullback_examples():
    e01 = simplex(0, 1)
    u = wedge(BaryForm.coordinate(TRI, 2), BaryForm.d_coordinate(TRI, 1))
    assert pullback_to_face(u, e01).is_zero()
    w = whitney(TRI, e01)
    pb = pullback_to_face(w, e01)
    assert pb == whitney(e01, e01)
    with pytest.raises(ValueError):
        pullback_to_face(u, simplex(0, 3))


def test_pullback_commutes_with_d():
    rng = random.Random(7)
    faces = TET.faces(2) + TET.faces(1)
    for _ in range(50):
        k = rng.randint(0, 1)
        u = rand_form(rng, TET, k, 3)
        f = faces[rng.randrange(len(faces))]
        if k >= f.dim:
            continue
        assert pullback_to_face(exterior_derivative(u), f) == \
            exterior_derivative(pullback_to_face(u, f))


def test_affine_pullback_is_algebra_map():
    rng = random.Random(8)
    pts = [(Fraction(1), 0, 0), (Fraction(1, 2), Fraction(1, 2), 0),
           (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))]
    target = simplex(0, 1, 2)
    for _ in range(10):
        u = rand_form(rng, TRI, 1, 2)
        v = rand_form(rng, TRI, 1, 2)
        lhs = affine_pullback(wedge(u, v), target, pts)
        rhs = wedge(affine_pullback(u, target, pts), affine_pullback(v, target, pts))
        assert lhs == rhs


# -- integration -------------------------------------------------------------

def test_monomial_volume_integral_example():
    assert monomial_volume_integral((1, 1, 0)) == Fraction(1, 12)
    assert monomial_volume_integral((2, 0, 0)) == Fraction(1, 6)
    assert monomial_volume_integral((0, 0, 0)) == 1


def test_whitney_self_integral_all_dims():
    for n in (1, 2, 3, 4):
        u = simplex(*range(n + 1))
        assert integrate(whitney(u, u)) == 1


def test_integrate_degree_mismatch_error():
    with pytest.raises(ValueError):
        integrate(BaryForm.one(TRI))


def test_integration_orientation():
    flipped = simplex(0, 1, sign=-1)
    u = BaryForm(flipped, 1, {((0, 0), (1,)): 1})
    assert integrate(u) == -1


def test_stokes_random():
    rng = random.Random(9)
    for k in (0, 1, 2):
        amb = simplex(*range(k + 2))
        for _ in range(20):
            u = rand_form(rng, amb, k, 3)
            lhs = integrate(exterior_derivative(u))
            rhs = sum(incidence(amb, f) * integrate_over_face(u, f)
                      for f in amb.faces(k))
            assert lhs == rhs


def test_de_rham_commutes_with_coboundary():
    from simfec.complexes import coboundary
    rng = random.Random(10)
    for _ in range(5):
        u = rand_form(rng, TET, 1, 2)
        assert de_rham(exterior_derivative(u)) == coboundary(de_rham(u))


# -- evaluation and serialization --------------------------------------------

def test_evaluate_examples():
    l1 = BaryForm.coordinate(TRI, 1)
    assert evaluate_scalar(l1, (Fraction(1, 2), Fraction(1, 2), 0)) == Fraction(1, 2)
    u = wedge(BaryForm.coordinate(TRI, 0), BaryForm.d_coordinate(TRI, 1))
    center = (Fraction(1, 3),) * 3
    assert evaluate(u, center)[(1,)] == Fraction(1, 3)
    with pytest.raises(ValueError):
        evaluate(l1, (1, 1, 1))


def test_evaluate_linear():
    rng = random.Random(11)
    pt = (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
    for _ in range(10):
        u = rand_form(rng, TRI, 1, 2)
        v = rand_form(rng, TRI, 1, 2)
        eu, ev, es = evaluate(u, pt), evaluate(v, pt), evaluate(u + v, pt)
        keys = set(eu) | set(ev) | set(es)
        for key in keys:
            assert es.get(key, 0) == eu.get(key, 0) + ev.get(key, 0)


def test_serialization_deterministic():
    rng = random.Random(12)
    u = rand_form(rng, TRI, 1, 2)
    text = form_to_text(u)
    assert form_to_text(u + BaryForm.zero(TRI, 1)) == text
    assert "dl(" in text
    # round stability: shuffled construction gives identical text
    items = list(u.terms.items())
    random.Random(99).shuffle(items)
    v = BaryForm(TRI, 1, dict(items))
    assert form_to_text(v) == text
