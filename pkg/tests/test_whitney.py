"""Whitney forms, trimmed spaces, dimension identities."""

import random
from fractions import Fraction
from math import comb

import pytest

from simfec import linalg
from simfec.complexes import Simplex, incidence, simplex
from simfec.forms import (BaryForm, coordinate_labels, coordinate_vector,
                          exterior_derivative, integrate_over_face, koszul,
                          multi_indices, pullback_to_face, wedge)
from simfec.whitney import (SpanningFamily, dim_P, dim_Pminus, d_whitney,
                            family_matrix, is_trimmed, is_trimmed_all_bases,
                            mu, spanning_family, trimmed_basis,
                            trimmed_basis0, whitney)

TRI = simplex(0, 1, 2)
TET = simplex(0, 1, 2, 3)
PENT = simplex(0, 1, 2, 3, 4)


def trimmed_dim_oracle(n, r, k):
    """Dimension of {u in P_r L^k : deg kappa(u) <= r} by exact kernel count.

    Independent route: impose, on the canonical coordinates of P_r L^k,
    the vanishing of the degree-(r+1) part of the Koszul contraction.
    """
    u = Simplex(tuple(range(n + 1)))
    labels = coordinate_labels(u, r, k)
    if k == 0:
        return len(labels)
    out_labels = coordinate_labels(u, r + 1, k - 1)
    rows = []
    for lab in labels:
        form = BaryForm(u, k, {lab: Fraction(1)})
        vec = coordinate_vector(koszul(form, 0), out_labels)
        rows.append(vec)
    # keep only the degree r+1 coordinates as constraints
    keep = [i for i, (g, _J) in enumerate(out_labels) if sum(g) == r + 1]
    constraints = [[row[i] for row in rows] for i in keep]
    return len(labels) - linalg.rank(constraints)


# -- whitney form identities ---------------------------------------------------

def test_whitney_edge_formula():
    w = whitney(TRI, simplex(0, 1))
    expect = BaryForm(TRI, 1, {((1, 0, 0), (1,)): 1, ((0, 1, 0), (0,)): -1})
    assert w == expect


def test_whitney_dof_property_all_faces_of_4simplex():
    for k in range(0, 5):
        for t in PENT.faces(k):
            w = whitney(PENT, t)
            for tp in PENT.faces(k):
                expected = 1 if tp == t else 0
                assert integrate_over_face(w, tp) == expected


def test_whitney_recursion_all_faces_of_4simplex():
    for k in range(1, 5):
        for t in PENT.faces(k):
            acc = BaryForm.zero(PENT, k)
            for v in t.vertices:
                f = Simplex(tuple(w for w in t.vertices if w != v))
                o = incidence(t, f)
                acc = acc + o * wedge(BaryForm.coordinate(PENT, v), d_whitney(PENT, f))
            assert acc == whitney(PENT, t)


def test_whitney_derivative_identity():
    # d(lambda_T) = sum over cofaces o(T+i, T) lambda_{T+i}
    for k in range(0, 4):
        for t in PENT.faces(k):
            acc = BaryForm.zero(PENT, k + 1)
            for v in PENT.vertices:
                if v in t.vertices:
                    continue
                up = Simplex(tuple(sorted(t.vertices + (v,))))
                acc = acc + incidence(up, t) * whitney(PENT, up)
            assert acc == d_whitney(PENT, t)


def test_whitney_dependence_relation():
    # sum over i of o(T, T minus i) lambda_i lambda_{T minus i} = 0
    for big in [TRI, TET, PENT]:
        for k in range(1, big.dim + 1):
            for t in big.faces(k):
                acc = BaryForm.zero(big, k - 1)
                for v in t.vertices:
                    f = Simplex(tuple(w for w in t.vertices if w != v))
                    o = incidence(t, f)
                    acc = acc + o * wedge(BaryForm.coordinate(big, v), whitney(big, f))
                assert acc.is_zero()


def test_whitney_orientation_sign():
    t_plus = simplex(0, 1)
    t_minus = Simplex((0, 1), sign=-1)
    assert whitney(TRI, t_minus) == -1 * whitney(TRI, t_plus)


def test_whitney_not_a_face_error():
    with pytest.raises(ValueError):
        whitney(TRI, simplex(0, 3))


# -- dimension formulas --------------------------------------------------------

def test_dim_examples():
    assert dim_Pminus(3, 3, 1) == 45
    assert dim_Pminus(2, 1, 2) == 1
    assert dim_P(2, 2, 1) == 12


def test_dim_against_koszul_kernel_oracle():
    for n in (1, 2, 3):
        for r in (1, 2, 3):
            for k in range(0, n + 1):
                assert trimmed_dim_oracle(n, r, k) == dim_Pminus(n, r, k)


def test_face_sum_identity():
    # dim Pminus_r L^k = sum over faces V of dim P_{r - dim V + k - 1} L^{dim V - k}(V)
    for n in (1, 2, 3, 4):
        for r in (1, 2, 3, 4):
            for k in range(0, n + 1):
                total = 0
                for d in range(0, n + 1):
                    total += comb(n + 1, d + 1) * dim_P(d, r - d + k - 1, d - k)
                assert total == dim_Pminus(n, r, k)


def test_bossavit_counting_identity():
    # dim Pminus_r L^k = dim P_{r-1} x C^k - dim Pminus_{r-1} L^{k+1}
    for n in (1, 2, 3, 4):
        for r in (2, 3, 4):
            for k in range(0, n + 1):
                tensor = dim_P(n, r - 1, 0) * comb(n + 1, k + 1)
                assert dim_Pminus(n, r, k) == tensor - dim_Pminus(n, r - 1, k + 1)


# -- spanning families -----------------------------------------------------------

def test_family_examples():
    fam = spanning_family(TRI, 1, 1)
    assert len(fam) == 3 and linalg.rank(family_matrix(fam)) == 3
    fam = spanning_family(TET, 2, 1)
    assert len(fam) == 24 and linalg.rank(family_matrix(fam)) == 20
    fam0 = spanning_family(TRI, 2, 1, "PminusLk0")
    # 3 generators mu_T lambda_T; their rank is the interior dimension 2
    # (the mu-weighted dependence relation is the one-dimensional kernel)
    assert len(fam0) == 3
    assert linalg.rank(family_matrix(fam0)) == 2 == fam0.space_dim


def test_family_rank_equals_dimension():
    for n in (1, 2, 3, 4):
        u = Simplex(tuple(range(n + 1)))
        for r in (1, 2, 3, 4):
            for k in range(0, n + 1):
                fam = spanning_family(u, r, k)
                expected = dim_Pminus(n, r, k)
                m = family_matrix(fam)
                # modular rank is a lower bound; membership of every
                # generator in the trimmed space (exact, via the Koszul
                # degree test) plus the kernel-count oracle for small n cap
                # it above, so equality certifies the exact rank
                assert linalg.rank_mod(m) == expected
                if n <= 3 or (r <= 2):
                    assert linalg.rank(m) == expected
                assert all(is_trimmed(g, r) for g in fam.generators)


def test_interior_family_boundary_traces_vanish():
    for n in (1, 2, 3):
        u = Simplex(tuple(range(n + 1)))
        for r in (1, 2, 3):
            for k in range(0, n + 1):
                fam = spanning_family(u, r, k, "PminusLk0")
                for g in fam.generators:
                    for d in range(k, n):
                        for f in u.faces(d):
                            assert pullback_to_face(g, f).is_zero()


def test_empty_interior_family_is_legal():
    fam = spanning_family(TRI, 1, 1, "PminusLk0")
    assert len(fam) == 0 and fam.space_dim == 0


def test_plk_family_is_basis():
    fam = spanning_family(TRI, 2, 1, "PLk")
    assert len(fam) == dim_P(2, 2, 1) == 12
    assert linalg.rank(family_matrix(fam)) == 12


def test_family_tag_validation():
    with pytest.raises(ValueError):
        spanning_family(TRI, 0, 1, "PminusLk")
    with pytest.raises(ValueError):
        spanning_family(TRI, 1, 1, "bogus")


# -- membership ------------------------------------------------------------------

def test_is_trimmed_examples():
    for k in range(0, 4):
        for t in TET.faces(k):
            assert is_trimmed_all_bases(whitney(TET, t), 1)
    u = wedge(BaryForm.coordinate(TRI, 0),
              wedge(BaryForm.d_coordinate(TRI, 1), BaryForm.d_coordinate(TRI, 2)))
    assert is_trimmed_all_bases(u, 2)
    assert not is_trimmed(u, 1)
    assert is_trimmed(BaryForm.zero(TRI, 1), 1)


def test_is_trimmed_base_independence_random():
    rng = random.Random(13)
    fam = spanning_family(TET, 2, 1)
    for _ in range(20):
        u = BaryForm.zero(TET, 1)
        for g in fam.generators:
            if rng.random() < 0.3:
                u = u + Fraction(rng.randint(-3, 3), rng.randint(1, 3)) * g
        results = {is_trimmed(u, 2, b) for b in TET.vertices}
        assert len(results) == 1


def test_trimmed_bases_have_right_sizes():
    for n in (1, 2, 3):
        u = Simplex(tuple(range(n + 1)))
        for r in (1, 2):
            for k in range(0, n + 1):
                assert len(trimmed_basis(u, r, k)) == dim_Pminus(n, r, k)
                q = r - n + k - 1
                expect0 = dim_P(n, q, n - k) if q >= 0 else 0
                assert len(trimmed_basis0(u, r, k)) == expect0


def test_numbering_invariance_of_ranks():
    rng = random.Random(14)
    for _ in range(3):
        new_ids = rng.sample(range(20), 4)
        relabeled = Simplex(tuple(sorted(new_ids)))
        for r in (1, 2):
            for k in (0, 1, 2):
                a = linalg.rank(family_matrix(spanning_family(TET, r, k)))
                b = linalg.rank(family_matrix(spanning_family(relabeled, r, k)))
                assert a == b


def test_mu_product():
    m = mu(TET, simplex(1, 2))
    assert m == BaryForm.monomial(TET, (1, 0, 0, 1))
