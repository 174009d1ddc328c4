"""Whitney forms and the trimmed polynomial form spaces.

The Whitney form of a k-face T inside an ambient simplex U is

    lambda_T = k! * sum_j (-1)^j lambda_{t_j} dl_{t_0} ^ ... ^hat j^ ... ^ dl_{t_k}

for the ascending enumeration (t_0 < ... < t_k), times T's orientation
sign.  The trimmed space of order r consists of the degree-r polynomial
k-forms whose Koszul contraction stays of degree r; it is spanned by the
products (degree r-1 monomials) * (Whitney k-forms) and its interior
(boundary-zero) part by monomial multiples of mu_T * lambda_T where mu_T
is the product of the opposite barycentric coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .complexes import Simplex
from .forms import (BaryForm, canonicalize, exterior_derivative, koszul,
                    multi_indices, polynomial_degree)

SPACE_TAGS = ("PminusLk", "PminusLk0", "PLk")


@lru_cache(maxsize=None)
def whitney(u: Simplex, t: Simplex) -> BaryForm:
    """The Whitney form of the face t, as a form on u."""
    if not u.contains(t):
        raise ValueError("not a face")
    k = t.dim
    terms = {}
    nv = len(u.vertices)
    for j, tv in enumerate(t.vertices):
        alpha = [0] * nv
        alpha[u.index(tv)] = 1
        J = tuple(v for v in t.vertices if v != tv)
        coeff = Fraction(factorial(k) * (-1) ** j * t.sign)
        terms[(tuple(alpha), J)] = coeff
    return BaryForm(u, k, terms)


@lru_cache(maxsize=None)
def d_whitney(u: Simplex, t: Simplex) -> BaryForm:
    """Exterior derivative of the Whitney form of t (a (dim t + 1)-form)."""
    return exterior_derivative(whitney(u, t))


def mu(u: Simplex, t: Simplex) -> BaryForm:
    """Product of the barycentric coordinates opposite to t in u."""
    if not u.contains(t):
        raise ValueError("not a face")
    alpha = tuple(int(v not in set(t.vertices)) for v in u.vertices)
    return BaryForm.monomial(u, alpha)


def dim_P(n: int, r: int, k: int) -> int:
    """dim of degree-r polynomial k-forms on an n-simplex."""
    if k < 0 or k > n or r < 0:
        return 0
    return comb(n + r, r) * comb(n, k)


def dim_Pminus(n: int, r: int, k: int) -> int:
    """dim of the order-r trimmed space of k-forms on an n-simplex."""
    if k < 0 or k > n:
        return 0
    if k == 0:
        return dim_P(n, r, 0)
    if r < 1:
        return 0
    return comb(r + k - 1, k) * comb(n + r, n - k)


@dataclass
class SpanningFamily:
    """A canonical spanning family of one of the tagged polynomial spaces.

    Attributes:
        tag: one of PminusLk, PminusLk0, PLk.
        ambient: the simplex the forms live on.
        r, k: polynomial order and form degree.
        index: list of labels, (face, multi-index) pairs for the trimmed
            tags and (multi-index, J) pairs for the monomial tag.
        generators: the forms, aligned with ``index``.
    """

    tag: str
    ambient: Simplex
    r: int
    k: int
    index: list
    generators: list

    @property
    def space_dim(self) -> int:
        n = self.ambient.dim
        if self.tag == "PminusLk":
            return dim_Pminus(n, self.r, self.k)
        if self.tag == "PLk":
            return dim_P(n, self.r, self.k)
        q = self.r - n + self.k - 1
        if q < 0:
            return 0
        return dim_P(n, q, n - self.k)

    def __len__(self):
        return len(self.generators)


def spanning_family(u: Simplex, r: int, k: int, tag: str = "PminusLk") -> SpanningFamily:
    """Canonical spanning family (basis, for the PLk tag) of a form space."""
    if tag not in SPACE_TAGS:
        raise ValueError(f"unknown space tag {tag!r}")
    n = u.dim
    if k < 0 or k > n:
        raise ValueError("form degree out of range")
    index: list = []
    gens: list = []
    if tag == "PLk":
        if r < 0:
            raise ValueError("polynomial degree must be nonnegative")
        from .forms import coordinate_labels
        for (gamma, J) in coordinate_labels(u, r, k):
            index.append((gamma, J))
            gens.append(BaryForm(u, k, {(gamma, J): Fraction(1)}))
        return SpanningFamily(tag, u, r, k, index, gens)
    if r < 1:
        raise ValueError("trimmed spaces need r >= 1")
    faces = u.faces(k)
    if tag == "PminusLk":
        alphas = multi_indices(len(u.vertices), r - 1)
        for t in faces:
            wt = whitney(u, t)
            for alpha in alphas:
                index.append((t, alpha))
                gens.append(BaryForm(u, k,
                                     {(tuple(x + y for x, y in zip(alpha, a2)), J): c
                                      for (a2, J), c in wt.terms.items()}))
        return SpanningFamily(tag, u, r, k, index, gens)
    # PminusLk0
    q = r - n + k - 1
    if q < 0:
        return SpanningFamily(tag, u, r, k, [], [])
    alphas = multi_indices(len(u.vertices), q)
    for t in faces:
        ((mu_alpha, _mu_J), _c), = mu(u, t).terms.items()
        wt = whitney(u, t)
        for alpha in alphas:
            base = tuple(x + y for x, y in zip(alpha, mu_alpha))
            index.append((t, alpha))
            gens.append(BaryForm(u, k,
                                 {(tuple(x + y for x, y in zip(base, a2)), J): c
                                  for (a2, J), c in wt.terms.items()}))
    return SpanningFamily(tag, u, r, k, index, gens)


def family_matrix(fam: SpanningFamily):
    """Coordinate matrix of a spanning family (rows: canonical coordinates)."""
    from . import linalg
    from .forms import coordinate_labels, coordinate_vector
    labels = coordinate_labels(fam.ambient, fam.r, fam.k)
    cols = [coordinate_vector(g, labels) for g in fam.generators]
    return linalg.transpose(cols)


@lru_cache(maxsize=None)
def trimmed_basis(u: Simplex, r: int, k: int) -> tuple:
    """Deterministic basis of the order-r trimmed k-form space on u.

    Selected as the pivot columns of the spanning-family coordinate matrix.
    """
    from . import linalg
    fam = spanning_family(u, r, k, "PminusLk")
    _, pivots = linalg.rref(family_matrix(fam))
    return tuple(fam.generators[i] for i in pivots)


@lru_cache(maxsize=None)
def trimmed_basis0(u: Simplex, r: int, k: int) -> tuple:
    """Deterministic basis of the boundary-zero trimmed space on u."""
    from . import linalg
    if k < 0 or k > u.dim:
        return ()
    fam = spanning_family(u, r, k, "PminusLk0")
    if not fam.generators:
        return ()
    _, pivots = linalg.rref(family_matrix(fam))
    return tuple(fam.generators[i] for i in pivots)


def is_trimmed(u_form: BaryForm, r: int, base_vertex: int | None = None) -> bool:
    """Membership test for the order-r trimmed space of k-forms.

    True iff the form has polynomial degree <= r and so does its Koszul
    contraction (taken relative to ``base_vertex``, default the lowest).
    """
    b = u_form.ambient.vertices[0] if base_vertex is None else base_vertex
    if polynomial_degree(u_form) > r:
        return False
    if u_form.degree == 0:
        return True
    return polynomial_degree(koszul(u_form, b)) <= r


def is_trimmed_all_bases(u_form: BaryForm, r: int) -> bool:
    return all(is_trimmed(u_form, r, b) for b in u_form.ambient.vertices)
