"""Edge-length geometry: volumes, gradient products, mass matrices.

A constant metric on a simplex is recorded by its squared edge lengths.
Squared volumes come from the Cayley-Menger determinant and stay rational;
a real square root enters only when a mass value is finally emitted.  The
pairwise products dl_i . dl_j are recovered by solving, for each vertex i,
the linear system

    sum_{j != i} z_ji * (g_ji + g_ki - g_jk)/2 = -1   for all k != i,

after which dl_i . dl_j = z_ji; the half factor is pinned by requiring
that the edge vector y_ji has squared length g_ji, and is validated
against a coordinate-geometry oracle in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import NamedTuple

from . import linalg
from .complexes import Simplex
from .forms import BaryForm, monomial_volume_integral, wedge


class VolScaled(NamedTuple):
    """An exact value of the shape coef * sqrt(vol2)."""

    coef: Fraction
    vol2: Fraction

    def value(self) -> float:
        return float(self.coef) * math.sqrt(float(self.vol2))

    def scaled_eq(self, other: "VolScaled") -> bool:
        return self.coef ** 2 * self.vol2 == other.coef ** 2 * other.vol2 and \
            (self.coef >= 0) == (other.coef >= 0)


def cayley_menger_det(sq_dists) -> Fraction:
    """Determinant of the augmented squared-distance matrix."""
    n1 = len(sq_dists)
    m = [[Fraction(0)] * (n1 + 1) for _ in range(n1 + 1)]
    for j in range(n1):
        m[0][j + 1] = Fraction(1)
        m[j + 1][0] = Fraction(1)
    for i in range(n1):
        for j in range(n1):
            m[i + 1][j + 1] = Fraction(sq_dists[i][j])
    return linalg.det(m)


def volume_sq_from_distances(sq_dists) -> Fraction:
    """Squared n-volume of a simplex from its pairwise squared distances."""
    n = len(sq_dists) - 1
    if n == 0:
        return Fraction(1)
    d = cayley_menger_det(sq_dists)
    return Fraction((-1) ** (n + 1), (2 ** n) * factorial(n) ** 2) * d


@dataclass(frozen=True)
class EdgeMetric:
    """Squared edge lengths g_ij on an oriented simplex.

    Nondegeneracy (positive squared volume of every face of dimension >= 1)
    is checked on construction.
    """

    simplex: Simplex
    sq_lengths: dict

    def __post_init__(self):
        g = {}
        verts = self.simplex.vertices
        for i, j in combinations(verts, 2):
            key = (i, j)
            if key in self.sq_lengths:
                val = Fraction(self.sq_lengths[key])
            elif (j, i) in self.sq_lengths:
                val = Fraction(self.sq_lengths[(j, i)])
            else:
                raise ValueError(f"missing squared length for edge ({i},{j})")
            if val <= 0:
                raise ValueError(f"nonpositive squared length on edge ({i},{j})")
            g[key] = val
        object.__setattr__(self, "sq_lengths", g)
        for d in range(1, self.simplex.dim + 1):
            for face in self.simplex.faces(d):
                if self.volume_sq(face) <= 0:
                    raise ValueError(f"degenerate metric on face {face}")

    def sq(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        return self.sq_lengths[(i, j) if i < j else (j, i)]

    def restrict(self, face: Simplex) -> "EdgeMetric":
        if not self.simplex.contains(face):
            raise ValueError("not a face")
        sub = {(i, j): self.sq(i, j) for i, j in combinations(face.vertices, 2)}
        return EdgeMetric(face, sub)

    def point_sq_distance(self, p, q) -> Fraction:
        """Squared distance of two barycentric points under the constant metric."""
        verts = self.simplex.vertices
        c = [Fraction(a) - Fraction(b) for a, b in zip(p, q)]
        acc = Fraction(0)
        for a in range(len(verts)):
            for b in range(len(verts)):
                if a == b:
                    continue
                acc += self.sq(verts[a], verts[b]) * c[a] * c[b]
        return -acc / 2

    def volume_sq(self, face: Simplex | None = None) -> Fraction:
        """Squared volume of a face (default: the whole simplex)."""
        face = self.simplex if face is None else face
        verts = face.vertices
        sq = [[self.sq(i, j) for j in verts] for i in verts]
        return volume_sq_from_distances(sq)

    def volume_sq_of_points(self, points) -> Fraction:
        """Squared volume of the simplex spanned by barycentric points."""
        sq = [[self.point_sq_distance(p, q) for q in points] for p in points]
        return volume_sq_from_distances(sq)

    @staticmethod
    def from_points(simplex: Simplex, coords) -> "EdgeMetric":
        """Euclidean metric of a coordinate realization (exact for rationals)."""
        pts = [tuple(Fraction(x) for x in c) for c in coords]
        sub = {}
        for (ia, va), (ib, vb) in combinations(list(enumerate(simplex.vertices)), 2):
            sub[(va, vb)] = sum((a - b) ** 2 for a, b in zip(pts[ia], pts[ib]))
        return EdgeMetric(simplex, sub)

    @staticmethod
    def unit_right(simplex: Simplex) -> "EdgeMetric":
        """Legs of length 1 from the lowest vertex, right angles there."""
        verts = simplex.vertices
        sub = {}
        for i, j in combinations(verts, 2):
            sub[(i, j)] = Fraction(1) if i == verts[0] else Fraction(2)
        return EdgeMetric(simplex, sub)

    @staticmethod
    def equilateral(simplex: Simplex, side=1) -> "EdgeMetric":
        s2 = Fraction(side) ** 2
        return EdgeMetric(simplex, {(i, j): s2 for i, j in combinations(simplex.vertices, 2)})

    def scaled(self, factor_sq) -> "EdgeMetric":
        f = Fraction(factor_sq)
        return EdgeMetric(self.simplex, {k: f * v for k, v in self.sq_lengths.items()})


def cayley_menger_volume_sq(metric: EdgeMetric, face: Simplex | None = None) -> Fraction:
    """Squared volume of a face via the Cayley-Menger determinant.

    Dimension-0 faces return 1 by convention.  Raises on nonpositive values.
    """
    v = metric.volume_sq(face)
    if v <= 0 and (face is None or face.dim >= 1):
        raise ValueError("degenerate metric")
    return v


def grad_products(metric: EdgeMetric):
    """Matrix of the products dl_i . dl_j, indexed like the simplex vertices.

    Rows sum to zero (the differentials sum to zero) and the matrix is
    symmetric; both are verified exactly.
    """
    verts = metric.simplex.vertices
    nv = len(verts)
    G = [[Fraction(0)] * nv for _ in range(nv)]
    for ii, i in enumerate(verts):
        others = [v for v in verts if v != i]
        a = [[(metric.sq(j, i) + metric.sq(k, i) - metric.sq(j, k)) / 2 for j in others]
             for k in others]
        try:
            z = linalg.solve(a, [Fraction(-1)] * (nv - 1))
        except ValueError as exc:
            raise ValueError("degenerate metric") from exc
        for jj, j in enumerate(others):
            G[ii][verts.index(j)] = z[jj]
        G[ii][ii] = -sum(z)
    for a_ in range(nv):
        for b_ in range(a_ + 1, nv):
            if G[a_][b_] != G[b_][a_]:
                raise ValueError("gradient product matrix failed symmetry check")
    return G


def form_inner_product(u: BaryForm, v: BaryForm, metric: EdgeMetric) -> BaryForm:
    """Pointwise metric product of two equal-degree forms, as a scalar form.

    Expands via the Gram-determinant rule on the coframe wedges using the
    gradient products; the representation-redundancy of the barycentric
    coframe is handled automatically because the product matrix already
    encodes sum(dl) = 0.
    """
    if u.degree != v.degree:
        raise ValueError("mismatched degrees")
    if u.ambient.vertices != v.ambient.vertices:
        raise ValueError("mismatched ambient simplex")
    if u.ambient.vertices != metric.simplex.vertices:
        raise ValueError("metric lives on a different simplex")
    G = grad_products(metric)
    verts = u.ambient.vertices
    k = u.degree
    terms: dict = {}
    for (au, Ju), cu in u.terms.items():
        for (av, Jv), cv in v.terms.items():
            m = [[G[verts.index(a)][verts.index(b)] for b in Jv] for a in Ju]
            gram = linalg.det(m) if k else Fraction(1)
            if gram == 0:
                continue
            alpha = tuple(x + y for x, y in zip(au, av))
            key = (alpha, ())
            terms[key] = terms.get(key, Fraction(0)) + cu * cv * gram
    return BaryForm(u.ambient, 0, terms)


def mass_entry(u: BaryForm, v: BaryForm, metric: EdgeMetric) -> VolScaled:
    """L2 inner product over the simplex: exact rational times sqrt(vol^2)."""
    f = form_inner_product(u, v, metric)
    coef = Fraction(0)
    for (alpha, _), c in f.terms.items():
        coef += c * monomial_volume_integral(alpha)
    return VolScaled(coef, metric.volume_sq())


def mass_matrix(forms, metric: EdgeMetric):
    """Symmetric mass matrix of a family of forms.

    Returns:
        (entries, vol2): rational matrix of coefficients and the shared
        squared volume; actual values are entries[i][j] * sqrt(vol2).
    """
    n = len(forms)
    entries = [[Fraction(0)] * n for _ in range(n)]
    vol2 = metric.volume_sq()
    for i in range(n):
        for j in range(i, n):
            coef = mass_entry(forms[i], forms[j], metric).coef
            entries[i][j] = coef
            entries[j][i] = coef
    return entries, vol2


def wedge_integral(u: BaryForm, v: BaryForm) -> Fraction:
    """Metric-free integral of u ^ v over the ambient simplex."""
    from .forms import integrate
    return integrate(wedge(u, v))
