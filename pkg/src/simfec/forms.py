"""Polynomial differential forms in barycentric coordinates, exactly.

A form on an n-simplex is a rational linear combination of terms
``lambda^alpha * dl_{j1} ^ ... ^ dl_{jk}``: ``alpha`` is an exponent tuple
aligned with the ambient simplex's ascending vertex list and J is a sorted
tuple of vertex ids.  Because the barycentric coordinates satisfy
``sum(lambda_i) = 1`` and ``sum(dl_i) = 0`` this representation is not
unique; :func:`canonicalize` eliminates one vertex (by default the lowest)
and gives a normal form used for equality tests and coordinates.

Integration of a k-form over its own k-simplex is metric-free:
``integral dl_{v1}^...^dl_{vk} = 1/k!`` in the ascending coframe.  The
weighted monomial rule for scalar densities (factor ``vol T``) is exposed
separately as :func:`monomial_volume_integral`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

from . import linalg
from .complexes import Cochain, Simplex, face_complex, incidence, permutation_sign


def multi_indices(slots: int, weight: int) -> list[tuple[int, ...]]:
    """All exponent tuples of the given length and total weight, lex order."""
    if slots == 0:
        return [()] if weight == 0 else []
    if slots == 1:
        return [(weight,)]
    out = []
    for first in range(weight, -1, -1):
        for rest in multi_indices(slots - 1, weight - first):
            out.append((first,) + rest)
    return out


def multi_indices_upto(slots: int, weight: int) -> list[tuple[int, ...]]:
    out = []
    for w in range(weight + 1):
        out.extend(multi_indices(slots, w))
    return out


def sort_with_sign(seq) -> tuple[tuple[int, ...], int]:
    """Sorted tuple plus permutation sign; sign 0 on repeats."""
    sign = permutation_sign(seq)
    if sign == 0:
        return (), 0
    return tuple(sorted(seq)), sign


class BaryForm:
    """A polynomial differential form on a fixed ambient simplex."""

    __slots__ = ("ambient", "degree", "terms")

    def __init__(self, ambient: Simplex, degree: int, terms=None):
        if degree < 0 or degree > ambient.dim:
            if terms:
                raise ValueError("degree out of range for ambient simplex")
        self.ambient = ambient
        self.degree = degree
        clean = {}
        vset = set(ambient.vertices)
        nv = len(ambient.vertices)
        for (alpha, J), c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            if len(alpha) != nv:
                raise ValueError("multi-index length must match ambient vertex count")
            if len(J) != degree or any(j not in vset for j in J):
                raise ValueError("bad coframe index set")
            if tuple(sorted(J)) != tuple(J):
                raise ValueError("coframe index set must be sorted")
            clean[(tuple(alpha), tuple(J))] = clean.get((tuple(alpha), tuple(J)), Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v != 0}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ambient: Simplex, degree: int = 0) -> "BaryForm":
        return BaryForm(ambient, degree, {})

    @staticmethod
    def one(ambient: Simplex) -> "BaryForm":
        alpha = (0,) * len(ambient.vertices)
        return BaryForm(ambient, 0, {(alpha, ()): Fraction(1)})

    @staticmethod
    def monomial(ambient: Simplex, alpha, coeff=1) -> "BaryForm":
        return BaryForm(ambient, 0, {(tuple(alpha), ()): Fraction(coeff)})

    @staticmethod
    def coordinate(ambient: Simplex, v: int) -> "BaryForm":
        """The barycentric coordinate lambda_v."""
        alpha = tuple(int(w == v) for w in ambient.vertices)
        return BaryForm(ambient, 0, {(alpha, ()): Fraction(1)})

    @staticmethod
    def d_coordinate(ambient: Simplex, v: int) -> "BaryForm":
        """The constant one-form dl_v."""
        alpha = (0,) * len(ambient.vertices)
        return BaryForm(ambient, 1, {(alpha, (v,)): Fraction(1)})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "BaryForm") -> "BaryForm":
        if self.ambient.vertices != other.ambient.vertices or self.degree != other.degree:
            if not self.terms:
                return other
            if not other.terms:
                return self
            raise ValueError("mismatched ambient simplex or degree")
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BaryForm(self.ambient, self.degree, out)

    def __sub__(self, other: "BaryForm") -> "BaryForm":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "BaryForm":
        s = Fraction(scalar)
        return BaryForm(self.ambient, self.degree,
                        {k: s * c for k, c in self.terms.items()})

    def __neg__(self):
        return -1 * self

    def is_zero(self) -> bool:
        return not canonicalize(self).terms

    def __eq__(self, other):
        if not isinstance(other, BaryForm):
            return NotImplemented
        if self.ambient.vertices != other.ambient.vertices:
            return False
        if self.degree != other.degree:
            return (self - self).terms == {} and not self.terms and not other.terms
        return (self - other).is_zero()

    def __repr__(self):
        if not self.terms:
            return f"BaryForm(0, deg={self.degree} on {self.ambient})"
        return "BaryForm[" + "; ".join(form_to_text(self).splitlines()) + "]"


def wedge(u: BaryForm, v: BaryForm) -> BaryForm:
    """Exterior product; bilinear, graded-anticommutative."""
    if u.ambient.vertices != v.ambient.vertices:
        raise ValueError("mismatched ambient simplex")
    out: dict = {}
    for (au, Ju), cu in u.terms.items():
        for (av, Jv), cv in v.terms.items():
            J, sign = sort_with_sign(Ju + Jv)
            if sign == 0:
                continue
            alpha = tuple(a + b for a, b in zip(au, av))
            key = (alpha, J)
            out[key] = out.get(key, Fraction(0)) + sign * cu * cv
    deg = u.degree + v.degree
    if deg > u.ambient.dim:
        # no strictly increasing J of that length exists; the product is 0
        return BaryForm.zero(u.ambient, min(deg, u.ambient.dim))
    return BaryForm(u.ambient, deg, out)


def scalar_times(p: BaryForm, u: BaryForm) -> BaryForm:
    """Multiply a form by a 0-form (same as wedge, kept for readability)."""
    return wedge(p, u)


def exterior_derivative(u: BaryForm) -> BaryForm:
    """d(lambda^alpha dl_J) = sum_i alpha_i lambda^(alpha - e_i) dl_i ^ dl_J."""
    amb = u.ambient
    if u.degree >= amb.dim:
        return BaryForm.zero(amb, min(u.degree + 1, amb.dim))
    out: dict = {}
    for (alpha, J), c in u.terms.items():
        for i, a in enumerate(alpha):
            if a == 0:
                continue
            v = amb.vertices[i]
            if v in J:
                continue
            Jn, sign = sort_with_sign((v,) + J)
            na = list(alpha)
            na[i] -= 1
            key = (tuple(na), Jn)
            out[key] = out.get(key, Fraction(0)) + c * a * sign
    return BaryForm(amb, u.degree + 1, out)


def koszul(u: BaryForm, base_vertex: int) -> BaryForm:
    """Contraction with the position field relative to the chosen origin.

    In barycentric terms the contraction of dl_i is lambda_i - [i == base].
    """
    amb = u.ambient
    if base_vertex not in amb.vertices:
        raise ValueError("base vertex not in simplex")
    if u.degree == 0:
        return BaryForm.zero(amb, 0)
    out: dict = {}
    for (alpha, J), c in u.terms.items():
        for m, j in enumerate(J):
            sgn = (-1) ** m
            Jrest = J[:m] + J[m + 1:]
            na = list(alpha)
            na[amb.index(j)] += 1
            key = (tuple(na), Jrest)
            out[key] = out.get(key, Fraction(0)) + c * sgn
            if j == base_vertex:
                key0 = (alpha, Jrest)
                out[key0] = out.get(key0, Fraction(0)) - c * sgn
    return BaryForm(amb, u.degree - 1, out)


def canonicalize(u: BaryForm, base: int | None = None) -> BaryForm:
    """Normal form eliminating one vertex via the barycentric relations.

    Substitutes ``lambda_b = 1 - sum(lambda_v)`` and
    ``dl_b = -sum(dl_v)`` for the eliminated vertex b (default: lowest).
    The map is linear and idempotent; two forms are equal iff their
    canonicalizations have identical term maps.
    """
    amb = u.ambient
    b = amb.vertices[0] if base is None else base
    if b not in amb.vertices:
        raise ValueError("base vertex not in simplex")
    bi = amb.index(b)
    others = [v for v in amb.vertices if v != b]
    out: dict = {}

    for (alpha, J), c in u.terms.items():
        # 1. rewrite dl_b inside the coframe part
        parts: list[tuple[tuple, tuple, Fraction]]
        if b in J:
            pos = J.index(b)
            rest = J[:pos] + J[pos + 1:]
            parts = []
            for v in others:
                if v in rest:
                    continue
                seq = rest[:pos] + (v,) + rest[pos:]
                Jn, sg = sort_with_sign(seq)
                if sg:
                    parts.append((alpha, Jn, -sg * c))
        else:
            parts = [(alpha, J, c)]
        # 2. expand lambda_b powers as (1 - sum lambda_v)^a
        for (al, Jn, cc) in parts:
            a = al[bi]
            reduced = list(al)
            reduced[bi] = 0
            poly = {tuple(reduced): cc}
            for _ in range(a):
                nxt: dict = {}
                for mono, cm in poly.items():
                    nxt[mono] = nxt.get(mono, Fraction(0)) + cm
                    for v in others:
                        vm = list(mono)
                        vm[amb.index(v)] += 1
                        key = tuple(vm)
                        nxt[key] = nxt.get(key, Fraction(0)) - cm
                poly = nxt
            for mono, cm in poly.items():
                key = (mono, Jn)
                out[key] = out.get(key, Fraction(0)) + cm
    return BaryForm(amb, u.degree, out)


def polynomial_degree(u: BaryForm, base: int | None = None) -> int:
    """Intrinsic polynomial degree (of the canonical representative); -1 for 0."""
    cu = canonicalize(u, base)
    if not cu.terms:
        return -1
    return max(sum(alpha) for alpha, _ in cu.terms)


def pullback_to_face(u: BaryForm, face: Simplex) -> BaryForm:
    """Pullback along the inclusion of a face (foreign coordinates vanish)."""
    amb = u.ambient
    if not amb.contains(face):
        raise ValueError("not a face of the ambient simplex")
    fset = set(face.vertices)
    out: dict = {}
    for (alpha, J), c in u.terms.items():
        if any(a > 0 and amb.vertices[i] not in fset for i, a in enumerate(alpha)):
            continue
        if any(j not in fset for j in J):
            continue
        na = tuple(alpha[amb.index(v)] for v in face.vertices)
        out[(na, J)] = out.get((na, J), Fraction(0)) + c
    return BaryForm(face, u.degree, out) if u.degree <= face.dim else BaryForm.zero(face, face.dim)


def affine_pullback(u: BaryForm, target: Simplex, points) -> BaryForm:
    """Pullback along the affine map sending target's vertices to barycentric points.

    Args:
        u: form on some ambient simplex U.
        target: abstract simplex parametrizing the image simplex.
        points: one barycentric coordinate tuple (w.r.t. U) per target vertex.

    Substitutes lambda_i -> sum_j points[j][i] lambda'_j and likewise for the
    differentials; this is the unique algebra map extending the affine
    substitution.
    """
    amb = u.ambient
    nv = len(amb.vertices)
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if len(pts) != len(target.vertices):
        raise ValueError("need one point per target vertex")
    for p in pts:
        if len(p) != nv or sum(p) != 1:
            raise ValueError("points must be barycentric w.r.t. the ambient simplex")
    tverts = target.vertices
    out: dict = {}
    for (alpha, J), c in u.terms.items():
        # scalar part: product of substituted coordinates
        poly = {(0,) * len(tverts): c}
        for i, a in enumerate(alpha):
            for _ in range(a):
                nxt: dict = {}
                for mono, cm in poly.items():
                    for j in range(len(tverts)):
                        w = pts[j][i]
                        if w == 0:
                            continue
                        vm = list(mono)
                        vm[j] += 1
                        key = tuple(vm)
                        nxt[key] = nxt.get(key, Fraction(0)) + cm * w
                poly = nxt
        # form part: wedge of substituted differentials
        k = len(J)
        if k == 0:
            wedges = {(): Fraction(1)}
        else:
            rows = [[pts[j][amb.index(jj)] for j in range(len(tverts))] for jj in J]
            wedges = {}
            for sel in combinations(range(len(tverts)), k):
                m = [[rows[a][b] for b in sel] for a in range(k)]
                dv = linalg.det(m)
                if dv:
                    wedges[tuple(tverts[b] for b in sel)] = dv
        for mono, cm in poly.items():
            for Jn, dv in wedges.items():
                key = (mono, Jn)
                out[key] = out.get(key, Fraction(0)) + cm * dv
    if u.degree > target.dim:
        return BaryForm.zero(target, target.dim)
    return BaryForm(target, u.degree, out)


def evaluate(u: BaryForm, point) -> dict:
    """Evaluate at a barycentric point; returns canonical coframe coefficients.

    The result maps each sorted J (not containing the eliminated vertex) to
    the rational coefficient of dl_J there.
    """
    amb = u.ambient
    pt = [Fraction(x) for x in point]
    if len(pt) != len(amb.vertices) or sum(pt) != 1:
        raise ValueError("barycentric coordinates must sum to 1")
    cu = canonicalize(u)
    out: dict = {}
    for (alpha, J), c in cu.terms.items():
        val = c
        for a, x in zip(alpha, pt):
            if a:
                val *= x ** a
        if val:
            out[J] = out.get(J, Fraction(0)) + val
    return {J: v for J, v in out.items() if v != 0}


def evaluate_scalar(u: BaryForm, point) -> Fraction:
    """Value of a 0-form at a barycentric point."""
    if u.degree != 0:
        raise ValueError("not a scalar form")
    return evaluate(u, point).get((), Fraction(0))


def integrate(u: BaryForm, volume=Fraction(1)):
    """Integral of a top-degree form over its own (oriented) simplex.

    Metric-free: the ascending coframe dl_{v1}^...^dl_{vn} integrates to
    1/n!.  The optional ``volume`` factor scales the result (callers that
    integrate densities against a metric volume pass vol T here).
    """
    amb = u.ambient
    n = amb.dim
    if u.degree != n:
        raise ValueError("degree must equal the simplex dimension")
    cu = canonicalize(u)
    total = Fraction(0)
    for (alpha, _J), c in cu.terms.items():
        num = 1
        for a in alpha:
            num *= factorial(a)
        total += c * Fraction(num, factorial(sum(alpha) + n))
    return total * amb.sign * volume


def integrate_over_face(u: BaryForm, face: Simplex, volume=Fraction(1)):
    return integrate(pullback_to_face(u, face), volume)


def monomial_volume_integral(alpha) -> Fraction:
    """Weighted monomial integral: coefficient of vol T for lambda^alpha.

    Value is ``alpha_0! ... alpha_k! k! / (|alpha| + k)!`` on a k-simplex.
    """
    k = len(alpha) - 1
    num = factorial(k)
    for a in alpha:
        num *= factorial(a)
    return Fraction(num, factorial(sum(alpha) + k))


def de_rham(u: BaryForm) -> Cochain:
    """Face integrals of a polynomial k-form on its ambient's face complex."""
    K = face_complex(u.ambient)
    vals = {f: integrate_over_face(u, f) for f in K.simplices(u.degree)}
    return Cochain(K, u.degree, vals)


# -- canonical coordinates -------------------------------------------------

def coordinate_labels(ambient: Simplex, r: int, k: int):
    """Labels of the canonical coordinates of P_r Lambda^k on the simplex.

    Monomials avoid the lowest vertex (exponent 0 there) and coframe sets
    avoid it too, so the labels form a true basis.
    """
    nv = len(ambient.vertices)
    gammas = []
    for g in multi_indices_upto(nv, r):
        if g[0] == 0:
            gammas.append(g)
    Js = [tuple(c) for c in combinations(ambient.vertices[1:], k)]
    return [(g, J) for g in gammas for J in Js]


def coordinate_vector(u: BaryForm, labels) -> list[Fraction]:
    cu = canonicalize(u)
    index = {lab: i for i, lab in enumerate(labels)}
    vec = [Fraction(0)] * len(labels)
    for key, c in cu.terms.items():
        if key not in index:
            raise ValueError(f"form has a term outside the coordinate range: {key}")
        vec[index[key]] = c
    return vec


# -- serialization ---------------------------------------------------------

def form_to_text(u: BaryForm) -> str:
    """Deterministic text serialization, one term per line.

    Format: ``p/q * l0^a0*...*ln^an * dl(j1,...,jk)`` in the canonical
    representation, terms sorted by (J, alpha).
    """
    cu = canonicalize(u)
    verts = cu.ambient.vertices
    lines = []
    for (alpha, J) in sorted(cu.terms, key=lambda key: (key[1], key[0])):
        c = cu.terms[(alpha, J)]
        mono = "*".join(f"l{v}^{a}" for v, a in zip(verts, alpha))
        lines.append(f"{c} * {mono} * dl({','.join(map(str, J))})")
    return "\n".join(lines)
