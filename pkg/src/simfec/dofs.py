"""Degrees of freedom, unisolvence, interpolation, and small-simplex dofs.

Three systems of functionals on the order-r trimmed k-form spaces:

* canonical: wedge-integration against monomial test forms face by face;
* harmonic: metric inner products against exact boundary-zero forms, plus
  the plain integral at top degree;
* small: integration over the 1/r-homothetic copies of the k-faces placed
  on the principal lattice.  These overdetermine; a unisolvent subset is
  selected by orthogonal complements in the scalar product that makes the
  small-simplex rows orthonormal, chosen so that the resulting interpolator
  commutes with the exterior derivative.

Row values are exact rationals; harmonic rows carry a symbolic squared
volume factor that unisolvence checks divide out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable

from . import linalg
from .complexes import Simplex, incidence, opposite
from .forms import (BaryForm, affine_pullback, coordinate_labels,
                    coordinate_vector, evaluate, exterior_derivative,
                    integrate, multi_indices, pullback_to_face, wedge)
from .metric import EdgeMetric, mass_entry
from .whitney import (dim_Pminus, d_whitney, mu, spanning_family,
                      trimmed_basis, trimmed_basis0, whitney)


@dataclass
class DofMatrix:
    """Functional-by-generator value matrix with symbolic row scales."""

    row_labels: list
    col_labels: list
    entries: list
    row_vol2: list | None = None

    def rank(self) -> int:
        return linalg.rank(self.entries)

    @property
    def shape(self):
        return (len(self.row_labels), len(self.col_labels))


@dataclass
class DofFunctional:
    """A single degree of freedom attached to a face.

    ``apply_pulled`` consumes the trial form already pulled back to the
    face; ``vol2`` tags rows whose true value carries a sqrt(vol2) factor.
    """

    face: Simplex
    label: tuple
    apply_pulled: Callable
    vol2: Fraction = Fraction(1)

    def __call__(self, u: BaryForm) -> Fraction:
        return self.apply_pulled(pullback_to_face(u, self.face))


@dataclass
class DofSystem:
    """An ordered family of dofs for k-forms of order r on an ambient simplex."""

    ambient: Simplex
    r: int
    k: int
    functionals: list

    def __len__(self):
        return len(self.functionals)

    def faces(self) -> list:
        seen = []
        for f in self.functionals:
            if f.face not in seen:
                seen.append(f.face)
        return seen

    def rows_for(self, face: Simplex) -> list:
        return [f for f in self.functionals if f.face == face]

    def apply(self, u: BaryForm) -> list:
        cache: dict = {}
        out = []
        for f in self.functionals:
            pb = cache.get(f.face)
            if pb is None:
                pb = pullback_to_face(u, f.face)
                cache[f.face] = pb
            out.append(f.apply_pulled(pb))
        return out

    def matrix(self, forms, col_labels=None) -> DofMatrix:
        cols = [self.apply(u) for u in forms]
        entries = linalg.transpose(cols) if cols else []
        return DofMatrix([f.label for f in self.functionals],
                         col_labels or list(range(len(forms))),
                         entries,
                         [f.vol2 for f in self.functionals])


# -- canonical dofs ----------------------------------------------------------

@lru_cache(maxsize=None)
def canonical_dof_system(u: Simplex, r: int, k: int) -> DofSystem:
    """Wedge-integration dofs: for each face T, test against the monomial
    basis of the degree r - dim T + k - 1 forms of complementary degree."""
    if r < 1:
        raise ValueError("r must be >= 1")
    rows = []
    for d in range(k, u.dim + 1):
        s = r - d + k - 1
        if s < 0:
            continue
        for t in u.faces(d):
            for (gamma, J) in coordinate_labels(t, s, d - k):
                v = BaryForm(t, d - k, {(gamma, J): Fraction(1)})
                rows.append(DofFunctional(
                    face=t,
                    label=("canonical", t.vertices, gamma, J),
                    apply_pulled=lambda pb, v=v: integrate(wedge(v, pb))))
    return DofSystem(u, r, k, rows)


def canonical_dofs(u: Simplex, r: int, k: int, family=None) -> DofMatrix:
    system = canonical_dof_system(u, r, k)
    fam = family or spanning_family(u, r, k, "PminusLk")
    return system.matrix(fam.generators, list(fam.index))


def check_unisolvent(system: DofSystem) -> tuple[bool, list]:
    """Third unisolvence characterization: per-face pairing blocks square
    and invertible against the boundary-zero trial spaces, and the total
    dof count equal to the trimmed-space dimension."""
    u, r, k = system.ambient, system.r, system.k
    details = []
    ok = True
    total = len(system)
    expected = dim_Pminus(u.dim, r, k)
    if total != expected:
        ok = False
    details.append(("count", total, expected))
    for t in system.faces():
        rows = system.rows_for(t)
        basis = trimmed_basis0(t, r, k)
        block = [[f.apply_pulled(b) for b in basis] for f in rows]
        square = len(rows) == len(basis)
        invertible = square and (len(rows) == 0 or linalg.rank(block) == len(rows))
        if not (square and invertible):
            ok = False
        details.append(("block", t.vertices, len(rows), len(basis), invertible))
    return ok, details


class Interpolator:
    """Projection onto the trial space matching all dof values."""

    def __init__(self, system: DofSystem, trial=None):
        self.system = system
        self.trial = list(trial) if trial is not None else \
            list(trimmed_basis(system.ambient, system.r, system.k))
        cols = [system.apply(t) for t in self.trial]
        m = linalg.transpose(cols)
        if len(m) != len(self.trial):
            raise ValueError("dof system is not square on the trial basis")
        try:
            self._inv = linalg.inv(m)
        except ValueError as exc:
            raise ValueError("singular dof system") from exc

    def __call__(self, u: BaryForm) -> BaryForm:
        vals = self.system.apply(u)
        coeffs = [sum(row[i] * vals[i] for i in range(len(vals)))
                  for row in self._inv]
        out = BaryForm.zero(self.system.ambient, self.system.k)
        for c, t in zip(coeffs, self.trial):
            if c:
                out = out + c * t
        return out


def interpolate(u: BaryForm, system: DofSystem, trial=None) -> BaryForm:
    return Interpolator(system, trial)(u)


# -- duality matrix ----------------------------------------------------------

def _sign_and_dhat(u: Simplex, t: Simplex):
    """The comparison sign s(T) and the derived Whitney form of the opposite
    face; for T = U the opposite is empty and contributes the constant 1."""
    if t.vertices == u.vertices:
        return t.sign * u.sign, BaryForm.one(u)
    t_hat, s = opposite(u, t)
    return s, d_whitney(u, t_hat)


def d_matrix(u: Simplex, k: int, x):
    """Pointwise duality matrix indexed by the k-faces.

    Row T, column S holds the ratio of binom(n,k) s(T) mu_T lambda_T ^
    d(lambda of the opposite of S) to the top Whitney form, evaluated at x.
    Symmetric positive semidefinite with nonnegative diagonal at every
    point of the closed simplex.
    """
    xs = [Fraction(v) for v in x]
    if len(xs) != len(u.vertices) or sum(xs) != 1:
        raise ValueError("barycentric coordinates must sum to 1")
    n = u.dim
    faces = u.faces(k)
    top_key = tuple(u.vertices[1:])
    denom = Fraction(factorial(n) * u.sign)
    scale = Fraction(comb(n, k))
    rows = []
    for t in faces:
        s_t, _ = _sign_and_dhat(u, t)
        base = wedge(mu(u, t), whitney(u, t))
        row = []
        for s in faces:
            _, dhat = _sign_and_dhat(u, s)
            num = wedge(base, dhat)
            val = evaluate(num, xs).get(top_key, Fraction(0))
            row.append(scale * s_t * val / denom)
        rows.append(row)
    return rows


# -- principal lattice and small simplices -----------------------------------

def principal_lattice(u: Simplex, r: int) -> list:
    """Barycentric points alpha/r for the weight-r multi-indices, lex order."""
    return [tuple(Fraction(a, r) for a in alpha)
            for alpha in multi_indices(len(u.vertices), r)]


@dataclass(frozen=True)
class SmallSimplex:
    """The 1/r copy of a k-face placed at a lattice offset.

    Vertex j sits at (offset + e_{face vertex j}) / r; the orientation is
    inherited from the parent face.
    """

    parent: Simplex
    face: Simplex
    offset: tuple
    order: int

    def points(self) -> list:
        r = self.order
        verts = self.parent.vertices
        out = []
        for tv in self.face.vertices:
            out.append(tuple(Fraction(self.offset[i] + int(v == tv), r)
                             for i, v in enumerate(verts)))
        return out


def small_simplices(u: Simplex, r: int, k: int) -> list:
    out = []
    for t in u.faces(k):
        for off in multi_indices(len(u.vertices), r - 1):
            out.append(SmallSimplex(u, t, off, r))
    return out


def small_integral(form: BaryForm, small: SmallSimplex) -> Fraction:
    """Integral of a k-form over a small k-simplex (exact)."""
    return integrate(affine_pullback(form, small.face, small.points()))


def small_dof_matrix(u: Simplex, r: int, k: int, family=None) -> DofMatrix:
    """Rows: small k-simplices; columns: the trimmed spanning family."""
    fam = family or spanning_family(u, r, k, "PminusLk")
    smalls = small_simplices(u, r, k)
    entries = [[small_integral(g, s) for g in fam.generators] for s in smalls]
    return DofMatrix([(s.face.vertices, s.offset) for s in smalls],
                     list(fam.index), entries)


def whitney_integral_det(u: Simplex, t: Simplex, points) -> Fraction:
    """Integral of the Whitney form of t over the simplex on the given points.

    Uses the vertex-evaluation determinant: the (i, j) entry is the i-th
    barycentric coordinate of t evaluated at the j-th point.
    """
    pts = [tuple(Fraction(x) for x in p) for p in points]
    m = [[pts[j][u.index(tv)] for j in range(len(pts))] for tv in t.vertices]
    return linalg.det(m) * t.sign


def volumetric_check(u: Simplex, t: Simplex, small, metric: EdgeMetric) -> Fraction:
    """Volume interpretation of a lowest-order small dof.

    Computes integral of lambda_T over the small simplex both by the
    determinant formula and by pullback integration, and checks its square
    against vol((U minus T) plus T')^2 / vol(U)^2 via Cayley-Menger,
    exactly.  Returns the absolute value of the integral.
    """
    if isinstance(small, SmallSimplex):
        points = small.points()
        target = small.face
    else:
        points = [tuple(Fraction(x) for x in p) for p in small]
        target = t
    val_det = whitney_integral_det(u, t, points)
    val_pull = integrate(affine_pullback(whitney(u, t), target, points))
    if val_det != val_pull:
        raise ValueError("determinant and pullback integrals disagree")
    rest = [v for v in u.vertices if v not in set(t.vertices)]
    unit_points = [tuple(Fraction(int(w == v)) for w in u.vertices) for v in rest]
    vol2_x = metric.volume_sq_of_points(unit_points + list(points))
    vol2_u = metric.volume_sq()
    if val_det ** 2 * vol2_u != vol2_x:
        raise ValueError("volumetric identity failed")
    return abs(val_det)


# -- harmonic dofs -----------------------------------------------------------

@lru_cache(maxsize=None)
def _d_image_basis(t: Simplex, r: int, j: int) -> tuple:
    """Basis of d applied to the boundary-zero trimmed j-forms on t."""
    if j < 0 or j >= t.dim + 1:
        return ()
    ds = [exterior_derivative(b) for b in trimmed_basis0(t, r, j)]
    ds = [d for d in ds if not d.is_zero()]
    if not ds:
        return ()
    labels = coordinate_labels(t, r, j + 1)
    cols = [coordinate_vector(d, labels) for d in ds]
    _, pivots = linalg.rref(linalg.transpose(cols))
    return tuple(ds[i] for i in pivots)


def harmonic_dof_system(u: Simplex, r: int, k: int, metric: EdgeMetric) -> DofSystem:
    """Metric-dependent dofs built from exact boundary-zero forms.

    On a face T: inner products against a basis of d(E0^{k-1}(T)); at top
    degree (k == dim T) also the plain integral, otherwise inner products
    of the exterior derivative against a basis of d(E0^k(T)).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if u.vertices != metric.simplex.vertices:
        raise ValueError("metric lives on a different simplex")
    rows = []
    for d in range(k, u.dim + 1):
        for t in u.faces(d):
            met = metric.restrict(t)
            vol2 = met.volume_sq()
            for i, v in enumerate(_d_image_basis(t, r, k - 1)):
                rows.append(DofFunctional(
                    face=t, label=("harmonic-a", t.vertices, i), vol2=vol2,
                    apply_pulled=lambda pb, v=v, met=met: mass_entry(pb, v, met).coef))
            if k == d:
                rows.append(DofFunctional(
                    face=t, label=("harmonic-int", t.vertices), vol2=Fraction(1),
                    apply_pulled=lambda pb: integrate(pb)))
            else:
                for i, w in enumerate(_d_image_basis(t, r, k)):
                    rows.append(DofFunctional(
                        face=t, label=("harmonic-da", t.vertices, i), vol2=vol2,
                        apply_pulled=lambda pb, w=w, met=met:
                            mass_entry(exterior_derivative(pb), w, met).coef))
    return DofSystem(u, r, k, rows)


def harmonic_dofs(u: Simplex, r: int, k: int, metric: EdgeMetric, family=None) -> DofMatrix:
    system = harmonic_dof_system(u, r, k, metric)
    fam = family or spanning_family(u, r, k, "PminusLk")
    return system.matrix(fam.generators, list(fam.index))


# -- small-simplex selection (overdetermining -> unisolvent) ----------------

def _small_labels(t: Simplex, r: int, k: int) -> list:
    """Formal basis of the span of t's small k-simplex functionals.

    At k = 0 geometrically coincident lattice points are merged, so the
    labels are the weight-r multi-indices; for k >= 1 the (face, offset)
    pairs are already distinct functionals.
    """
    if k == 0:
        return multi_indices(len(t.vertices), r)
    return [(s, off) for s in t.faces(k)
            for off in multi_indices(len(t.vertices), r - 1)]


def _small_vector_functional(t: Simplex, r: int, k: int, labels, coeffs):
    """Functional on forms-on-t given by coefficients over the small labels."""
    def apply(pb, t=t, r=r, k=k, labels=labels, coeffs=tuple(coeffs)):
        acc = Fraction(0)
        for lab, c in zip(labels, coeffs):
            if c == 0:
                continue
            if k == 0:
                point = tuple(Fraction(a, r) for a in lab)
                acc += c * evaluate(pb, point).get((), Fraction(0))
            else:
                s, off = lab
                acc += c * small_integral(pb, SmallSimplex(t, s, off, r))
        return acc
    return apply


@lru_cache(maxsize=None)
def _small_action_matrix(t: Simplex, r: int, k: int):
    """Rows: small labels of t; columns: basis of the boundary-zero space."""
    labels = _small_labels(t, r, k)
    basis = trimmed_basis0(t, r, k)
    entries = []
    for lab in labels:
        row = []
        for b in basis:
            if k == 0:
                point = tuple(Fraction(a, r) for a in lab)
                row.append(evaluate(b, point).get((), Fraction(0)))
            else:
                s, off = lab
                row.append(small_integral(b, SmallSimplex(t, s, off, r)))
        entries.append(row)
    return labels, basis, entries


@lru_cache(maxsize=None)
def _small_dstar_matrix(t: Simplex, r: int, k: int):
    """Small-simplex Stokes: columns are d* of the degree-k small labels."""
    labels_k = _small_labels(t, r, k)
    labels_km1 = _small_labels(t, r, k - 1)
    index = {lab: i for i, lab in enumerate(labels_km1)}
    m = [[Fraction(0)] * len(labels_k) for _ in labels_km1]
    for j, (s, off) in enumerate(labels_k):
        for v in s.vertices:
            if s.dim == 1:
                o = incidence(s, Simplex((v,)))
                target = tuple(off[i] + int(w == v) for i, w in enumerate(t.vertices))
            else:
                face = Simplex(tuple(w for w in s.vertices if w != v))
                o = incidence(s, face)
                target = (face, off)
            if o:
                m[index[target]][j] += o
    return m


def unisolvent_subset(action, n_labels):
    """Orthogonal-complement selection in the orthonormal small basis.

    Args:
        action: value matrix of the small functionals on a basis of the
            interior space (rows indexed like the small labels); its left
            kernel F0 consists of the functionals vanishing there.
        n_labels: dimension of the formal small space.

    Returns a basis of the orthogonal complement of F0, i.e. the column
    space of the action matrix, in the scalar product that makes the small
    rows orthonormal.  This always splits the space as F0 plus selection.
    """
    at = linalg.transpose(action)
    f0 = linalg.nullspace(at) if at else []
    if not f0:
        return [[Fraction(int(i == j)) for i in range(n_labels)]
                for j in range(n_labels)]
    return linalg.nullspace([list(v) for v in f0])


@lru_cache(maxsize=None)
def small_selected_vectors(t: Simplex, r: int, k: int) -> tuple:
    """Selected unisolvent subset of t's small k-dofs, as coefficient vectors.

    The selection is the orthogonal complement of the functionals that
    vanish on the boundary-zero trimmed space, in the scalar product making
    the small rows orthonormal.  It always restricts to a basis of the
    interior dual space; the associated interpolator commutes with d at
    degrees k <= 1 and for r = 1 (at k >= 2, r >= 2 no unisolvent subset
    of the small dofs can commute: the forced top-degree selection has
    small-Stokes images spanning more directions than any unisolvent
    lower-degree selection can carry).

    Raises ValueError when the small dofs fail to overdetermine the
    interior space.
    """
    labels, basis, action = _small_action_matrix(t, r, k)
    n_labels = len(labels)
    dim0 = len(basis)
    if dim0 == 0:
        return ()
    if linalg.rank(action) < dim0:
        raise ValueError("not overdetermining")
    selected = unisolvent_subset(action, n_labels)
    if len(selected) != dim0:
        raise ValueError(
            f"selection has dimension {len(selected)}, expected {dim0}")
    f0 = linalg.nullspace(linalg.transpose(action))
    stacked = [list(v) for v in f0] + [list(v) for v in selected]
    if linalg.rank(stacked) != n_labels:
        raise ValueError("selection does not complement the vanishing functionals")
    iso = [[sum(v[i] * action[i][b] for i in range(n_labels))
            for b in range(dim0)] for v in selected]
    if linalg.rank(iso) != dim0:
        raise ValueError("selection is not unisolvent on the interior space")
    return tuple(tuple(v) for v in selected)


@lru_cache(maxsize=None)
def small_unisolvent_system(u: Simplex, r: int, k: int) -> DofSystem:
    """Unisolvent dof system selected from the small-simplex dofs."""
    rows = []
    for d in range(k, u.dim + 1):
        for t in u.faces(d):
            labels = _small_labels(t, r, k)
            for i, coeffs in enumerate(small_selected_vectors(t, r, k)):
                rows.append(DofFunctional(
                    face=t, label=("small-sel", t.vertices, i),
                    apply_pulled=_small_vector_functional(t, r, k, labels, coeffs)))
    return DofSystem(u, r, k, rows)


def _embed_small_label(lab, sub: Simplex, sup: Simplex, k: int):
    """Reindex a small label of a face into the parent's label space."""
    pos = [sup.index(v) for v in sub.vertices]
    if k == 0:
        out = [0] * len(sup.vertices)
        for p, a in zip(pos, lab):
            out[p] = a
        return tuple(out)
    s, off = lab
    out = [0] * len(sup.vertices)
    for p, a in zip(pos, off):
        out[p] = a
    return (s, tuple(out))


def check_small_stokes_closure(u: Simplex, r: int, k: int) -> bool:
    """Rows are closed under composition with d: integrating du over a
    small k-simplex equals the signed sum of the integrals of u over its
    boundary small (k-1)-simplices, exactly, for random polynomial u."""
    import random
    from itertools import combinations
    if k < 1:
        return True
    rng = random.Random(20)
    nv = len(u.vertices)
    for _ in range(5):
        terms = {}
        for a in multi_indices(nv, 2):
            for J in combinations(u.vertices, k - 1):
                terms[(a, J)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        v = BaryForm(u, k - 1, terms)
        dv = exterior_derivative(v)
        for s in small_simplices(u, r, k):
            lhs = small_integral(dv, s)
            rhs = Fraction(0)
            for w in s.face.vertices:
                sub = Simplex(tuple(x for x in s.face.vertices if x != w))
                o = incidence(s.face, sub)
                rhs += o * small_integral(v, SmallSimplex(u, sub, s.offset, r))
            if lhs != rhs:
                return False
    return True


def check_small_commutation(u: Simplex, r: int, k: int) -> bool:
    """d-adjointness of the selected small dofs: for every selected
    functional at degree k, its pullback along d decomposes into selected
    functionals of degree k-1 on the face and its subfaces."""
    if k < 1:
        return True
    for d in range(k, u.dim + 1):
        for t in u.faces(d):
            labels_km1 = _small_labels(t, r, k - 1)
            index = {lab: i for i, lab in enumerate(labels_km1)}
            span = []
            for sub in t.all_faces():
                if sub.dim < k - 1:
                    continue
                sub_labels = _small_labels(sub, r, k - 1)
                for coeffs in small_selected_vectors(sub, r, k - 1):
                    vec = [Fraction(0)] * len(labels_km1)
                    for lab, c in zip(sub_labels, coeffs):
                        vec[index[_embed_small_label(lab, sub, t, k - 1)]] += c
                    span.append(vec)
            dmat = _small_dstar_matrix(t, r, k)
            base_rank = linalg.rank(span) if span else 0
            for coeffs in small_selected_vectors(t, r, k):
                image = [sum(dmat[i][j] * coeffs[j] for j in range(len(coeffs)))
                         for i in range(len(labels_km1))]
                if any(image) and linalg.rank(span + [image]) != base_rank:
                    return False
    return True
