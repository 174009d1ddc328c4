"""Oriented simplicial complexes, incidence numbers and cochains.

A simplex is stored with its vertices sorted ascending plus an explicit
orientation sign relative to the ascending enumeration.  All incidence
computations reduce to the ascending representative, which makes the signs
deterministic: for an ascending (T, T') pair with T' obtained by dropping
the vertex in position p, the incidence number is (-1)**p times the two
orientation signs.  With this convention the Stokes identity holds for the
integration rules of :mod:`simfec.forms`.

Cochain values are exact rationals throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg


@dataclass(frozen=True)
class Simplex:
    """An oriented abstract simplex.

    Attributes:
        vertices: strictly increasing tuple of vertex ids.
        sign: +1 or -1, orientation relative to the ascending enumeration.
    """

    vertices: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a simplex needs at least one vertex")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError("vertices must be strictly increasing")
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def index(self, v: int) -> int:
        return self.vertices.index(v)

    def contains(self, other: "Simplex") -> bool:
        return set(other.vertices) <= set(self.vertices)

    def faces(self, d: int) -> list["Simplex"]:
        """All d-dimensional faces, ascending order, default orientation."""
        if d < 0 or d > self.dim:
            return []
        return [Simplex(c) for c in combinations(self.vertices, d + 1)]

    def all_faces(self) -> list["Simplex"]:
        out = []
        for d in range(self.dim + 1):
            out.extend(self.faces(d))
        return out

    def __repr__(self):
        s = "" if self.sign == 1 else "-"
        return f"{s}<{','.join(map(str, self.vertices))}>"


def simplex(*vertices: int, sign: int = 1) -> Simplex:
    return Simplex(tuple(sorted(vertices)), sign)


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting seq; 0 if entries repeat."""
    n = len(seq)
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if seq[i] == seq[j]:
                return 0
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def incidence(t: Simplex, tp: Simplex) -> Fraction:
    """Incidence number o(T, T').

    Nonzero only when T' is a codimension-1 face of T, in which case it is
    (-1)**p * sign(T) * sign(T') with p the position of the omitted vertex
    in T's ascending vertex list.
    """
    if t.dim != tp.dim + 1 or not t.contains(tp):
        return Fraction(0)
    omitted = set(t.vertices) - set(tp.vertices)
    p = t.index(next(iter(omitted)))
    return Fraction((-1) ** p * t.sign * tp.sign)


def opposite(u: Simplex, t: Simplex) -> tuple[Simplex, int]:
    """Opposite subsimplex of t in u, with the comparison sign.

    Returns (t_hat, s) where t_hat carries the vertices of u not in t and
    s is the parity of the concatenated enumeration (t then t_hat) against
    u's orientation.

    Raises:
        ValueError: if t is not a face of u, or t == u (empty opposite).
    """
    if not u.contains(t):
        raise ValueError("not a face")
    hat = tuple(v for v in u.vertices if v not in set(t.vertices))
    if not hat:
        raise ValueError("opposite is empty")
    t_hat = Simplex(hat)
    positions = [u.index(v) for v in t.vertices + hat]
    s = permutation_sign(positions) * t.sign * t_hat.sign * u.sign
    return t_hat, s


class SimplicialComplex:
    """A finite set of oriented simplices closed under taking faces."""

    def __init__(self, simplices):
        by_dim: dict[int, list[Simplex]] = {}
        seen: dict[tuple, Simplex] = {}
        for s in simplices:
            if s.vertices in seen:
                if seen[s.vertices].sign != s.sign:
                    raise ValueError(f"conflicting orientations for {s.vertices}")
                continue
            seen[s.vertices] = s
            by_dim.setdefault(s.dim, []).append(s)
        for d in by_dim:
            by_dim[d].sort(key=lambda s: s.vertices)
        self._by_dim = by_dim
        self._members = seen
        for s in list(seen.values()):
            for f in s.all_faces():
                if f.vertices not in seen:
                    raise ValueError(f"complex not closed under faces: missing {f.vertices}")

    @classmethod
    def from_cells(cls, cells) -> "SimplicialComplex":
        """Build the closure of the given top cells (faces get sign +1)."""
        seen: dict[tuple, Simplex] = {}
        for c in cells:
            seen.setdefault(c.vertices, c)
            for f in c.all_faces():
                seen.setdefault(f.vertices, f)
        return cls(seen.values())

    @property
    def dim(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def simplices(self, k: int) -> list[Simplex]:
        return list(self._by_dim.get(k, []))

    def member(self, vertices) -> Simplex:
        return self._members[tuple(sorted(vertices))]

    def __contains__(self, s: Simplex) -> bool:
        return s.vertices in self._members

    def skeleton(self, k: int) -> "SimplicialComplex":
        out = []
        for d in range(k + 1):
            out.extend(self.simplices(d))
        return SimplicialComplex(out)

    def top_cells(self) -> list[Simplex]:
        n = self.dim
        return self.simplices(n)


def face_complex(u: Simplex) -> SimplicialComplex:
    """The complex of all faces of a single simplex (u keeps its sign)."""
    cells = {u.vertices: u}
    for f in u.all_faces():
        cells.setdefault(f.vertices, f)
    return SimplicialComplex(cells.values())


@dataclass
class Cochain:
    """A k-cochain: one exact rational per k-simplex of the complex."""

    complex: SimplicialComplex
    degree: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        keys = {s.vertices for s in self.complex.simplices(self.degree)}
        vals = {}
        for s, v in self.values.items():
            if s.vertices not in keys:
                raise ValueError(f"{s} is not a {self.degree}-simplex of the complex")
            vals[self.complex.member(s.vertices)] = Fraction(v)
        for s in self.complex.simplices(self.degree):
            vals.setdefault(s, Fraction(0))
        self.values = vals

    def __getitem__(self, s: Simplex) -> Fraction:
        return self.values[self.complex.member(s.vertices)]

    def vector(self) -> list[Fraction]:
        return [self.values[s] for s in self.complex.simplices(self.degree)]

    def __add__(self, other):
        return Cochain(self.complex, self.degree,
                       {s: v + other.values[s] for s, v in self.values.items()})

    def __eq__(self, other):
        return (self.degree == other.degree and self.vector() == other.vector())


def basis_cochain(k_complex: SimplicialComplex, s: Simplex) -> Cochain:
    return Cochain(k_complex, s.dim, {s: Fraction(1)})


def coboundary_matrix(K: SimplicialComplex, k: int):
    """Matrix of delta: C^k -> C^{k+1}, rows indexed by (k+1)-simplices."""
    rows = K.simplices(k + 1)
    cols = K.simplices(k)
    return [[incidence(s, t) for t in cols] for s in rows]


def coboundary(c: Cochain) -> Cochain:
    K = c.complex
    k = c.degree
    out = {}
    for s in K.simplices(k + 1):
        acc = Fraction(0)
        for t in K.simplices(k):
            o = incidence(s, t)
            if o:
                acc += o * c.values[t]
        out[s] = acc
    return Cochain(K, k + 1, out)


def boundary(c: Cochain) -> Cochain:
    """Adjoint of the coboundary; matrix is the transpose of coboundary's."""
    K = c.complex
    k = c.degree
    out = {}
    for s in K.simplices(k - 1):
        acc = Fraction(0)
        for t in K.simplices(k):
            o = incidence(t, s)
            if o:
                acc += o * c.values[t]
        out[s] = acc
    return Cochain(K, k - 1, out)


def _hodge_level_sign(k: int) -> int:
    # the concatenation parity satisfies the delta/boundary intertwining
    # only up to (-1)^dim; this uniform per-level factor absorbs it
    return (-1) ** (k * (k + 1) // 2)


def hodge_cochain_map(u: Simplex, c: Cochain) -> Cochain:
    """Duality map T |-> s(T) * T_hat on the face complex of a single simplex.

    Sends k-cochains to (dim u - k - 1)-cochains and intertwines the
    coboundary with the boundary operator exactly.
    """
    K = c.complex
    n = u.dim
    if len(K.simplices(n)) != 1 or K.simplices(n)[0].vertices != u.vertices:
        raise ValueError("cochain must live on the face complex of the given simplex")
    k = c.degree
    eps = _hodge_level_sign(k)
    out = {}
    for t in K.simplices(k):
        if t.vertices == u.vertices:
            continue
        t_hat, s = opposite(u, t)
        key = K.member(t_hat.vertices)
        out[key] = out.get(key, Fraction(0)) + eps * s * c.values[t]
    return Cochain(K, n - k - 1, out)


def hodge_matrix(u: Simplex, k: int):
    """Dense matrix of hodge_cochain_map on degree-k cochains."""
    K = face_complex(u)
    rows = K.simplices(u.dim - k - 1)
    cols = K.simplices(k)
    if not rows:
        return []
    eps = _hodge_level_sign(k)
    m = [[Fraction(0)] * len(cols) for _ in rows]
    for j, t in enumerate(cols):
        t_hat, s = opposite(u, t)
        i = rows.index(K.member(t_hat.vertices))
        m[i][j] = Fraction(eps * s)
    return m


def check_augmented_exactness(u: Simplex) -> bool:
    """Exactness of 0 -> R -> C^0 -> ... -> C^n -> 0 on a simplex's faces."""
    K = face_complex(u)
    n = u.dim
    dims = [len(K.simplices(k)) for k in range(n + 1)]
    ranks = [linalg.rank(coboundary_matrix(K, k)) for k in range(n)]
    # augmentation R -> C^0 has rank 1; exactness is a rank ladder
    prev_rank = 1
    for k in range(n):
        if prev_rank + ranks[k] != dims[k]:
            return False
        prev_rank = ranks[k]
    return prev_rank == dims[n]
