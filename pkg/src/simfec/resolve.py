"""Canonical resolutions of the trimmed spaces and redundancy elimination.

Spanning families are handled through exact sequences whose stages carry
canonical bases (monomials tensor simplices).  The chain maps are sparse
exact matrices; exactness is certified by a squeeze: once consecutive
compositions are verified to vanish exactly, modular ranks that satisfy
the rank-nullity ladder force the exact ranks to match (each modular rank
is a lower bound and the vanishing compositions give the upper bounds),
so the verdicts are exact even when the ranks are computed mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .complexes import Simplex, incidence
from .forms import (BaryForm, coordinate_labels, coordinate_vector,
                    multi_indices, pullback_to_face)
from .whitney import (SpanningFamily, dim_P, dim_Pminus, d_whitney, mu,
                      spanning_family, trimmed_basis0, whitney)

#: matrices at most this many entries get exact Bareiss ranks directly
_EXACT_RANK_LIMIT = 6000


@dataclass
class LinearMapOnFamilies:
    """Sparse exact matrix between two canonically indexed families."""

    domain: list
    codomain: list
    entries: dict

    @property
    def shape(self):
        return (len(self.codomain), len(self.domain))

    def dense(self):
        m = [[Fraction(0)] * len(self.domain) for _ in self.codomain]
        for (i, j), v in self.entries.items():
            m[i][j] = v
        return m

    def compose(self, other: "LinearMapOnFamilies") -> "LinearMapOnFamilies":
        """self after other (self.domain must be other.codomain)."""
        if len(other.codomain) != len(self.domain):
            raise ValueError("mismatched composition")
        by_col: dict = {}
        for (i, j), v in other.entries.items():
            by_col.setdefault(j, []).append((i, v))
        out: dict = {}
        by_row: dict = {}
        for (i, j), v in self.entries.items():
            by_row.setdefault(j, []).append((i, v))
        for j, mids in by_col.items():
            for mid, v in mids:
                for i, w in by_row.get(mid, ()):
                    key = (i, j)
                    out[key] = out.get(key, Fraction(0)) + w * v
        return LinearMapOnFamilies(other.domain, self.codomain,
                                   {k: v for k, v in out.items() if v != 0})

    def is_zero(self) -> bool:
        return not self.entries

    def rank_exact(self) -> int:
        return linalg.rank(self.dense())

    def rank_mod(self) -> int:
        return linalg.rank_mod(self.dense())

    def to_csv(self) -> str:
        lines = []
        for row in self.dense():
            lines.append(",".join(str(x) for x in row))
        return "\n".join(lines)


def tensor_labels(u: Simplex, q: int, k: int) -> list:
    """Index of P_q tensor C^k: (face, weight-q multi-index) pairs."""
    return [(t, alpha) for t in u.faces(k)
            for alpha in multi_indices(len(u.vertices), q)]


def _form_target(u: Simplex, r: int, k: int, forms, domain) -> LinearMapOnFamilies:
    labels = coordinate_labels(u, r, k)
    entries = {}
    for j, f in enumerate(forms):
        for i, v in enumerate(coordinate_vector(f, labels)):
            if v:
                entries[(i, j)] = v
    return LinearMapOnFamilies(domain, labels, entries)


def _shift_alpha(alpha, pos):
    out = list(alpha)
    out[pos] += 1
    return tuple(out)


def delta_map(u: Simplex, q: int, k: int) -> LinearMapOnFamilies:
    """id tensor coboundary: P_q tensor C^k -> P_q tensor C^{k+1}."""
    dom = tensor_labels(u, q, k)
    cod = tensor_labels(u, q, k + 1)
    index = {lab: i for i, lab in enumerate(cod)}
    entries = {}
    for j, (t, alpha) in enumerate(dom):
        for s in u.faces(k + 1):
            o = incidence(s, t)
            if o:
                entries[(index[(s, alpha)], j)] = o
    return LinearMapOnFamilies(dom, cod, entries)


def delta_prime_map(u: Simplex, q: int, k: int) -> LinearMapOnFamilies:
    """id tensor boundary: P_q tensor C^k -> P_q tensor C^{k-1}."""
    dom = tensor_labels(u, q, k)
    cod = tensor_labels(u, q, k - 1)
    index = {lab: i for i, lab in enumerate(cod)}
    entries = {}
    for j, (t, alpha) in enumerate(dom):
        for s in u.faces(k - 1):
            o = incidence(t, s)
            if o:
                entries[(index[(s, alpha)], j)] = o
    return LinearMapOnFamilies(dom, cod, entries)


def augmentation_map(u: Simplex, q: int) -> LinearMapOnFamilies:
    """Constants into 0-cochains: u maps to sum over vertices of u tensor v."""
    dom = [alpha for alpha in multi_indices(len(u.vertices), q)]
    cod = tensor_labels(u, q, 0)
    index = {lab: i for i, lab in enumerate(cod)}
    entries = {}
    for j, alpha in enumerate(dom):
        for t in u.faces(0):
            entries[(index[(t, alpha)], j)] = Fraction(1)
    return LinearMapOnFamilies(dom, cod, entries)


def sigma_map(u: Simplex, q: int, k: int) -> LinearMapOnFamilies:
    """u tensor T maps to u * d(lambda_T), into P_q Lambda^{k+1} coordinates."""
    dom = tensor_labels(u, q, k)
    forms = []
    for (t, alpha) in dom:
        dw = d_whitney(u, t)
        forms.append(BaryForm(u, k + 1,
                              {(tuple(x + y for x, y in zip(alpha, a)), J): c
                               for (a, J), c in dw.terms.items()}))
    return _form_target(u, q, k + 1, forms, dom)


def sigma0_map(u: Simplex, r: int, k: int) -> LinearMapOnFamilies:
    """u tensor T maps to u * mu_T * lambda_T, onto the boundary-zero space."""
    n = u.dim
    q = r - n + k - 1
    if q < 0:
        raise ValueError("empty target")
    dom = tensor_labels(u, q, k)
    forms = []
    for (t, alpha) in dom:
        ((mu_alpha, _), _c), = mu(u, t).terms.items()
        base = tuple(x + y for x, y in zip(alpha, mu_alpha))
        wt = whitney(u, t)
        forms.append(BaryForm(u, k,
                              {(tuple(x + y for x, y in zip(base, a)), J): c
                               for (a, J), c in wt.terms.items()}))
    return _form_target(u, r, k, forms, dom)


def beta_map(u: Simplex, r: int, k: int) -> LinearMapOnFamilies:
    """u tensor T maps to u * lambda_T, onto the trimmed space coordinates."""
    if r < 1:
        raise ValueError("beta needs r >= 1")
    dom = tensor_labels(u, r - 1, k)
    forms = []
    for (t, alpha) in dom:
        wt = whitney(u, t)
        forms.append(BaryForm(u, k,
                              {(tuple(x + y for x, y in zip(alpha, a)), J): c
                               for (a, J), c in wt.terms.items()}))
    return _form_target(u, r, k, forms, dom)


def tau_map(u: Simplex, r: int, k: int) -> LinearMapOnFamilies:
    """u tensor T maps to sum over i in T of o(T, T minus i) lambda_i u tensor T minus i."""
    if r < 2:
        raise ValueError("tau needs r >= 2")
    dom = tensor_labels(u, r - 2, k + 1)
    cod = tensor_labels(u, r - 1, k)
    index = {lab: i for i, lab in enumerate(cod)}
    entries = {}
    for j, (t, alpha) in enumerate(dom):
        for v in t.vertices:
            face = Simplex(tuple(w for w in t.vertices if w != v))
            o = incidence(t, face)
            key = (index[(face, _shift_alpha(alpha, u.index(v)))], j)
            entries[key] = entries.get(key, Fraction(0)) + o
    return LinearMapOnFamilies(dom, cod, {k_: v for k_, v in entries.items() if v})


@dataclass
class Resolution:
    """An exact sequence 0 -> W_m -> ... -> W_0 -> V -> 0 in coordinates.

    ``epsilon`` maps W_0 into ambient coordinates of V (so its rank must be
    dim V); maps[i] is the map W_{i+1} -> W_i.
    """

    target: str
    target_dim: int
    epsilon: LinearMapOnFamilies
    maps: list

    def stage_dims(self) -> list:
        dims = [len(self.epsilon.domain)]
        for f in self.maps:
            dims.append(len(f.domain))
        return dims

    def verify(self, exact_ranks: bool | None = None) -> "ResolutionReport":
        chain = [self.epsilon] + list(self.maps)
        # consecutive compositions must vanish identically
        compositions_zero = all(chain[i].compose(chain[i + 1]).is_zero()
                                for i in range(len(chain) - 1))
        dims = self.stage_dims()
        if exact_ranks is None:
            exact_ranks = all(f.shape[0] * f.shape[1] <= _EXACT_RANK_LIMIT
                              for f in chain)
        ranks = [f.rank_exact() if exact_ranks else f.rank_mod() for f in chain]
        ladder = []
        ok = ranks[0] == self.target_dim
        ladder.append(("target", ranks[0], self.target_dim))
        for i, d in enumerate(dims):
            out_rank = ranks[i]
            in_rank = ranks[i + 1] if i + 1 < len(ranks) else 0
            ladder.append((f"W{i}", out_rank, in_rank, d))
            if out_rank + in_rank != d:
                ok = False
        # modular ranks are lower bounds; with vanishing compositions the
        # ladder equalities squeeze the exact ranks, so ok is exact either way
        return ResolutionReport(self.target, ok and compositions_zero,
                                compositions_zero, ranks, dims, ladder)


@dataclass
class ResolutionReport:
    target: str
    ok: bool
    compositions_zero: bool
    ranks: list
    dims: list
    ladder: list

    def manifest(self) -> dict:
        return {"target": self.target, "ok": self.ok,
                "stage_dims": self.dims, "ranks": self.ranks}


def resolution_qwedge(u: Simplex, q: int, k: int) -> Resolution:
    """0 -> P_q -> P_q C^0 -> ... -> P_q C^k -> P_q Lambda^{k+1} -> 0."""
    eps = sigma_map(u, q, k)
    maps = []
    for j in range(k, 0, -1):
        maps.append(delta_map(u, q, j - 1))
    maps.append(augmentation_map(u, q))
    return Resolution(f"P_{q}L^{k + 1}({u.dim})", dim_P(u.dim, q, k + 1), eps, maps)


def resolution_trimmed0(u: Simplex, r: int, k: int) -> Resolution:
    """0 -> P_q C^n -> ... -> P_q C^k -> interior trimmed k-forms -> 0."""
    n = u.dim
    q = r - n + k - 1
    eps = sigma0_map(u, r, k)
    maps = [delta_prime_map(u, q, j) for j in range(k + 1, n + 1)]
    dim0 = dim_P(n, q, n - k)
    return Resolution(f"P-_{r}L^{k}_0({n})", dim0, eps, maps)


def resolution_trimmed(u: Simplex, r: int, k: int) -> Resolution:
    """0 -> ... -> P_{r-2} C^{k+1} -> P_{r-1} C^k -> trimmed k-forms -> 0."""
    n = u.dim
    eps = beta_map(u, r, k)
    maps = []
    j = 0
    while r - 2 - j >= 0 and k + 1 + j <= n:
        maps.append(tau_map(u, r - j, k + j))
        j += 1
    return Resolution(f"P-_{r}L^{k}({n})", dim_Pminus(n, r, k), eps, maps)


# -- redundancy elimination --------------------------------------------------

@dataclass
class Redundancy:
    """Kernel matrix B, normalizing matrix C and a deterministic basis choice."""

    b_matrix: list
    c_matrix: list
    basis_columns: list

    @property
    def kernel_dim(self) -> int:
        return len(self.b_matrix[0]) if self.b_matrix and self.b_matrix[0] else 0


def eliminate_redundancy(eps, expected_dim: int | None = None) -> Redundancy:
    """Eliminate the redundancies of a spanning family.

    Args:
        eps: a LinearMapOnFamilies, a SpanningFamily, or a dense matrix whose
            columns are the family in ambient coordinates.
        expected_dim: dimension of the spanned space; when given, a rank
            below it raises ("family does not span").

    Returns:
        Redundancy with B (columns a basis of the kernel, deterministic
        smallest-index pivoting), C = B transposed (so C B is invertible,
        being a Gram matrix of independent columns), and the pivot columns
        as a deterministic basis selection.
    """
    if isinstance(eps, SpanningFamily):
        from .whitney import family_matrix
        dense = family_matrix(eps)
        if expected_dim is None:
            expected_dim = eps.space_dim
    elif isinstance(eps, LinearMapOnFamilies):
        dense = eps.dense()
    else:
        dense = [list(r) for r in eps]
    _, pivots = linalg.rref(dense)
    if expected_dim is not None and len(pivots) < expected_dim:
        raise ValueError("family does not span")
    kernel = linalg.nullspace(dense)
    ncols = len(dense[0]) if dense else 0
    b = [[kernel[j][i] for j in range(len(kernel))] for i in range(ncols)]
    c = linalg.transpose(b)
    return Redundancy(b, c, list(pivots))


# -- geometric decomposition -------------------------------------------------

@dataclass
class GeometricDecomposition:
    """Assembly of the global trimmed space from per-face interior spaces.

    ``labels`` index the global basis as (face, interior index); ``blocks``
    hold the per-face pairing of the face-attached dofs with the interior
    basis (all invertible); ``cell_forms`` realize every global basis
    element on each top cell, with matching traces on shared faces.
    """

    complex_cells: list
    r: int
    k: int
    labels: list
    blocks: dict
    cell_forms: dict

    def block_matrix(self):
        """Block-diagonal matrix of the decomposition (global dof coords)."""
        size = len(self.labels)
        m = [[Fraction(0)] * size for _ in range(size)]
        offset = 0
        for face, (block, _basis) in self.blocks.items():
            b = len(block)
            for i in range(b):
                for j in range(b):
                    m[offset + i][offset + j] = block[i][j]
            offset += b
        return m

    def global_dim(self) -> int:
        return len(self.labels)


def geometric_decomposition(complex_or_cells, r: int, k: int) -> GeometricDecomposition:
    """Build the global basis of the order-r trimmed k-forms on a complex.

    Every face contributes a deterministic basis of its boundary-zero
    space; the global element attached to (face, j) is realized on each
    top cell containing the face by solving the cell's canonical dof
    system with the face block as the only nonzero data.
    """
    from .complexes import SimplicialComplex
    from .dofs import Interpolator, canonical_dof_system

    if isinstance(complex_or_cells, SimplicialComplex):
        K = complex_or_cells
    elif isinstance(complex_or_cells, Simplex):
        K = SimplicialComplex.from_cells([complex_or_cells])
    else:
        K = SimplicialComplex.from_cells(list(complex_or_cells))
    cells = [Simplex(c.vertices) for c in K.top_cells()]

    labels = []
    blocks = {}
    all_faces = []
    for d in range(k, K.dim + 1):
        # blocks use the ascending orientation regardless of complex signs
        all_faces.extend(Simplex(f.vertices) for f in K.simplices(d))
    for face in all_faces:
        basis = trimmed_basis0(face, r, k)
        if not basis:
            continue
        system = canonical_dof_system(face, r, k)
        rows = system.rows_for(face)
        block = [[f.apply_pulled(b) for b in basis] for f in rows]
        if len(rows) != len(basis) or (rows and linalg.rank(block) != len(rows)):
            raise ValueError(f"non-unisolvent dof configuration on {face}")
        blocks[face] = (block, list(basis))
        for j in range(len(basis)):
            labels.append((face, j))

    cell_forms = {}
    for cell in cells:
        system = canonical_dof_system(cell, r, k)
        interp = Interpolator(system)
        ncols = len(system)
        forms = []
        for (face, j) in labels:
            if not cell.contains(face):
                forms.append(BaryForm.zero(cell, k))
                continue
            vals = [Fraction(0)] * ncols
            block, basis = blocks[face]
            target_rows = [i for i, f in enumerate(system.functionals)
                           if f.face.vertices == face.vertices]
            for bi, i in enumerate(target_rows):
                vals[i] = block[bi][j]
            coeffs = [sum(row[i] * vals[i] for i in range(ncols))
                      for row in interp._inv]
            form = BaryForm.zero(cell, k)
            for c, tform in zip(coeffs, interp.trial):
                if c:
                    form = form + c * tform
            forms.append(form)
        cell_forms[cell] = forms
    return GeometricDecomposition(cells, r, k, labels, blocks, cell_forms)
