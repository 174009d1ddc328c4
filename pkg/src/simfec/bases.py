"""Parametrized scalar polynomial bases on a simplex.

A node table t[i][j] (one row per barycentric coordinate, r entries each)
defines the products

    C^alpha = beta_0[alpha_0](l_0) * ... * beta_k[alpha_k](l_k),
    beta_i[j](t) = (t - t_i[0]) ... (t - t_i[j-1]),

which form a basis of the degree-r polynomials whenever no multi-index
alpha with |alpha| < r has sum_i t_i[alpha_i] == 1.  All-zero nodes give
the Bernstein monomials l^alpha, nodes j/r give a Lagrange-type basis on
the principal lattice.  The rescaled family C~^alpha = r!/alpha! C^alpha
supports a generalized de Casteljau evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .complexes import Simplex
from .forms import BaryForm, multi_indices, multi_indices_upto


@dataclass(frozen=True)
class NodeTable:
    """Evaluation nodes t[i][j], i over the k+1 vertices, 0 <= j < r."""

    nodes: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.nodes)
        object.__setattr__(self, "nodes", rows)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("node rows must have equal length")

    @property
    def order(self) -> int:
        return len(self.nodes[0]) if self.nodes else 0

    def __getitem__(self, i):
        return self.nodes[i]


def bernstein_nodes(k: int, r: int) -> NodeTable:
    return NodeTable(tuple((Fraction(0),) * r for _ in range(k + 1)))


def lagrange_nodes(k: int, r: int) -> NodeTable:
    return NodeTable(tuple(tuple(Fraction(j, r) for j in range(r)) for _ in range(k + 1)))


def violating_index(nodes: NodeTable, r: int):
    """First multi-index alpha with |alpha| < r and sum t_i[alpha_i] == 1, or None."""
    k = len(nodes.nodes) - 1
    for alpha in multi_indices_upto(k + 1, r - 1):
        if sum(nodes[i][alpha[i]] for i in range(k + 1)) == 1:
            return alpha
    return None


def is_admissible(nodes: NodeTable, r: int) -> bool:
    return violating_index(nodes, r) is None


def _beta_poly(nodes_row, j) -> list[Fraction]:
    """Coefficients (ascending) of (t - t[0])...(t - t[j-1])."""
    coeffs = [Fraction(1)]
    for m in range(j):
        root = nodes_row[m]
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] -= root * c
        coeffs = new
    return coeffs


def basis_family(t: Simplex, r: int, nodes: NodeTable, check: bool = True) -> list:
    """The polynomials C^alpha, expanded in the monomial representation.

    Returns:
        list of (alpha, BaryForm) pairs indexed by the weight-r multi-indices.

    Raises:
        ValueError: if the node table violates the admissibility condition
        (some |alpha| < r has node sum 1), or (with check=True) if the
        resulting family fails the exact change-of-basis invertibility test.
    """
    k = t.dim
    if len(nodes.nodes) != k + 1 or nodes.order < r:
        raise ValueError("node table shape must be (k+1) x r")
    bad = violating_index(nodes, r)
    if bad is not None:
        raise ValueError(f"admissibility condition violated at multi-index {bad}")
    betas = [[_beta_poly(nodes[i], j) for j in range(r + 1)] for i in range(k + 1)]
    out = []
    for alpha in multi_indices(k + 1, r):
        poly = BaryForm.one(t)
        for i, a in enumerate(alpha):
            coeffs = betas[i][a]
            li_pow = BaryForm.one(t)
            acc = BaryForm.zero(t, 0)
            for c in coeffs:
                acc = acc + c * li_pow
                li_pow = _shift(li_pow, t, i)
            poly = _poly_mul(poly, acc)
        out.append((alpha, poly))
    if check:
        m = change_of_basis(t, r, out)
        if not linalg.is_invertible(m):
            raise ValueError("node family is not a basis")
    return out


def _shift(p: BaryForm, t: Simplex, i: int) -> BaryForm:
    """Multiply a scalar polynomial by lambda_{t.vertices[i]}."""
    terms = {}
    for (alpha, J), c in p.terms.items():
        na = list(alpha)
        na[i] += 1
        terms[(tuple(na), J)] = c
    return BaryForm(t, 0, terms)


def _poly_mul(p: BaryForm, q: BaryForm) -> BaryForm:
    terms: dict = {}
    for (a, _), c in p.terms.items():
        for (b, _), d in q.terms.items():
            key = (tuple(x + y for x, y in zip(a, b)), ())
            terms[key] = terms.get(key, Fraction(0)) + c * d
    return BaryForm(p.ambient, 0, terms)


def homogenize(p: BaryForm, r: int) -> dict:
    """Rewrite a degree-<=r scalar polynomial in the weight-r monomials.

    Multiplies each monomial by the appropriate power of sum(lambda) = 1;
    the result is a map from weight-r multi-indices to coefficients.
    """
    nv = len(p.ambient.vertices)
    out: dict = {}
    for (alpha, _), c in p.terms.items():
        deficit = r - sum(alpha)
        if deficit < 0:
            raise ValueError("polynomial degree exceeds r")
        for extra in multi_indices(nv, deficit):
            key = tuple(a + e for a, e in zip(alpha, extra))
            w = _multinomial(extra)
            out[key] = out.get(key, Fraction(0)) + c * w
    return {k: v for k, v in out.items() if v != 0}


def _multinomial(alpha) -> int:
    num = factorial(sum(alpha))
    for a in alpha:
        num //= factorial(a)
    return num


def change_of_basis(t: Simplex, r: int, family) -> list:
    """Square matrix expressing the C^alpha in the weight-r monomial basis."""
    monos = multi_indices(t.dim + 1, r)
    index = {m: i for i, m in enumerate(monos)}
    cols = []
    for _alpha, poly in family:
        h = homogenize(poly, r)
        col = [Fraction(0)] * len(monos)
        for m, c in h.items():
            col[index[m]] = c
        cols.append(col)
    return linalg.transpose(cols)


def tilde_factor(alpha) -> Fraction:
    """Scaling between the product form C^alpha and the de Casteljau C~^alpha."""
    return Fraction(_multinomial(alpha))


def de_casteljau_eval(coeffs: dict, x, nodes: NodeTable) -> Fraction:
    """Evaluate sum c_alpha C~^alpha(x) by the generalized de Casteljau recurrence.

    Args:
        coeffs: map from the full weight-r multi-index set to rationals.
        x: barycentric point (length k+1, sums to 1).
        nodes: the node table defining the basis.
    """
    xs = [Fraction(v) for v in x]
    k = len(xs) - 1
    if sum(xs) != 1:
        raise ValueError("barycentric coordinates must sum to 1")
    r = max(sum(a) for a in coeffs) if coeffs else 0
    level = {}
    for alpha in multi_indices(k + 1, r):
        if alpha not in coeffs:
            raise ValueError(f"missing coefficient for {alpha}")
        level[alpha] = Fraction(coeffs[alpha])
    for s in range(r, 0, -1):
        nxt = {}
        for alpha in multi_indices(k + 1, s - 1):
            acc = Fraction(0)
            for i in range(k + 1):
                up = list(alpha)
                up[i] += 1
                acc += (xs[i] - nodes[i][alpha[i]]) * level[tuple(up)]
            nxt[alpha] = acc
        level = nxt
    return level[(0,) * (k + 1)]
