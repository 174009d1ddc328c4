"""Command-line interface: dimension tables, verification suites, mass matrices.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 missing
mesh data, 4 degenerate geometry.  All output is deterministic.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from .complexes import Simplex, SimplicialComplex
from .metric import EdgeMetric, mass_entry
from .resolve import geometric_decomposition
from .verify import run_suites
from .whitney import dim_P, dim_Pminus


class MeshError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def cmd_dims(n: int, rmax: int, out=sys.stdout) -> int:
    """Dimension table: scalar-times-cochain count, relations, trimmed dim."""
    print("# r\tk\tdim P_{r-1} x C^k\tdim P-_{r-1} L^{k+1}\tdim P-_r L^k", file=out)
    for r in range(1, rmax + 1):
        for k in range(0, n + 1):
            tensor = dim_P(n, r - 1, 0) * math.comb(n + 1, k + 1)
            relations = dim_Pminus(n, r - 1, k + 1)
            trimmed = dim_Pminus(n, r, k)
            print(f"{r}\t{k}\t{tensor}\t{relations}\t{trimmed}", file=out)
    return 0


def cmd_verify(n: int, r: int, suite: str, out=sys.stdout) -> int:
    failures = 0
    for name, ok, detail in run_suites(n, r, suite):
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name} [{detail}]", file=out)
        if not ok:
            failures += 1
    return 1 if failures else 0


def parse_mesh(text: str):
    """Parse the plain-line mesh format.

    Lines: ``vertex <id>``, ``simplex <id...>`` (top cells; faces are
    generated), ``length <i> <j> <value>`` with value decimal or p/q.
    """
    vertices = set()
    cells = []
    lengths = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "vertex":
            if len(parts) != 2:
                raise MeshError(f"line {lineno}: vertex takes one id", 2)
            vertices.add(int(parts[1]))
        elif kind == "simplex":
            ids = [int(p) for p in parts[1:]]
            if len(ids) < 1 or len(set(ids)) != len(ids):
                raise MeshError(f"line {lineno}: bad simplex", 2)
            for v in ids:
                if v not in vertices:
                    raise MeshError(f"line {lineno}: undeclared vertex {v}", 3)
            cells.append(Simplex(tuple(sorted(ids))))
        elif kind == "length":
            if len(parts) != 4:
                raise MeshError(f"line {lineno}: length takes i j value", 2)
            i, j = int(parts[1]), int(parts[2])
            value = Fraction(parts[3])
            if value <= 0:
                raise MeshError(f"line {lineno}: nonpositive length", 4)
            lengths[(min(i, j), max(i, j))] = value * value
        else:
            raise MeshError(f"line {lineno}: unknown record {kind!r}", 2)
    if not cells:
        raise MeshError("mesh has no cells", 2)
    return SimplicialComplex.from_cells(cells), lengths


def _format_value(terms, exact: bool) -> str:
    """Format a sum of coef*sqrt(vol2) contributions."""
    if exact:
        parts = []
        for vol2, coef in sorted(terms.items()):
            if coef == 0:
                continue
            parts.append(f"{coef}*sqrt({vol2})")
        return " + ".join(parts) if parts else "0"
    total = sum(float(c) * math.sqrt(float(v2)) for v2, c in terms.items())
    return format(total, ".17g")


def cmd_mass(mesh_path: str, r: int, k: int, exact: bool, out=sys.stdout) -> int:
    with open(mesh_path, "r", encoding="utf-8") as fh:
        complex_, lengths = parse_mesh(fh.read())
    metrics = {}
    for cell in complex_.top_cells():
        sq = {}
        for a_i in range(len(cell.vertices)):
            for b_i in range(a_i + 1, len(cell.vertices)):
                key = (cell.vertices[a_i], cell.vertices[b_i])
                if key not in lengths:
                    raise MeshError(f"missing length for edge {key[0]} {key[1]}", 3)
                sq[key] = lengths[key]
        try:
            metrics[cell.vertices] = EdgeMetric(Simplex(cell.vertices), sq)
        except ValueError as exc:
            raise MeshError(f"degenerate cell {cell.vertices}: {exc}", 4) from exc
    gd = geometric_decomposition(complex_, r, k)
    n_basis = gd.global_dim()
    print(f"# global mass matrix, order r={r}, form degree k={k}, "
          f"basis: (face, interior index) = "
          + " ".join(f"({','.join(map(str, f.vertices))};{j})" for f, j in gd.labels),
          file=out)
    rows = []
    for i in range(n_basis):
        row = []
        for j in range(n_basis):
            terms: dict = {}
            for cell in gd.cell_forms:
                ui = gd.cell_forms[cell][i]
                uj = gd.cell_forms[cell][j]
                if not ui.terms or not uj.terms:
                    continue
                entry = mass_entry(ui, uj, metrics[cell.vertices])
                if entry.coef:
                    terms[entry.vol2] = terms.get(entry.vol2, Fraction(0)) + entry.coef
            row.append(_format_value(terms, exact))
        rows.append(row)
    for row in rows:
        print(",".join(row), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simfec",
        description="Exact simplicial finite element exterior calculus")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dims = sub.add_parser("dims", help="dimension tables of the trimmed spaces")
    p_dims.add_argument("--n", type=int, required=True, help="simplex dimension (<= 4)")
    p_dims.add_argument("--rmax", type=int, required=True, help="maximum order (<= 6)")

    p_verify = sub.add_parser("verify", help="run exact verification suites")
    p_verify.add_argument("--n", type=int, required=True, help="simplex dimension (<= 3)")
    p_verify.add_argument("--r", type=int, required=True, help="order (<= 4)")
    p_verify.add_argument("--suite", default="all",
                          choices=["resolutions", "dofs", "positivity", "all"])

    p_mass = sub.add_parser("mass", help="assemble the global mass matrix of a mesh")
    p_mass.add_argument("--mesh", required=True, help="mesh file path")
    p_mass.add_argument("--r", type=int, required=True)
    p_mass.add_argument("--k", type=int, required=True)
    p_mass.add_argument("--exact", action="store_true",
                        help="print entries as p/q*sqrt(m/n) sums")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "dims":
        if not (1 <= args.n <= 4 and 1 <= args.rmax <= 6):
            parser.error("dims requires 1 <= n <= 4 and 1 <= rmax <= 6")
        return cmd_dims(args.n, args.rmax)
    if args.command == "verify":
        if not (1 <= args.n <= 3 and 1 <= args.r <= 4):
            parser.error("verify requires 1 <= n <= 3 and 1 <= r <= 4")
        return cmd_verify(args.n, args.r, args.suite)
    if args.command == "mass":
        if args.r < 1 or args.k < 0:
            parser.error("mass requires r >= 1 and k >= 0")
        try:
            return cmd_mass(args.mesh, args.r, args.k, args.exact)
        except MeshError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return exc.code
        except FileNotFoundError:
            print(f"error: mesh file not found: {args.mesh}", file=sys.stderr)
            return 3
    return 2


if __name__ == "__main__":
    sys.exit(main())
