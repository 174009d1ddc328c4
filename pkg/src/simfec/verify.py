"""Verification suites behind the command-line ``verify`` command.

Each suite returns a list of (name, passed, detail) triples; every check
is exact (rational arithmetic, no tolerances).  Sampling uses a fixed seed
so output is byte-identical across runs.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .complexes import Simplex
from .dofs import (canonical_dof_system, check_unisolvent, d_matrix,
                   small_dof_matrix, small_unisolvent_system)
from .resolve import (resolution_qwedge, resolution_trimmed,
                      resolution_trimmed0)
from .whitney import dim_Pminus


def _interior_point(rng: random.Random, nv: int):
    weights = [rng.randint(1, 30) for _ in range(nv)]
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


def suite_resolutions(n: int, r: int) -> list:
    """Exactness of the three resolution chains for every form degree."""
    u = Simplex(tuple(range(n + 1)))
    out = []
    for k in range(0, n + 1):
        rep = resolution_trimmed(u, r, k).verify()
        out.append((f"resolution trimmed n={n} r={r} k={k} "
                    f"dims={'/'.join(map(str, rep.dims))} ranks={'/'.join(map(str, rep.ranks))}",
                    rep.ok, f"target dim {rep.ladder[0][2]}"))
        if r - n + k - 1 >= 0:
            rep0 = resolution_trimmed0(u, r, k).verify()
            out.append((f"resolution interior n={n} r={r} k={k}", rep0.ok,
                        f"dims={rep0.dims} ranks={rep0.ranks}"))
        if k + 1 <= n:
            repq = resolution_qwedge(u, r - 1, k).verify()
            out.append((f"resolution constant-coefficient n={n} q={r - 1} k={k}",
                        repq.ok, f"dims={repq.dims} ranks={repq.ranks}"))
    return out


def suite_dofs(n: int, r: int) -> list:
    """Canonical unisolvence, small-dof overdetermination, small selection."""
    u = Simplex(tuple(range(n + 1)))
    out = []
    for k in range(0, n + 1):
        system = canonical_dof_system(u, r, k)
        ok, details = check_unisolvent(system)
        out.append((f"canonical dofs unisolvent n={n} r={r} k={k}", ok,
                    f"count {len(system)} = {dim_Pminus(n, r, k)}"))
        sm = small_dof_matrix(u, r, k)
        rk = sm.rank()
        expected = dim_Pminus(n, r, k)
        out.append((f"small dofs overdetermine n={n} r={r} k={k}",
                    rk == expected, f"rank {rk} of {len(sm.row_labels)} rows, dim {expected}"))
        try:
            sel = small_unisolvent_system(u, r, k)
            ok2, _ = check_unisolvent(sel)
            out.append((f"small selection unisolvent n={n} r={r} k={k}", ok2,
                        f"{len(sel)} selected"))
        except ValueError as exc:
            out.append((f"small selection unisolvent n={n} r={r} k={k}", False, str(exc)))
    return out


def suite_positivity(n: int, r: int, samples: int = 25, seed: int = 0) -> list:
    """Duality matrices: symmetric and positive semidefinite, exactly."""
    del r  # the duality matrix is order-independent
    rng = random.Random(seed)
    u = Simplex(tuple(range(n + 1)))
    out = []
    for k in range(0, n + 1):
        ok = True
        for _ in range(samples):
            x = _interior_point(rng, n + 1)
            d = d_matrix(u, k, x)
            sym = all(d[i][j] == d[j][i] for i in range(len(d)) for j in range(len(d)))
            diag = all(d[i][i] >= 0 for i in range(len(d)))
            if not (sym and diag and linalg.is_psd(d)):
                ok = False
                break
        out.append((f"duality matrix symmetric PSD n={n} k={k} ({samples} interior points)",
                    ok, "exact"))
    return out


SUITES = {
    "resolutions": suite_resolutions,
    "dofs": suite_dofs,
    "positivity": suite_positivity,
}


def run_suites(n: int, r: int, which: str = "all") -> list:
    names = list(SUITES) if which == "all" else [which]
    results = []
    for name in names:
        results.extend(SUITES[name](n, r))
    return results
