"""Tate cohomology of G-lattices over subgroups, Ext^1, flabbiness tests.

H^-1 and H^0 come straight from norm kernels and fixed sublattices.  H^1
uses 2-periodicity for cyclic subgroups and an explicit 1-cocycle linear
system (all |S|^2 pair constraints) for dihedral ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import (
    AbelianInvariants,
    IntMatrix,
    cokernel_invariants,
    express_rows,
    right_kernel_basis,
)
from .groups import GroupElement, SubgroupClass, mul, subgroup_classes
from .lattices import GLattice, LatticeError, fixed_sublattice, hom_lattice

_ZERO = AbelianInvariants((), 0)


def _invariants_of_submodule(kernel_rows: IntMatrix, generators: list) -> AbelianInvariants:
    """Invariants of span(kernel_rows) / span(generators)."""
    if kernel_rows.rows == 0:
        return _ZERO
    gen_matrix = IntMatrix.from_rows(generators, cols=kernel_rows.cols)
    coords = express_rows(kernel_rows, gen_matrix)
    if coords is None:
        raise LatticeError("submodule generators escape the kernel")
    return cokernel_invariants(coords)


def tate_hminus1(m: GLattice, s: SubgroupClass) -> AbelianInvariants:
    """ker(N_S) / I_S.M with N_S the subgroup norm."""
    norm = m.norm_matrix(s)
    kernel = right_kernel_basis(norm)
    ident = IntMatrix.identity(m.rank)
    gens = []
    for a in s.representative:
        if a.is_identity:
            continue
        diff = m.rho(a) - ident
        gens.extend(diff.transpose().data)  # columns of (rho(a) - 1)
    if not gens:
        gens = [(0,) * m.rank]
    return _invariants_of_submodule(kernel, gens)


def tate_h0(m: GLattice, s: SubgroupClass) -> AbelianInvariants:
    """M^S / N_S.M."""
    fixed = fixed_sublattice(m, s)
    norm = m.norm_matrix(s)
    gens = list(norm.transpose().data)
    return _invariants_of_submodule(fixed, gens)


def _is_cyclic_class(s: SubgroupClass) -> bool:
    rotations = [a for a in s.representative if a.flip == 0]
    return len(rotations) == len(s.representative) or s.order <= 2


def _cyclic_generator(s: SubgroupClass) -> GroupElement:
    reflections = [a for a in s.representative if a.flip == 1]
    if reflections and s.order == 2:
        return reflections[0]
    non_trivial = [a for a in s.representative if not a.is_identity]
    if not non_trivial:
        return GroupElement(0, 0)
    return min(non_trivial, key=lambda a: a.rot)


def h1_cyclic(m: GLattice, s: SubgroupClass) -> AbelianInvariants:
    """H^1 of a cyclic subgroup by 2-periodicity: ker N / im(rho(g) - 1)."""
    if s.order == 1:
        return _ZERO
    gen = _cyclic_generator(s)
    norm = m.norm_matrix(s)
    kernel = right_kernel_basis(norm)
    diff = m.rho(gen) - IntMatrix.identity(m.rank)
    gens = list(diff.transpose().data)
    return _invariants_of_submodule(kernel, gens)


class _SparseEchelon:
    """Incremental integer row echelon over sparse rows (dict col -> value)."""

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @staticmethod
    def _combine(a: dict, ca: int, b: dict, cb: int) -> dict:
        out = {}
        for k, v in a.items():
            out[k] = ca * v
        for k, v in b.items():
            w = out.get(k, 0) + cb * v
            if w:
                out[k] = w
            elif k in out:
                del out[k]
        return {k: v for k, v in out.items() if v}

    def insert(self, row: dict) -> None:
        row = {k: v for k, v in row.items() if v}
        while row:
            j = min(row)
            aj = row[j]
            piv = self.pivots.get(j)
            if piv is None:
                if aj < 0:
                    row = {k: -v for k, v in row.items()}
                self.pivots[j] = row
                return
            pj = piv[j]
            if aj % pj == 0:
                row = self._combine(row, 1, piv, -(aj // pj))
            else:
                g, x, y = _extgcd(pj, aj)
                new_piv = self._combine(piv, x, row, y)
                row = self._combine(piv, -(aj // g), row, pj // g)
                self.pivots[j] = new_piv

    def matrix(self, cols: int) -> IntMatrix:
        rows = [self.pivots[j] for j in sorted(self.pivots)]
        dense = []
        for r in rows:
            line = [0] * cols
            for k, v in r.items():
                line[k] = v
            dense.append(line)
        return IntMatrix.from_rows(dense, cols=cols)


def _extgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class CocycleSpace:
    """Z^1(S, M) with its coboundary generators, in f: S -> M coordinates."""

    elements: tuple  # subgroup elements in index order
    rank: int  # rank of M
    cocycles: IntMatrix  # rows span Z^1 inside Z^(|S| * rank)
    coboundaries: tuple  # generator vectors of B^1


def one_cocycles(m: GLattice, s: SubgroupClass) -> CocycleSpace:
    """Solve the full pairwise system f(st) = f(s) + s.f(t)."""
    els = list(s.representative)
    index = {a: i for i, a in enumerate(els)}
    r = m.rank
    n_vars = len(els) * r
    ech = _SparseEchelon()
    rhos = {a: m.rho(a) for a in els}
    g = m.group
    for a in els:
        rho_a = rhos[a]
        ia = index[a]
        for b in els:
            ib = index[b]
            iab = index[mul(g, a, b)]
            for k in range(r):
                row: dict[int, int] = {}

                def bump(col, val):
                    if not val:
                        return
                    w = row.get(col, 0) + val
                    if w:
                        row[col] = w
                    elif col in row:
                        del row[col]

                bump(iab * r + k, 1)
                bump(ia * r + k, -1)
                for k2 in range(r):
                    bump(ib * r + k2, -rho_a[k, k2])
                ech.insert(row)
    constraints = ech.matrix(n_vars)
    cocycles = right_kernel_basis(constraints)
    ident = IntMatrix.identity(r)
    diffs = {a: rhos[a] - ident for a in els}
    gens = []
    for j in range(r):
        vec = [0] * n_vars
        for a in els:
            d = diffs[a]
            ia = index[a]
            for k in range(r):
                vec[ia * r + k] = d[k, j]
        gens.append(tuple(vec))
    return CocycleSpace(
        elements=tuple(els), rank=r, cocycles=cocycles, coboundaries=tuple(gens)
    )


def h1_generic(m: GLattice, s: SubgroupClass) -> AbelianInvariants:
    """H^1 via the full pairwise 1-cocycle system."""
    space = one_cocycles(m, s)
    return _invariants_of_submodule(space.cocycles, list(space.coboundaries))


def h1(m: GLattice, s: SubgroupClass, method: str = "auto") -> AbelianInvariants:
    if method == "generic":
        return h1_generic(m, s)
    if method == "cyclic" or _is_cyclic_class(s):
        return h1_cyclic(m, s)
    return h1_generic(m, s)


def ext1(a: GLattice, b: GLattice) -> AbelianInvariants:
    """Ext^1_{Z[G]}(a, b) = H^1(G, Hom_Z(a, b))."""
    if a.group != b.group:
        raise LatticeError("ext needs lattices over one group")
    hom = hom_lattice(a, b)
    full = subgroup_classes(a.group)[-1]
    return h1(hom, full)


@dataclass(frozen=True)
class FlabbinessReport:
    ok: bool
    failing: tuple  # (label, AbelianInvariants) pairs

    def __bool__(self):
        return self.ok

    @property
    def first_failure(self):
        return self.failing[0] if self.failing else None


def is_flabby(m: GLattice) -> FlabbinessReport:
    """H^-1(S, M) = 0 for every subgroup conjugacy class."""
    failing = []
    for cls in subgroup_classes(m.group):
        inv = tate_hminus1(m, cls)
        if not inv.is_trivial:
            failing.append((cls.label, inv))
    return FlabbinessReport(ok=not failing, failing=tuple(failing))


def is_coflabby(m: GLattice) -> FlabbinessReport:
    """H^1(S, M) = 0 for every subgroup conjugacy class."""
    failing = []
    for cls in subgroup_classes(m.group):
        inv = h1(m, cls)
        if not inv.is_trivial:
            failing.append((cls.label, inv))
    return FlabbinessReport(ok=not failing, failing=tuple(failing))


@dataclass(frozen=True)
class CohomologyTable:
    lattice_id: str
    entries: tuple  # (label, hminus1, h0, h1) per subgroup class


def cohomology_table(m: GLattice, lattice_id: str = "") -> CohomologyTable:
    rows = []
    for cls in subgroup_classes(m.group):
        rows.append((cls.label, tate_hminus1(m, cls), tate_h0(m, cls), h1(m, cls)))
    return CohomologyTable(lattice_id=lattice_id, entries=tuple(rows))
