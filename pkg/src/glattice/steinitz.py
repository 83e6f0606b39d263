"""Steinitz classes of C_p-lattices via cyclotomic order ideals.

The route: split off the sigma-fixed part, view the quotient as a
module over Z[zeta_p], pick a maximal free submodule, and read the class
off the finite quotient's order ideal (inverted, so free modules give
the unit ideal and an ideal module I gives [I]).  Principality testing
is a bounded short-vector search on the trace form; it can confirm a
class is trivial, never refute it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .exactla import (
    IntMatrix,
    right_kernel_basis,
    row_space_hnf,
)
from .catalog import is_prime
from .cyclotomic import (
    IdealHNF,
    factor_cyclotomic_mod,
    field_norm,
    ideal_div_to_integral,
    ideal_inverse,
    ideal_mul,
    one_element,
    prime_ideal_above,
    principal_ideal,
    unit_ideal,
)
from .lattices import GLattice, LatticeError, fixed_sublattice, quotient_with_maps
from .groups import subgroup_classes


def _check_cp(n: GLattice) -> int:
    g = n.group
    if g.is_dihedral or not is_prime(g.n):
        raise LatticeError(f"Steinitz machinery needs a C_p lattice, got {g}")
    return g.n


def n0_and_n1(n: GLattice) -> tuple[IntMatrix, IntMatrix]:
    """Saturated bases of the fixed part and of ker Phi_p(sigma)."""
    p = _check_cp(n)
    full = subgroup_classes(n.group)[-1]
    n0 = fixed_sublattice(n, full)
    phi = IntMatrix.zero(n.rank, n.rank)
    for k in range(p):
        phi = phi + n.sigma_power(k)
    n1 = right_kernel_basis(phi)
    return n0, n1


@dataclass(frozen=True)
class TorsionModule:
    """Finite Z[zeta_p]-module: Z^dim / relations, zeta acting by zmat."""

    p: int
    dim: int
    relations: IntMatrix  # full-rank row lattice
    zmat: IntMatrix  # column action, satisfies Phi_p(zmat) = 0 mod relations

    @property
    def order(self) -> int:
        from .exactla import det

        return abs(det(self.relations)) if self.dim else 1


@dataclass(frozen=True)
class IdealModuleData:
    t: int
    free_sub: IntMatrix  # rows: Z-basis of the chosen free submodule
    torsion: TorsionModule
    quotient_action: IntMatrix
    quotient_rank: int


def ideal_module(n: GLattice) -> IdealModuleData:
    """Realize N/N_0 over Z[zeta_p] with a maximal free submodule."""
    p = _check_cp(n)
    n0, _ = n0_and_n1(n)
    q = quotient_with_maps(n, n0)
    zq = q.lattice.sigma
    m = q.lattice.rank
    if m % (p - 1):
        raise LatticeError("quotient rank is not a multiple of p-1")
    t = m // (p - 1)
    chosen: list[list[int]] = []
    span_rows: list[list[int]] = []
    rank_now = 0
    for j in range(m):
        if len(chosen) == t:
            break
        vec = [1 if k == j else 0 for k in range(m)]
        orbit = []
        cur = vec
        for _ in range(p - 1):
            orbit.append(cur)
            cur = list(zq.matvec(cur))
        trial = span_rows + orbit
        rank = row_space_hnf(IntMatrix(trial, cols=m)).rows
        if rank == rank_now + (p - 1):
            chosen.append(vec)
            span_rows = trial
            rank_now = rank
    if len(chosen) < t:
        raise LatticeError("failed to locate a maximal free submodule")
    free_rows = IntMatrix(span_rows, cols=m) if span_rows else IntMatrix([], cols=m)
    torsion = TorsionModule(
        p=p,
        dim=m,
        relations=row_space_hnf(free_rows) if t else IntMatrix.identity(m),
        zmat=zq,
    )
    return IdealModuleData(
        t=t, free_sub=free_rows, torsion=torsion, quotient_action=zq, quotient_rank=m
    )


def _apply_poly(poly, zmat: IntMatrix) -> IntMatrix:
    out = IntMatrix.zero(zmat.rows, zmat.rows)
    power = IntMatrix.identity(zmat.rows)
    for c in poly:
        if c:
            out = out + power * int(c)
        power = power * zmat
    return out


def _lattice_index_det(sup: IntMatrix, sub: IntMatrix) -> int:
    from .exactla import det

    dsup, dsub = abs(det(sup)), abs(det(sub))
    if dsup == 0 or dsub % dsup:
        raise LatticeError("nested lattice determinants do not divide")
    return dsub // dsup


def order_ideal(torsion: TorsionModule, p: int) -> IdealHNF:
    """0th Fitting-style order ideal: product of p^(length) over primes p."""
    if torsion.dim == 0 or torsion.order == 1:
        return unit_ideal(p)
    result = unit_ideal(p)
    remaining = torsion.order
    ell = 2
    while remaining > 1:
        if remaining % ell:
            ell += 1
            continue
        while remaining % ell == 0:
            remaining //= ell
        for factor in factor_cyclotomic_mod(p, ell):
            prime = prime_ideal_above(p, ell, factor)
            norm_prime = prime.norm()
            g_z = _apply_poly(factor, torsion.zmat)
            level = IntMatrix.identity(torsion.dim)
            length = 0
            while True:
                nxt_rows = (
                    [[ell * x for x in row] for row in level.data]
                    + [list(g_z.matvec(row)) for row in level.data]
                    + list(torsion.relations.data)
                )
                nxt = row_space_hnf(IntMatrix(nxt_rows, cols=torsion.dim))
                idx = _lattice_index_det(level, nxt)
                if idx == 1:
                    break
                dim_drop = 0
                while idx > 1:
                    if idx % norm_prime:
                        raise LatticeError("index is not a power of the residue norm")
                    idx //= norm_prime
                    dim_drop += 1
                length += dim_drop
                level = nxt
            for _ in range(length):
                result = ideal_mul(result, prime)
        ell += 1
    if result.norm() != torsion.order:
        raise LatticeError(
            f"order ideal norm {result.norm()} != module order {torsion.order}"
        )
    return result


# --- short vector search ------------------------------------------------------


def trace_gram(p: int, basis: IntMatrix) -> IntMatrix:
    """Gram matrix of Tr(x * conj(y)) on the given ideal basis (exact)."""
    d = p - 1
    t2 = IntMatrix([[p - 1 if i == j else -1 for j in range(d)] for i in range(d)])
    return basis * t2 * basis.transpose()


def short_vectors(gram: IntMatrix, bound: int, limit: int = 200000):
    """All nonzero x (up to sign) with x^T G x <= bound, exact arithmetic."""
    d = gram.rows
    q = [[Fraction(gram[i, j]) for j in range(d)] for i in range(d)]
    # Cholesky-style decomposition: Q(x) = sum_i q[i][i] (x_i + sum_j>i q[i][j] x_j)^2
    for i in range(d):
        for j in range(i + 1, d):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, d):
            for l in range(k, d):
                q[k][l] -= q[k][i] * q[i][l]
    out = []
    x = [0] * d
    count = [0]

    def recurse(i, remaining):
        if count[0] >= limit:
            return
        if i < 0:
            if any(x):
                out.append(tuple(x))
                count[0] += 1
            return
        center = -sum(q[i][j] * x[j] for j in range(i + 1, d))
        if q[i][i] <= 0:
            raise LatticeError("gram matrix is not positive definite")
        # |x_i - center| <= sqrt(remaining / q[i][i])
        radius_sq = remaining / q[i][i]
        lo = center
        # integer range scan around the center
        start = int(center)  # Fraction -> floor-ish; adjust both directions
        xi = start
        while Fraction((xi - center) ** 2) <= radius_sq:
            xi -= 1
        xi += 1
        while Fraction((xi - center) ** 2) <= radius_sq:
            x[i] = xi
            recurse(i - 1, remaining - q[i][i] * (xi - center) ** 2)
            xi += 1
        x[i] = 0

    recurse(d - 1, Fraction(bound))
    # dedupe +-x
    seen = set()
    unique = []
    for v in out:
        neg = tuple(-c for c in v)
        if v in seen or neg in seen:
            continue
        seen.add(v)
        unique.append(v)
    return unique


def _nth_root_ceil(value: int, n: int) -> int:
    if value <= 0:
        return 0
    lo, hi = 1, 1
    while hi**n < value:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**n >= value:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class PrincipalityResult:
    generator: tuple | None  # power-basis coordinates, or None

    @property
    def inconclusive(self) -> bool:
        return self.generator is None

    def __bool__(self):
        return self.generator is not None


def principality(
    ideal: IdealHNF, search_bound: int = 3, limit: int = 200000, max_dim: int = 12
) -> PrincipalityResult:
    """Look for alpha with (alpha) = ideal; bounded, can only confirm."""
    if ideal.real_subfield:
        raise NotImplementedError("principality runs over the full cyclotomic ring")
    p = ideal.p
    target = ideal.norm()
    if target == 1:
        return PrincipalityResult(generator=one_element(p))
    if ideal.degree > max_dim:
        # enumeration above desk scale is hopeless; stay honest
        return PrincipalityResult(generator=None)
    gram = trace_gram(p, ideal.basis)
    # AM-GM floor: T2(alpha) >= (p-1) * |N(alpha)|^{2/(p-1)}
    base = (p - 1) * _nth_root_ceil(target**2, p - 1)
    for mult in range(1, search_bound + 1):
        bound = base * mult
        for coeffs in short_vectors(gram, bound, limit=limit):
            alpha = [0] * (p - 1)
            for c, row in zip(coeffs, ideal.basis.data):
                if c:
                    for k in range(p - 1):
                        alpha[k] += c * row[k]
            if abs(field_norm(p, alpha)) == target:
                if principal_ideal(p, alpha) == ideal:
                    return PrincipalityResult(generator=tuple(alpha))
    return PrincipalityResult(generator=None)


# --- Steinitz classes ---------------------------------------------------------


@dataclass(frozen=True)
class SteinitzClassRep:
    ideal: IdealHNF
    known_trivial: bool
    generator: tuple | None = None

    def __post_init__(self):
        if self.known_trivial:
            if self.generator is None:
                raise LatticeError("trivial class needs an exhibited generator")
            if principal_ideal(self.ideal.p, list(self.generator)) != self.ideal:
                raise LatticeError("stored generator does not generate the ideal")


def steinitz_class(n: GLattice, search_bound: int = 3) -> SteinitzClassRep:
    """cl(N) as an integral ideal class representative."""
    p = _check_cp(n)
    data = ideal_module(n)
    ideal = order_ideal(data.torsion, p)
    rep = ideal_inverse(ideal).integral_representative()
    found = principality(rep, search_bound=search_bound)
    return SteinitzClassRep(
        ideal=rep, known_trivial=bool(found), generator=found.generator
    )


def same_class(a: IdealHNF, b: IdealHNF, search_bound: int = 3) -> bool | None:
    """True if provably equal classes; None when the search is inconclusive."""
    if a == b:
        return True
    quotient = ideal_div_to_integral(a, b)
    if principality(quotient, search_bound=search_bound):
        return True
    return None


def class_multiplicativity_check(ext, search_bound: int = 3) -> bool | None:
    """cl(total) = cl(sub) * cl(quotient); None if not certifiable."""
    ext.check()  # rejects non-exact input
    reps = [steinitz_class(lat, search_bound) for lat in (ext.sub, ext.total, ext.quotient)]
    sub_rep, total_rep, quot_rep = reps
    product = ideal_mul(sub_rep.ideal, quot_rep.ideal)
    return same_class(total_rep.ideal, product, search_bound=search_bound)


# --- class-number table -------------------------------------------------------


_H_VALUES = {3: 1, 5: 1, 7: 1, 11: 1, 13: 1, 17: 1, 19: 1, 23: 3}


@dataclass(frozen=True)
class ClassTable:
    entries: tuple  # (p, h or None, h_plus, source)

    def h(self, p: int) -> int | None:
        for q, h, _, _ in self.entries:
            if q == p:
                return h
        return None

    def h_plus(self, p: int) -> int | None:
        for q, _, hp, _ in self.entries:
            if q == p:
                return hp
        return None

    def knows(self, p: int) -> bool:
        return any(q == p for q, _, _, _ in self.entries)


def default_class_table() -> ClassTable:
    entries = []
    for p in range(3, 68):
        if not is_prime(p):
            continue
        h = _H_VALUES.get(p)
        src = "Washington, Introduction to Cyclotomic Fields, tables (external)"
        entries.append((p, h, 1, src))
    return ClassTable(entries=tuple(entries))


def minkowski_h_is_one(p: int) -> bool:
    """Certify h_p = 1 for small p by checking primes under the Minkowski bound.

    Uses the exact overestimate (4/pi)^r2 <= (12734/10000)^r2 and
    sqrt(disc) <= isqrt(disc) + 1; every prime ideal with norm under the
    bound must test principal.
    """
    if p not in (3, 5, 7):
        raise LatticeError("Minkowski certification implemented for p <= 7 only")
    n = p - 1
    r2 = n // 2
    disc = p ** (p - 2)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    bound = Fraction(12734, 10000) ** r2 * Fraction(fact, n**n) * (isqrt(disc) + 1)
    limit = int(bound) + 1
    for ell in range(2, limit + 1):
        if not is_prime(ell):
            continue
        for factor in factor_cyclotomic_mod(p, ell):
            prime = prime_ideal_above(p, ell, factor)
            if prime.norm() > limit:
                continue
            if not principality(prime, search_bound=4):
                return False
    return True
