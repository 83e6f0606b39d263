"""G-lattices as exact integer matrix representations of C_n and D_n.

A lattice is Z^rank with the group acting on column vectors through
unimodular matrices for the generators.  Sublattices are always handed
around as saturated row-basis matrices, so induced quotient actions stay
integral.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import (
    IntMatrix,
    block_diag,
    express_rows,
    inverse_unimodular,
    is_saturated,
    is_unimodular,
    right_kernel_basis,
    row_space_hnf,
    snf,
)
from .groups import (
    DIHEDRAL,
    GroupElement,
    GroupSpec,
    SubgroupClass,
    cyclic,
    elements,
    mul,
)


class LatticeError(ValueError):
    pass


class RelationError(LatticeError):
    """Generator matrices do not satisfy the group presentation."""


class NonSaturatedSublattice(LatticeError):
    pass


class NonStableSublattice(LatticeError):
    pass


class GLattice:
    """Integer representation of C_n or D_n on Z^rank."""

    __slots__ = ("group", "rank", "sigma", "tau", "_pow_cache", "_hash")

    def __init__(
        self,
        group: GroupSpec,
        sigma: IntMatrix,
        tau: IntMatrix | None = None,
        validate: bool = True,
    ):
        self.group = group
        self.sigma = sigma
        self.tau = tau if group.is_dihedral else None
        self.rank = sigma.rows
        self._pow_cache = [IntMatrix.identity(self.rank), sigma]
        self._hash = None
        if group.is_dihedral and tau is None:
            raise LatticeError("dihedral lattice needs a tau matrix")
        if not sigma.is_square or (tau is not None and not tau.is_square):
            raise LatticeError("generator matrices must be square")
        if tau is not None and tau.rows != sigma.rows:
            raise LatticeError("generator matrices must have equal size")
        if validate:
            self._check_relations()

    def _check_relations(self):
        n = self.group.n
        ident = IntMatrix.identity(self.rank)
        if self.sigma.power(n) != ident:
            raise RelationError(f"sigma^{n} != identity")
        if self.tau is not None:
            if self.tau * self.tau != ident:
                raise RelationError("tau^2 != identity")
            if self.tau * self.sigma * self.tau != self.sigma_power(n - 1):
                raise RelationError("tau*sigma*tau != sigma^-1")

    def sigma_power(self, k: int) -> IntMatrix:
        k %= self.group.n
        cache = self._pow_cache
        while len(cache) <= k:
            cache.append(cache[-1] * self.sigma)
        return cache[k]

    def rho(self, a: GroupElement) -> IntMatrix:
        m = self.sigma_power(a.rot)
        if a.flip:
            if self.tau is None:
                raise LatticeError("cyclic lattice acted on by a reflection")
            m = m * self.tau
        return m

    def norm_matrix(self, s: SubgroupClass) -> IntMatrix:
        total = IntMatrix.zero(self.rank, self.rank)
        for a in s.representative:
            total = total + self.rho(a)
        return total

    def full_norm_matrix(self) -> IntMatrix:
        total = IntMatrix.zero(self.rank, self.rank)
        for a in elements(self.group):
            total = total + self.rho(a)
        return total

    def key(self):
        return (self.group, self.rank, self.sigma, self.tau)

    def __eq__(self, other):
        return isinstance(other, GLattice) and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        return f"GLattice({self.group}, rank={self.rank})"

    @property
    def is_permutation(self) -> bool:
        """Entrywise test: all generator matrices are permutation matrices."""
        mats = [self.sigma] + ([self.tau] if self.tau is not None else [])
        for m in mats:
            for row in m.data:
                if sum(row) != 1 or any(x not in (0, 1) for x in row):
                    return False
            for j in range(m.cols):
                if sum(m[i, j] for i in range(m.rows)) != 1:
                    return False
        return True


@dataclass(frozen=True)
class LatticeMap:
    """Equivariant map given by a target.rank x source.rank matrix."""

    source: GLattice
    target: GLattice
    matrix: IntMatrix

    def check(self) -> None:
        if self.source.group != self.target.group:
            raise LatticeError("map between lattices over different groups")
        if (self.matrix.rows, self.matrix.cols) != (self.target.rank, self.source.rank):
            raise LatticeError("map matrix has wrong shape")
        if self.matrix * self.source.sigma != self.target.sigma * self.matrix:
            raise LatticeError("map does not intertwine sigma")
        if self.source.tau is not None:
            if self.matrix * self.source.tau != self.target.tau * self.matrix:
                raise LatticeError("map does not intertwine tau")


@dataclass(frozen=True)
class ExtensionSpec:
    """Short exact sequence 0 -> sub -> total -> quotient -> 0."""

    sub: GLattice
    total: GLattice
    quotient: GLattice
    inclusion: LatticeMap
    projection: LatticeMap

    def check(self) -> None:
        self.inclusion.check()
        self.projection.check()
        if self.sub.rank + self.quotient.rank != self.total.rank:
            raise LatticeError("ranks do not add up")
        inc = self.inclusion.matrix
        if not is_saturated(inc.transpose()):
            raise LatticeError("inclusion image is not saturated")
        proj = self.projection.matrix
        if snf(proj).rank != self.quotient.rank:
            raise LatticeError("projection is not surjective")
        if not is_saturated(proj):
            raise LatticeError("projection is not surjective onto Z^quotient")
        # image(inclusion) = kernel(projection)
        image = row_space_hnf(inc.transpose())
        kern = row_space_hnf(right_kernel_basis(proj))
        if image != kern:
            raise LatticeError("image of inclusion differs from kernel of projection")


# ---------------------------------------------------------------------------
# constructors


def trivial_lattice(g: GroupSpec, rank: int = 1) -> GLattice:
    ident = IntMatrix.identity(rank)
    if g.is_dihedral:
        return GLattice(g, ident, ident, validate=False)
    return GLattice(g, ident, validate=False)


def sign_lattice(g: GroupSpec) -> GLattice:
    """Rank-1 lattice where sigma acts trivially and tau by -1."""
    if not g.is_dihedral:
        raise LatticeError("sign lattice needs a dihedral group")
    return GLattice(g, IntMatrix([[1]]), IntMatrix([[-1]]), validate=False)


def _coset_sort_key(a: GroupElement):
    return (a.flip, a.rot)


def cosets(g: GroupSpec, s: SubgroupClass) -> list[tuple]:
    """Left cosets of the representative subgroup, canonically ordered."""
    members = list(s.representative)
    seen = set()
    out = []
    for x in sorted(elements(g), key=_coset_sort_key):
        if x in seen:
            continue
        coset = frozenset(mul(g, x, h) for h in members)
        seen |= coset
        out.append(tuple(sorted(coset, key=_coset_sort_key)))
    out.sort(key=lambda c: _coset_sort_key(c[0]))
    return out


def perm_lattice(g: GroupSpec, s: SubgroupClass) -> GLattice:
    """Z[G/S] on the coset basis."""
    cs = cosets(g, s)
    index = {c: i for i, c in enumerate(cs)}
    members = [set(c) for c in cs]

    def act_matrix(a: GroupElement) -> IntMatrix:
        m = [[0] * len(cs) for _ in range(len(cs))]
        for j, c in enumerate(cs):
            y = mul(g, a, c[0])
            i = next(k for k, mem in enumerate(members) if y in mem)
            m[i][j] = 1
        return IntMatrix(m)

    sig = act_matrix(GroupElement(1 % g.n, 0))
    if g.is_dihedral:
        return GLattice(g, sig, act_matrix(GroupElement(0, 1)), validate=False)
    return GLattice(g, sig, validate=False)


def regular_lattice(g: GroupSpec) -> GLattice:
    from .groups import trivial_class

    return perm_lattice(g, trivial_class(g))


def induce(g: GroupSpec, tau_sign: int) -> GLattice:
    """Induced lattice from <tau>: sigma a cyclic shift, tau the (signed) flip."""
    if not g.is_dihedral:
        raise LatticeError("induction needs a dihedral group")
    if tau_sign not in (1, -1):
        raise LatticeError("tau_sign must be +1 or -1")
    n = g.n
    a = [[0] * n for _ in range(n)]
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        a[(i + 1) % n][i] = 1
        b[(n - i) % n][i] = tau_sign
    return GLattice(g, IntMatrix(a), IntMatrix(b))


def direct_sum(*lattices: GLattice) -> GLattice:
    if not lattices:
        raise LatticeError("empty direct sum needs a group")
    g = lattices[0].group
    if any(m.group != g for m in lattices):
        raise LatticeError("direct sum over mismatched groups")
    sig = block_diag(*(m.sigma for m in lattices))
    if g.is_dihedral:
        return GLattice(g, sig, block_diag(*(m.tau for m in lattices)), validate=False)
    return GLattice(g, sig, validate=False)


def zero_lattice(g: GroupSpec) -> GLattice:
    z = IntMatrix([], cols=0)
    if g.is_dihedral:
        return GLattice(g, z, z, validate=False)
    return GLattice(g, z, validate=False)


def dual(m: GLattice) -> GLattice:
    """Contragredient: rho*(g) = rho(g^{-1})^T."""
    sig = m.sigma_power(m.group.n - 1).transpose()
    if m.tau is None:
        return GLattice(m.group, sig, validate=False)
    return GLattice(m.group, sig, m.tau.transpose(), validate=False)


def _cyclic_generator(s: SubgroupClass) -> GroupElement:
    for a in s.generators:
        return a
    return GroupElement(0, 0)


def restrict(m: GLattice, s: SubgroupClass) -> GLattice:
    """The same Z^rank viewed as a lattice over the subgroup."""
    order = s.order
    rotations = [a for a in s.representative if a.flip == 0]
    reflections = [a for a in s.representative if a.flip == 1]
    if not reflections:
        if order == 1:
            return GLattice(cyclic(1), IntMatrix.identity(m.rank), validate=False)
        gen = min((a for a in rotations if not a.is_identity), key=lambda a: a.rot)
        # smallest rotation generates the cyclic rotation subgroup
        return GLattice(cyclic(order), m.rho(gen), validate=False)
    if order == 2:
        return GLattice(cyclic(2), m.rho(reflections[0]), validate=False)
    d = len(rotations)
    gen = min((a for a in rotations if not a.is_identity), key=lambda a: a.rot)
    refl = min(reflections, key=lambda a: a.rot)
    return GLattice(GroupSpec(DIHEDRAL, d), m.rho(gen), m.rho(refl), validate=False)


def fixed_sublattice(m: GLattice, s: SubgroupClass) -> IntMatrix:
    """Saturated row basis of the common fixed space of the subgroup."""
    gens = [a for a in s.generators if not a.is_identity]
    if not gens:
        return IntMatrix.identity(m.rank)
    ident = IntMatrix.identity(m.rank)
    stacked = None
    for a in gens:
        block = m.rho(a) - ident
        stacked = block if stacked is None else stacked.vstack(block)
    return right_kernel_basis(stacked)


def full_fixed_sublattice(m: GLattice) -> IntMatrix:
    from .groups import full_class

    return fixed_sublattice(m, full_class(m.group))


@dataclass(frozen=True)
class QuotientResult:
    lattice: GLattice
    sub_lattice: GLattice
    basis: IntMatrix  # rows: sub basis first, then completion
    inclusion: IntMatrix  # ambient coords of sub basis vectors (columns)
    projection: IntMatrix  # ambient coords -> quotient coords


def _complete_basis(sub: IntMatrix, rank: int) -> IntMatrix:
    """Extend a saturated row basis to a unimodular rank x rank matrix."""
    if sub.rows == 0:
        return IntMatrix.identity(rank)
    h = row_space_hnf(sub)
    pivots = []
    for row in h.data:
        pivots.append(next(k for k, x in enumerate(row) if x))
    comp = [
        [1 if j == i else 0 for j in range(rank)] for i in range(rank) if i not in pivots
    ]
    cand = h.vstack(IntMatrix.from_rows(comp, cols=rank))
    if is_unimodular(cand):
        return cand
    # fall back to the SNF completion; always works for saturated input
    res = snf(sub)
    vinv = inverse_unimodular(res.v)
    top = res.u * sub  # spans the same row space, in SNF coordinates
    return top.vstack(IntMatrix.from_rows(vinv.data[sub.rows :], cols=rank))


def quotient_with_maps(m: GLattice, sub_basis: IntMatrix) -> QuotientResult:
    """Quotient by a saturated G-stable sublattice, with all the maps."""
    k = sub_basis.rows
    if sub_basis.cols != m.rank:
        raise LatticeError("sublattice basis has wrong ambient rank")
    if k and not is_saturated(sub_basis):
        raise NonSaturatedSublattice("sublattice is not saturated")
    t = _complete_basis(sub_basis, m.rank)
    tinv = inverse_unimodular(t)
    tinv_t = tinv.transpose()
    tt = t.transpose()

    def transform(rho: IntMatrix) -> IntMatrix:
        return tinv_t * rho * tt

    mats = {}
    for name, rho in (("sigma", m.sigma), ("tau", m.tau)):
        if rho is None:
            continue
        conj = transform(rho)
        for i in range(k, m.rank):
            for j in range(k):
                if conj[i, j] != 0:
                    raise NonStableSublattice(f"sublattice is not stable under {name}")
        mats[name] = conj
    sub_sigma = mats["sigma"].submatrix(range(k), range(k))
    quo_sigma = mats["sigma"].submatrix(range(k, m.rank), range(k, m.rank))
    if m.tau is not None:
        sub_tau = mats["tau"].submatrix(range(k), range(k))
        quo_tau = mats["tau"].submatrix(range(k, m.rank), range(k, m.rank))
        sub_lat = GLattice(m.group, sub_sigma, sub_tau, validate=False)
        quo_lat = GLattice(m.group, quo_sigma, quo_tau, validate=False)
    else:
        sub_lat = GLattice(m.group, sub_sigma, validate=False)
        quo_lat = GLattice(m.group, quo_sigma, validate=False)
    inclusion = t.submatrix(range(k), range(m.rank)).transpose()
    projection = IntMatrix.from_rows(tinv_t.data[k:], cols=m.rank)
    return QuotientResult(
        lattice=quo_lat,
        sub_lattice=sub_lat,
        basis=t,
        inclusion=inclusion,
        projection=projection,
    )


def quotient_lattice(m: GLattice, sub_basis: IntMatrix) -> GLattice:
    return quotient_with_maps(m, sub_basis).lattice


def anisotropic_sublattice(m: GLattice) -> ExtensionSpec:
    """0 -> M_0 -> M -> M/M_0 -> 0 where M_0 = ker of the full norm."""
    norm = m.full_norm_matrix()
    basis = right_kernel_basis(norm)
    q = quotient_with_maps(m, basis)
    # the quotient carries a trivial action
    ident = IntMatrix.identity(q.lattice.rank)
    if q.lattice.sigma != ident or (q.lattice.tau is not None and q.lattice.tau != ident):
        raise LatticeError("quotient by the norm kernel is not trivial")
    ext = ExtensionSpec(
        sub=q.sub_lattice,
        total=m,
        quotient=q.lattice,
        inclusion=LatticeMap(q.sub_lattice, m, q.inclusion),
        projection=LatticeMap(m, q.lattice, q.projection),
    )
    return ext


def sublattice_action(m: GLattice, basis: IntMatrix) -> GLattice:
    """Induced action on a G-stable (not necessarily saturated) sublattice."""
    mats = []
    for rho in (m.sigma, m.tau):
        if rho is None:
            mats.append(None)
            continue
        mapped = IntMatrix.from_rows(
            [rho.matvec(row) for row in basis.data], cols=m.rank
        )
        coords = express_rows(basis, mapped)
        if coords is None:
            raise NonStableSublattice("sublattice not stable under the action")
        mats.append(coords.transpose())
    if mats[1] is None:
        return GLattice(m.group, mats[0], validate=False)
    return GLattice(m.group, mats[0], mats[1], validate=False)


def hom_lattice(a: GLattice, b: GLattice) -> GLattice:
    """Hom_Z(a, b) with the conjugation action g . X = rho_b(g) X rho_a(g)^{-1}.

    Coordinates: X is b.rank x a.rank, flattened row-major.
    """
    if a.group != b.group:
        raise LatticeError("hom lattice needs a common group")
    g = a.group
    ra, rb = a.rank, b.rank

    def conj_matrix(rho_b: IntMatrix, rho_a_inv: IntMatrix) -> IntMatrix:
        size = ra * rb
        out = [[0] * size for _ in range(size)]
        for i in range(rb):
            for j in range(ra):
                col = i * ra + j
                # image of the elementary matrix E_ij
                for i2 in range(rb):
                    c1 = rho_b[i2, i]
                    if not c1:
                        continue
                    for j2 in range(ra):
                        c2 = rho_a_inv[j, j2]
                        if c2:
                            out[i2 * ra + j2][col] += c1 * c2
        return IntMatrix(out)

    sig = conj_matrix(b.sigma, a.sigma_power(g.n - 1))
    if g.is_dihedral:
        return GLattice(g, sig, conj_matrix(b.tau, a.tau), validate=False)
    return GLattice(g, sig, validate=False)
