"""Named lattices of the odd-dihedral catalog and their explicit witnesses.

Every matrix displayed in the source constructions is generated here for
arbitrary odd n: the induced pair M+/M-, the rank n-1 quotients N+/N-,
the rank n+1 extensions, and the four change-of-basis witnesses behind
the stable-permutation identities.  The census names (R, P, V, X, Y0,
Y1, Y2) are aliases of these for prime n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import is_prime
from .exactla import IntMatrix, det, is_unimodular
from .groups import class_by_label, dihedral
from .lattices import (
    GLattice,
    LatticeError,
    LatticeMap,
    direct_sum,
    induce,
    perm_lattice,
    regular_lattice,
    sign_lattice,
    trivial_lattice,
)

CATALOG_NAMES = (
    "Z",
    "Zminus",
    "ZH",
    "ZGmodTau",
    "ZG",
    "Mplus",
    "Mminus",
    "Nplus",
    "Nminus",
    "MplusTilde",
    "MminusTilde",
    "R",
    "P",
    "V",
    "X",
    "Y0",
    "Y1",
    "Y2",
)

LEE_NAMES = ("Z", "Zminus", "ZH", "R", "P", "V", "X", "Y0", "Y1", "Y2")

# constructive aliases through the census identifications
_ALIASES = {"R": "Nplus", "P": "Nminus", "V": "Mplus", "X": "Mminus",
            "Y0": "MminusTilde", "Y1": "MplusTilde", "Y2": "ZG"}

WITNESS_IDS = ("T34", "T35", "T37", "L46")


def _check_n(name: str, n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise LatticeError(f"catalog needs odd n >= 3, got {n}")
    if name in ("R", "P", "V", "X", "Y0", "Y1", "Y2") and not is_prime(n):
        raise LatticeError(f"census name {name} needs prime n, got {n}")


def shift_matrix(n: int) -> IntMatrix:
    """Cyclic shift: e_i -> e_{i+1}."""
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[(i + 1) % n][i] = 1
    return IntMatrix(a)


def flip_matrix(n: int) -> IntMatrix:
    """e_i -> e_{n-i} (fixes e_0)."""
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        b[(n - i) % n][i] = 1
    return IntMatrix(b)


def n_quotient_sigma(n: int) -> IntMatrix:
    """Companion-style shift with -1 last column (rank n-1)."""
    a = [[0] * (n - 1) for _ in range(n - 1)]
    for i in range(n - 2):
        a[i + 1][i] = 1
    for i in range(n - 1):
        a[i][n - 2] = -1
    return IntMatrix(a)


def n_quotient_tau(n: int) -> IntMatrix:
    """Anti-diagonal of size n-1."""
    return IntMatrix(
        [[1 if i + j == n - 2 else 0 for j in range(n - 1)] for i in range(n - 1)]
    )


def tilde_sigma(n: int) -> IntMatrix:
    a = shift_matrix(n)
    out = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i, j]
    out[n][n] = 1
    return IntMatrix(out)


def tilde_tau(n: int) -> IntMatrix:
    """tau on the rank n+1 extension: flip on the head, last column (1..1,-1)."""
    b = flip_matrix(n)
    out = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            out[i][j] = b[i, j]
        out[i][n] = 1
    out[n][n] = -1
    return IntMatrix(out)


def build(name: str, n: int) -> GLattice:
    """Construct a catalog lattice over D_n."""
    if name not in CATALOG_NAMES:
        raise LatticeError(f"unknown catalog name {name!r}")
    _check_n(name, n)
    name = _ALIASES.get(name, name)
    g = dihedral(n)
    if name == "Z":
        return trivial_lattice(g)
    if name == "Zminus":
        return sign_lattice(g)
    if name == "ZH":
        return perm_lattice(g, class_by_label(g, f"C_{n}"))
    if name == "ZGmodTau":
        return perm_lattice(g, class_by_label(g, "D_1"))
    if name == "ZG":
        return regular_lattice(g)
    if name == "Mplus":
        return induce(g, 1)
    if name == "Mminus":
        return induce(g, -1)
    if name == "Nplus":
        return GLattice(g, n_quotient_sigma(n), n_quotient_tau(n))
    if name == "Nminus":
        return GLattice(g, n_quotient_sigma(n), -n_quotient_tau(n))
    if name == "MplusTilde":
        return GLattice(g, tilde_sigma(n), tilde_tau(n))
    if name == "MminusTilde":
        return GLattice(g, tilde_sigma(n), -tilde_tau(n))
    raise LatticeError(f"unhandled name {name}")  # pragma: no cover


def lee_census(p: int, class_table=None) -> list[tuple[str, GLattice]]:
    """The ten indecomposable lattices over D_p (principal-ideal reps)."""
    if not is_prime(p) or p == 2:
        raise LatticeError(f"census needs an odd prime, got {p}")
    if class_table is not None and class_table.h_plus(p) != 1:
        raise LatticeError(f"census at p={p} needs h_p^+ = 1 in the class table")
    return [(name, build(name, p)) for name in LEE_NAMES]


def circulant(c) -> IntMatrix:
    """n x n circulant with first column c: entry (i, j) = c[(i - j) mod n]."""
    c = [int(x) for x in c]
    n = len(c)
    if n < 1:
        raise LatticeError("circulant needs at least one coefficient")
    return IntMatrix([[c[(i - j) % n] for j in range(n)] for i in range(n)])


def circulant_pattern_one(n: int) -> list[int]:
    """(n-1)/2 ones then zeros; determinant (n-1)/2."""
    return [1] * ((n - 1) // 2) + [0] * ((n + 1) // 2)


def circulant_pattern_two(n: int) -> list[int]:
    """(n-1)/2 minus-ones, 0, (n-3)/2 ones, 0; determinant -1."""
    return [-1] * ((n - 1) // 2) + [0] + [1] * ((n - 3) // 2) + [0]


# ---------------------------------------------------------------------------
# explicit witnesses


@dataclass(frozen=True)
class WitnessRecord:
    witness_id: str
    n: int
    lhs: GLattice
    rhs: GLattice
    change_of_basis: IntMatrix  # columns in the printed order
    intertwiner: IntMatrix  # columns reordered so rhs . W = W . lhs exactly
    allowed_dets: tuple
    embedding: LatticeMap | None = None  # L46: kernel lattice inside Z[G]


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    failures: tuple
    determinant: int

    def __bool__(self):
        return self.ok


def _columns(vectors, rank) -> IntMatrix:
    return IntMatrix(
        [[vec[i] for vec in vectors] for i in range(rank)], cols=len(vectors)
    )


def _sigma_orbit(rhs: GLattice, vec, powers) -> list:
    return [rhs.sigma_power(k % rhs.group.n).matvec(vec) for k in powers]


def witness(witness_id: str, n: int) -> WitnessRecord:
    if witness_id not in WITNESS_IDS:
        raise LatticeError(f"unknown witness {witness_id!r}")
    if n < 3 or n % 2 == 0:
        raise LatticeError(f"witnesses need odd n >= 3, got {n}")
    builder = {
        "T34": _witness_t34,
        "T35": _witness_t35,
        "T37": _witness_t37,
        "L46": _witness_l46,
    }[witness_id]
    return builder(n)


def _witness_t34(n: int) -> WitnessRecord:
    g = dihedral(n)
    rhs = direct_sum(
        perm_lattice(g, class_by_label(g, f"C_{n}")),
        perm_lattice(g, class_by_label(g, "D_1")),
    )
    rank = n + 2
    half = (n - 1) // 2
    # coordinates: u_0, u_1, v_0..v_{n-1}
    x = [1, 1] + [0] + [1] * (n - 1)
    y = [half, half + 1] + [half] * n
    t = [1, 1] + [1] * n
    orbit = _sigma_orbit(rhs, x, range(n))
    std = [orbit[k % n] for k in range(n)] + [y, t]
    printed = [orbit[k % n] for k in range(1, n + 1)] + [y, t]
    lhs = direct_sum(build("MplusTilde", n), trivial_lattice(g))
    return WitnessRecord(
        "T34", n, lhs, rhs, _columns(printed, rank), _columns(std, rank), (1,)
    )


def _witness_t35(n: int) -> WitnessRecord:
    g = dihedral(n)
    rhs = direct_sum(regular_lattice(g), trivial_lattice(g))
    rank = 2 * n + 1
    # coordinates: u_0..u_{n-1}, v_0..v_{n-1}, t
    x = [0] * rank
    x[0] = 1
    x[n] = -1
    y = [1] * n + [0] * n + [1]
    z = [0] * rank
    for i in range(1, (n - 1) // 2 + 1):
        z[i] = 1
    for j in range((n + 1) // 2, n):
        z[n + j] = 1
    z[2 * n] = 1
    xo = _sigma_orbit(rhs, x, range(n))
    zo = _sigma_orbit(rhs, z, range(n))
    std = xo + [y] + zo
    printed = [xo[k % n] for k in range(1, n + 1)] + [y] + zo
    lhs = direct_sum(
        build("MminusTilde", n), perm_lattice(g, class_by_label(g, "D_1"))
    )
    return WitnessRecord(
        "T35", n, lhs, rhs, _columns(printed, rank), _columns(std, rank), (1, -1)
    )


def _witness_t37(n: int) -> WitnessRecord:
    g = dihedral(n)
    rhs = direct_sum(
        regular_lattice(g), perm_lattice(g, class_by_label(g, f"C_{n}"))
    )
    rank = 2 * n + 2
    half = (n - 1) // 2
    # coordinates: u_0..u_{n-1}, v_0..v_{n-1}, t_0, t_1
    x = [0] * rank
    x[0] = 1
    for i in range((n + 3) // 2, n):
        x[i] = 1
    for j in range(2, (n + 1) // 2 + 1):
        x[n + j] = 1
    x[2 * n] = 1
    x[2 * n + 1] = 1
    y0 = [0] * n + [half] * n + [1, n - 1]
    z = [0] * rank
    z[0] = 1
    z[1] = 1
    for i in range((n + 3) // 2, n):
        z[i] = 1
    for j in range(1, (n + 1) // 2 + 1):
        z[n + j] = -1
    z[2 * n] = 1
    z[2 * n + 1] = -1
    y1 = [1] * n + [-half] * n + [1, -(n - 1)]
    xo = _sigma_orbit(rhs, x, range(n))
    zo = _sigma_orbit(rhs, z, range(n))
    start = (n - 3) // 2
    printed = (
        [xo[(start + k) % n] for k in range(n)]
        + [y0]
        + [zo[(start + k) % n] for k in range(n)]
        + [y1]
    )
    std = (
        [xo[(n - 1 + k) % n] for k in range(n)]
        + [y0]
        + [zo[(n - 1 + k) % n] for k in range(n)]
        + [y1]
    )
    lhs = direct_sum(build("MplusTilde", n), build("MminusTilde", n))
    return WitnessRecord(
        "T37", n, lhs, rhs, _columns(printed, rank), _columns(std, rank), (-1,)
    )


def l46_kernel_lattice(n: int) -> GLattice:
    """ker(Z[G] -> Z[H]) on the basis u_1..u_{n-1}, v_1..v_{n-1}."""
    from .exactla import block_diag

    g = dihedral(n)
    a = n_quotient_sigma(n)
    m = n - 1
    sigma = block_diag(a, a)
    tau_rows = [[0] * (2 * m) for _ in range(2 * m)]
    for j in range(m):
        # tau: u_{j+1} -> v_{n-j-1}, v_{j+1} -> u_{n-j-1}
        tau_rows[m + (m - 1 - j)][j] = 1
        tau_rows[m - 1 - j][m + j] = 1
    return GLattice(g, sigma, IntMatrix(tau_rows))


def l46_embedding(n: int) -> LatticeMap:
    """The explicit kernel basis as vectors inside Z[G]."""
    g = dihedral(n)
    reg = regular_lattice(g)
    ker = l46_kernel_lattice(n)
    m = n - 1
    cols = []
    for i in range(1, n):
        vec = [0] * (2 * n)
        vec[(i + (n - 1) // 2) % n] = 1
        vec[(i + (n + 1) // 2) % n] = -1
        cols.append(vec)
    for i in range(1, n):
        vec = [0] * (2 * n)
        vec[n + (i + (n + 1) // 2) % n] = 1
        vec[n + (i + (n - 1) // 2) % n] = -1
        cols.append(vec)
    matrix = IntMatrix([[cols[j][i] for j in range(2 * m)] for i in range(2 * n)])
    return LatticeMap(source=ker, target=reg, matrix=matrix)


def _witness_l46(n: int) -> WitnessRecord:
    rhs = l46_kernel_lattice(n)
    m = n - 1
    # coordinates: u_1..u_{n-1}, v_1..v_{n-1}
    def uvec(i):  # u_i with u_0 folded in
        vec = [0] * (2 * m)
        if i % n == 0:
            for k in range(m):
                vec[k] = -1
        else:
            vec[(i % n) - 1] = 1
        return vec

    def vvec(i):
        vec = [0] * (2 * m)
        if i % n == 0:
            for k in range(m):
                vec[m + k] = -1
        else:
            vec[m + (i % n) - 1] = 1
        return vec

    def add(a, b, sb=1):
        return [p + sb * q for p, q in zip(a, b)]

    xs = [add(uvec(i), vvec(i)) for i in range(1, n)]
    ys = [add(uvec(i - 1), vvec(i + 1), -1) for i in range(1, n)]
    std = xs + ys
    coef = _columns(std, 2 * m)
    printed = coef.transpose()  # the source prints the transpose
    lhs = direct_sum(build("Nplus", n), build("Nminus", n))
    return WitnessRecord(
        "L46", n, lhs, rhs, printed, coef, (1,), embedding=l46_embedding(n)
    )


def verify_witness(w: WitnessRecord) -> WitnessCheck:
    """Unimodularity plus exact intertwining of the generator matrices."""
    failures = []
    d = det(w.change_of_basis) if w.change_of_basis.is_square else 0
    if d not in w.allowed_dets:
        failures.append(f"det(change_of_basis) = {d}, expected one of {w.allowed_dets}")
    wi = w.intertwiner
    if not is_unimodular(wi):
        failures.append("intertwiner is not unimodular")
    if w.rhs.sigma * wi != wi * w.lhs.sigma:
        failures.append("sigma relation fails: rhs.sigma * W != W * lhs.sigma")
    if w.rhs.tau * wi != wi * w.lhs.tau:
        failures.append("tau relation fails: rhs.tau * W != W * lhs.tau")
    if w.embedding is not None:
        try:
            w.embedding.check()
        except LatticeError as exc:
            failures.append(f"embedding fails: {exc}")
    return WitnessCheck(ok=not failures, failures=tuple(failures), determinant=d)


def render_matrix(m: IntMatrix) -> str:
    """Canonical text form used for golden-file byte comparison."""
    return "\n".join(" ".join(str(x) for x in row) for row in m.data) + "\n"


# ---------------------------------------------------------------------------
# ideal-twisted census lattices

TWISTABLE = ("R", "P", "V", "X", "Y0", "Y1", "Y2")


def _ideal_row_lattice(p: int, ideal, extra_factor=None) -> "GLattice":
    """R.A (optionally times an element) with sigma = zeta, tau = conjugation."""
    from .cyclotomic import (
        conj_matrix,
        elem_mul,
        eta_power_rows,
        mult_matrix,
    )
    from .exactla import express_rows, row_space_hnf

    emb = eta_power_rows(p)
    rows = []
    zeta_m = mult_matrix(p, [0, 1])
    for a_row in ideal.basis.data:
        vec = [0] * (p - 1)
        for c, erow in zip(a_row, emb.data):
            if c:
                for k in range(p - 1):
                    vec[k] += c * erow[k]
        if extra_factor is not None:
            vec = list(elem_mul(p, tuple(vec), extra_factor))
        cur = list(vec)
        for _ in range(p - 1):
            rows.append(cur)
            cur = list((IntMatrix([cur]) * zeta_m).data[0])
    basis = row_space_hnf(IntMatrix(rows, cols=p - 1))
    if basis.rows != p - 1:
        raise LatticeError("twist ideal did not span a full-rank lattice")
    sig = express_rows(basis, basis * zeta_m)
    conj = express_rows(basis, basis * conj_matrix(p))
    if sig is None or conj is None:
        raise LatticeError("twisted basis is not stable under the action")
    return GLattice(dihedral(p), sig.transpose(), conj.transpose())


def _noncoboundary_cocycle(bottom: GLattice, top: GLattice):
    """A 1-cocycle G -> Hom(top, bottom) whose class is nonzero."""
    from .cohomology import one_cocycles
    from .exactla import solve_left
    from .groups import full_class
    from .lattices import hom_lattice

    hom = hom_lattice(top, bottom)
    space = one_cocycles(hom, full_class(bottom.group))
    for row in space.cocycles.data:
        if space.coboundaries and solve_left(
            IntMatrix(list(space.coboundaries), cols=len(row)), row
        ) is not None:
            continue
        return space, row
    raise LatticeError("every cocycle is a coboundary; extension would split")


def _nonsplit_extension(bottoms: list, top: GLattice) -> GLattice:
    """0 -> (+)bottoms -> E -> top -> 0, class nonzero in every component."""
    from .groups import GroupElement

    g = top.group
    rt = top.rank
    pieces = []  # (bottom, phi_prime lookup)
    for bottom in bottoms:
        space, chosen = _noncoboundary_cocycle(bottom, top)
        index = {a: i for i, a in enumerate(space.elements)}
        rb = bottom.rank

        def phi_prime(el, chosen=chosen, index=index, rb=rb):
            base = index[el] * rb * rt
            return IntMatrix(
                [[chosen[base + i * rt + j] for j in range(rt)] for i in range(rb)],
                cols=rt,
            )

        pieces.append((bottom, phi_prime))

    def assemble(el, rho_name):
        rho_t = getattr(top, rho_name)
        total_rb = sum(b.rank for b, _ in pieces)
        rows = []
        offset = 0
        for bottom, phi_prime in pieces:
            rho_b = getattr(bottom, rho_name)
            phi = phi_prime(el) * rho_t
            for i in range(bottom.rank):
                row = [0] * total_rb
                for j in range(bottom.rank):
                    row[offset + j] = rho_b[i, j]
                rows.append(row + list(phi.data[i]))
            offset += bottom.rank
        for i in range(rt):
            rows.append([0] * total_rb + list(rho_t.data[i]))
        return IntMatrix(rows, cols=total_rb + rt)

    sigma = assemble(GroupElement(1 % g.n, 0), "sigma")
    if not g.is_dihedral:
        return GLattice(g, sigma)
    tau = assemble(GroupElement(0, 1), "tau")
    return GLattice(g, sigma, tau)


def twisted_lattice(base: str, ideal) -> GLattice:
    """Census lattice twisted by an ideal of the real subfield."""
    if base not in TWISTABLE:
        raise LatticeError(f"twistable bases are {TWISTABLE}, got {base!r}")
    if not ideal.real_subfield:
        raise LatticeError("twisting ideal must live in the real subfield")
    p = ideal.p
    _check_n(base, p)
    ideal.validate()
    if base == "R":
        return _ideal_row_lattice(p, ideal)
    if base == "P":
        from .cyclotomic import reduce_poly

        one_minus_zeta = tuple(reduce_poly(p, [1, -1]))
        return _ideal_row_lattice(p, ideal, extra_factor=one_minus_zeta)
    g = dihedral(p)
    if base == "V":
        return _nonsplit_extension([twisted_lattice("P", ideal)], trivial_lattice(g))
    if base == "X":
        return _nonsplit_extension([twisted_lattice("R", ideal)], sign_lattice(g))
    if base == "Y0":
        return _nonsplit_extension([twisted_lattice("R", ideal)], build("ZH", p))
    if base == "Y1":
        return _nonsplit_extension([twisted_lattice("P", ideal)], build("ZH", p))
    # Y2: the class must be nonzero in both bottom components
    return _nonsplit_extension(
        [twisted_lattice("R", ideal), build("P", p)], build("ZH", p)
    )
