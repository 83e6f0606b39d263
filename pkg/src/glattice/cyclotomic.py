"""Exact arithmetic in Z[zeta_p], its real subfield, and their ideals.

Elements are integer coordinate rows over the power basis 1, zeta, ...,
zeta^{p-2} (or 1, eta, ..., eta^{(p-3)/2} with eta = zeta + zeta^{-1}).
Ideals are full-rank row lattices in HNF.  No floating point anywhere;
short-vector work elsewhere uses exact rationals on the trace form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .exactla import (
    IntMatrix,
    det,
    express_rows,
    kernel_basis,
    row_space_hnf,
    solve_left,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_p(p: int) -> None:
    if not is_prime(p) or p == 2:
        raise ValueError(f"need an odd prime, got {p}")


def reduce_poly(p: int, coeffs) -> list[int]:
    """Reduce an integer polynomial in zeta to the power basis (length p-1)."""
    out = list(coeffs) + [0] * max(0, p - len(coeffs))
    # first fold exponents down mod p (zeta^p = 1)
    folded = [0] * p
    for i, c in enumerate(out):
        folded[i % p] += c
    # then eliminate zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
    top = folded[p - 1]
    base = [folded[i] - top for i in range(p - 1)]
    return base


def mult_matrix(p: int, alpha) -> IntMatrix:
    """Row i holds the power-basis coordinates of alpha * zeta^i."""
    alpha = list(alpha)
    rows = []
    for i in range(p - 1):
        shifted = [0] * i + alpha
        rows.append(reduce_poly(p, shifted))
    return IntMatrix(rows, cols=p - 1)


def conj_matrix(p: int) -> IntMatrix:
    """Row i holds the coordinates of zeta^{-i}."""
    rows = []
    for i in range(p - 1):
        vec = [0] * p
        vec[(-i) % p] = 1
        rows.append(reduce_poly(p, vec))
    return IntMatrix(rows, cols=p - 1)


def elem_mul(p: int, a, b) -> tuple:
    """Product of two power-basis coordinate rows."""
    prod = [0] * (2 * p)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return tuple(reduce_poly(p, prod))


def field_norm(p: int, alpha) -> int:
    """Norm of an element: determinant of multiplication by it."""
    return det(mult_matrix(p, alpha))


def one_element(p: int) -> tuple:
    return tuple([1] + [0] * (p - 2))


# --- real subfield -----------------------------------------------------------


def eta_power_rows(p: int) -> IntMatrix:
    """(p-1)/2 rows: coordinates of eta^k in Z[zeta], eta = zeta + zeta^{-1}."""
    _check_p(p)
    half = (p - 1) // 2
    vec = [0] * p
    vec[1] = 1
    vec[p - 1] = 1
    eta = reduce_poly(p, vec)
    rows = [list(one_element(p))]
    cur = one_element(p)
    for _ in range(half - 1):
        cur = elem_mul(p, cur, eta)
        rows.append(list(cur))
    return IntMatrix(rows, cols=p - 1)


def real_mult_eta_matrix(p: int) -> IntMatrix:
    """Multiplication by eta on the eta-power basis of the real subfield."""
    half = (p - 1) // 2
    basis = eta_power_rows(p)
    vec = [0] * p
    vec[1] = 1
    vec[p - 1] = 1
    eta = tuple(reduce_poly(p, vec))
    rows = []
    for i in range(half):
        target = elem_mul(p, tuple(basis.data[i]), eta)
        coords = solve_left(basis, target)
        if coords is None:
            raise ValueError("eta power escaped the real subfield basis")
        rows.append(list(coords))
    return IntMatrix(rows, cols=half)


# --- ideals ------------------------------------------------------------------


@dataclass(frozen=True)
class IdealHNF:
    """Full-rank ideal given by a Z-basis (rows, HNF) over the power basis."""

    p: int
    real_subfield: bool
    basis: IntMatrix

    @property
    def degree(self) -> int:
        return (self.p - 1) // 2 if self.real_subfield else self.p - 1

    def norm(self) -> int:
        return abs(det(self.basis))

    def generator_matrix(self) -> IntMatrix:
        return real_mult_eta_matrix(self.p) if self.real_subfield else mult_matrix(
            self.p, [0, 1]
        )

    def validate(self) -> None:
        if self.basis.rows != self.degree or self.basis.cols != self.degree:
            raise ValueError("ideal basis must be square of the field degree")
        if det(self.basis) == 0:
            raise ValueError("ideal basis is singular (zero ideal)")
        mapped = self.basis * self.generator_matrix()
        if express_rows(self.basis, mapped) is None:
            raise ValueError("basis not closed under the ring generator")

    def __eq__(self, other):
        return (
            isinstance(other, IdealHNF)
            and self.p == other.p
            and self.real_subfield == other.real_subfield
            and row_space_hnf(self.basis) == row_space_hnf(other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.real_subfield, row_space_hnf(self.basis)))


def _hnf_square(rows: IntMatrix, degree: int) -> IntMatrix:
    h = row_space_hnf(rows)
    if h.rows != degree:
        raise ValueError("ideal basis must have full rank")
    return h


def ideal_from_rows(p: int, rows: IntMatrix, real_subfield: bool = False) -> IdealHNF:
    degree = (p - 1) // 2 if real_subfield else p - 1
    ideal = IdealHNF(p, real_subfield, _hnf_square(rows, degree))
    ideal.validate()
    return ideal


def unit_ideal(p: int, real_subfield: bool = False) -> IdealHNF:
    degree = (p - 1) // 2 if real_subfield else p - 1
    return IdealHNF(p, real_subfield, IntMatrix.identity(degree))


def principal_ideal(p: int, alpha, real_subfield: bool = False) -> IdealHNF:
    """(alpha) from a coordinate row."""
    if real_subfield:
        half = (p - 1) // 2
        m = real_mult_eta_matrix(p)
        rows = [list(alpha)]
        current = IntMatrix([list(alpha)])
        for _ in range(half - 1):
            current = current * m
            rows.append(list(current.data[0]))
        return ideal_from_rows(p, IntMatrix(rows, cols=half), True)
    return ideal_from_rows(p, mult_matrix(p, list(alpha)))


def ideal_mul(a: IdealHNF, b: IdealHNF) -> IdealHNF:
    if (a.p, a.real_subfield) != (b.p, b.real_subfield):
        raise ValueError("ideal product needs matching rings")
    p = a.p
    rows = []
    if a.real_subfield:
        emb = eta_power_rows(p)
        for ra in a.basis.data:
            ea = _embed_real(p, ra)
            for rb in b.basis.data:
                eb = _embed_real(p, rb)
                prod = elem_mul(p, ea, eb)
                coords = solve_left(emb, prod)
                rows.append(list(coords))
        return ideal_from_rows(p, IntMatrix(rows, cols=a.degree), True)
    for ra in a.basis.data:
        for rb in b.basis.data:
            rows.append(list(elem_mul(p, ra, rb)))
    return ideal_from_rows(p, IntMatrix(rows, cols=p - 1))


def _embed_real(p: int, coords) -> tuple:
    emb = eta_power_rows(p)
    out = [0] * (p - 1)
    for c, row in zip(coords, emb.data):
        if c:
            for k in range(p - 1):
                out[k] += c * row[k]
    return tuple(out)


def ideal_scale(a: IdealHNF, k: int) -> IdealHNF:
    return ideal_from_rows(a.p, a.basis * k, a.real_subfield)


@dataclass(frozen=True)
class FractionalIdeal:
    num: IdealHNF
    den: int  # positive

    def normalized(self) -> "FractionalIdeal":
        g = self.den
        for row in self.num.basis.data:
            for x in row:
                g = gcd(g, x)
        if g <= 1:
            return self
        basis = IntMatrix([[x // g for x in row] for row in self.num.basis.data])
        return FractionalIdeal(ideal_from_rows(self.num.p, basis, self.num.real_subfield), self.den // g)

    def integral_representative(self) -> IdealHNF:
        """Integral ideal in the same class (denominator is principal)."""
        return self.normalized().num


def ideal_inverse(a: IdealHNF) -> FractionalIdeal:
    """(R : A) as C / N with C = {y : y.A inside N.R}, N = norm(A)."""
    if a.real_subfield:
        raise NotImplementedError("inverse only needed over the full ring")
    p = a.p
    n = a.norm()
    degree = p - 1
    blocks = [mult_matrix(p, list(row)) for row in a.basis.data]
    stacked = blocks[0]
    for b in blocks[1:]:
        stacked = stacked.hstack(b)
    # y in Z^degree with y*stacked = n * z
    aug = stacked.vstack(IntMatrix([[n if i == j else 0 for j in range(stacked.cols)] for i in range(stacked.cols)]))
    kern = kernel_basis(aug)
    ys = IntMatrix([row[:degree] for row in kern.data], cols=degree)
    num = ideal_from_rows(p, ys)
    return FractionalIdeal(num, n).normalized()


def ideal_div_to_integral(a: IdealHNF, b: IdealHNF) -> IdealHNF:
    """Integral representative of the class of A * B^{-1}."""
    inv = ideal_inverse(b)
    return ideal_mul(a, inv.num)


def ideal_contains(a: IdealHNF, element) -> bool:
    return solve_left(a.basis, element) is not None


# --- factorization of the cyclotomic polynomial mod ell ----------------------


def _poly_trim(f):
    while f and f[-1] == 0:
        f = f[:-1]
    return f


def _poly_mul_mod(a, b, f, ell):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    return _poly_rem(out, f, ell)


def _poly_rem(a, f, ell):
    a = [x % ell for x in a]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, ell)
    for i in range(len(a) - 1, df - 1, -1):
        c = (a[i] * inv_lead) % ell
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % ell
    return _poly_trim(a[:df]) or [0]

def _poly_gcd(a, b, ell):
    a = _poly_trim([x % ell for x in a]) or [0]
    b = _poly_trim([x % ell for x in b]) or [0]
    while b != [0]:
        a, b = b, _poly_rem(a, b, ell)
        b = _poly_trim(b) or [0]
    # monic normalize
    if a != [0]:
        inv = pow(a[-1], -1, ell)
        a = [(x * inv) % ell for x in a]
    return a


def _poly_powmod(base, e, f, ell):
    result = [1]
    base = _poly_rem(base, f, ell)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, f, ell)
        base = _poly_mul_mod(base, base, f, ell)
        e >>= 1
    return result


def _poly_sub(a, b, ell):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % ell
    return _poly_trim([x % ell for x in out]) or [0]


def factor_cyclotomic_mod(p: int, ell: int) -> list[list[int]]:
    """Monic irreducible factors of Phi_p mod ell (distinct unless ell = p).

    For ell = p the single factor X - 1 is returned (with multiplicity
    p - 1 implied).  Otherwise all factors share degree ord_p(ell).
    """
    _check_p(p)
    if ell == p:
        return [[-1 % p, 1]]
    phi = [1] * p  # 1 + X + ... + X^{p-1}
    d = 1
    r = ell % p
    while r != 1:
        r = (r * ell) % p
        d += 1
    count = (p - 1) // d
    factors = [phi]
    rng_state = [17]

    def next_rand_poly(deg):
        out = []
        for _ in range(deg):
            rng_state[0] = (rng_state[0] * 1103515245 + 12345) % (2**31)
            out.append(rng_state[0] % ell)
        return _poly_trim(out) or [0]

    result = []
    while factors:
        f = factors.pop()
        if (len(f) - 1) == d:
            inv = pow(f[-1], -1, ell)
            result.append([(x * inv) % ell for x in f])
            continue
        # Cantor-Zassenhaus equal-degree split
        while True:
            a = next_rand_poly(len(f) - 1)
            if _poly_trim(a) in ([], [0]):
                continue
            if ell == 2:
                # trace map over F_2
                t = list(a)
                acc = list(a)
                for _ in range(d - 1):
                    acc = _poly_mul_mod(acc, acc, f, ell)
                    t = _poly_sub(t, [(-x) % ell for x in acc], ell)
                g = _poly_gcd(f, t, ell)
            else:
                e = (ell**d - 1) // 2
                b = _poly_powmod(a, e, f, ell)
                g = _poly_gcd(f, _poly_sub(b, [1], ell), ell)
            if g != [0] and 0 < len(g) - 1 < len(f) - 1:
                q, rr = _poly_divmod(f, g, ell)
                assert rr == [0]
                factors.append(g)
                factors.append(q)
                break
    assert len(result) == count
    return sorted(result)


def _poly_divmod(a, b, ell):
    a = [x % ell for x in a]
    b = _poly_trim([x % ell for x in b])
    db = len(b) - 1
    inv = pow(b[-1], -1, ell)
    q = [0] * max(1, len(a) - db)
    r = list(a)
    for i in range(len(a) - 1, db - 1, -1):
        c = (r[i] * inv) % ell
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % ell
    return _poly_trim(q) or [0], _poly_trim(r) or [0]


def prime_ideal_above(p: int, ell: int, factor: list[int]) -> IdealHNF:
    """(ell, g(zeta)) for a factor g of Phi_p mod ell."""
    rows = [[ell if i == j else 0 for j in range(p - 1)] for i in range(p - 1)]
    g_coords = reduce_poly(p, [x % ell for x in factor])
    rows.extend(mult_matrix(p, g_coords).data)
    return ideal_from_rows(p, IntMatrix(rows, cols=p - 1))


# --- ideals as lattices -------------------------------------------------------


def ideal_cyclic_lattice(a: IdealHNF):
    """The ideal as a C_p-lattice: sigma acts by multiplication by zeta."""
    from .groups import cyclic
    from .lattices import GLattice

    if a.real_subfield:
        raise ValueError("need a full-ring ideal")
    p = a.p
    action = express_rows(a.basis, a.basis * mult_matrix(p, [0, 1]))
    if action is None:
        raise ValueError("ideal basis not stable under zeta")
    return GLattice(cyclic(p), action.transpose())


def ideal_dihedral_lattice(a: IdealHNF):
    """A conjugation-stable ideal as a D_p-lattice (sigma = zeta, tau = conj)."""
    from .groups import dihedral
    from .lattices import GLattice

    if a.real_subfield:
        raise ValueError("need a full-ring ideal")
    p = a.p
    sig = express_rows(a.basis, a.basis * mult_matrix(p, [0, 1]))
    conj = express_rows(a.basis, a.basis * conj_matrix(p))
    if sig is None or conj is None:
        raise ValueError("ideal basis not stable under the dihedral action")
    return GLattice(dihedral(p), sig.transpose(), conj.transpose())
