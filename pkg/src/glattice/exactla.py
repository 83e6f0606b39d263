"""Exact integer matrix algebra: SNF, HNF, determinants, kernels.

Everything here works on arbitrary-precision Python ints; there is no
floating point anywhere in this module.  Matrices are immutable
(tuple-of-tuples) so they can be hashed and shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        self.data = rows
        self.rows = len(rows)
        if rows:
            self.cols = len(rows[0])
            if any(len(r) != self.cols for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != self.cols:
                raise ValueError("cols mismatch")
        else:
            if cols is None:
                raise ValueError("empty matrix needs explicit column count")
            self.cols = cols

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix([[0] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols=cols)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        if self.rows == 0 or self.cols == 0:
            return f"IntMatrix({self.rows}x{self.cols})"
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"IntMatrix[{body}]"

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def tolists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in r] for r in self.data], cols=self.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            cols=self.cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix([[x * other for x in r] for r in self.data], cols=self.cols)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = other.transpose().data
        out = []
        for r in self.data:
            out.append([sum(a * b for a, b in zip(r, c)) for c in ot])
        return IntMatrix(out, cols=other.cols)

    def __rmul__(self, k: int) -> "IntMatrix":
        return self * k

    def matvec(self, v: Sequence[int]) -> tuple:
        """self acting on a column vector."""
        if len(v) != self.cols:
            raise ValueError("length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def vecmat(self, v: Sequence[int]) -> tuple:
        """Row vector times self."""
        if len(v) != self.rows:
            raise ValueError("length mismatch")
        return tuple(
            sum(v[i] * self.data[i][j] for i in range(self.rows)) for j in range(self.cols)
        )

    def power(self, k: int) -> "IntMatrix":
        if not self.is_square:
            raise ValueError("power of non-square matrix")
        if k < 0:
            return inverse_unimodular(self).power(-k)
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return IntMatrix(
            [list(r1) + list(r2) for r1, r2 in zip(self.data, other.data)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("col mismatch")
        return IntMatrix(list(self.data) + list(other.data), cols=self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for j in cols] for i in rows], cols=len(cols)
        )


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[0] * m for _ in range(n)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.rows):
            row = out[i0 + i]
            brow = b.data[i]
            for j in range(b.cols):
                row[j0 + j] = brow[j]
        i0 += b.rows
        j0 += b.cols
    return IntMatrix(out, cols=m)


@dataclass(frozen=True)
class SNFResult:
    s: IntMatrix
    u: IntMatrix
    v: IntMatrix

    def diagonal(self) -> list[int]:
        return [self.s.data[i][i] for i in range(min(self.s.rows, self.s.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


@dataclass(frozen=True)
class HNFResult:
    h: IntMatrix
    u: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for row in self.h.data if any(row))


@dataclass(frozen=True)
class AbelianInvariants:
    """Elementary divisors (each >= 2, in a divisibility chain) plus free rank."""

    torsion: tuple
    free_rank: int

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


class _Worker:
    """Mutable row-list matrices undergoing simultaneous row/col operations."""

    def __init__(self, m: IntMatrix):
        self.rows, self.cols = m.rows, m.cols
        self.s = [list(r) for r in m.data]
        self.u = [[1 if i == j else 0 for j in range(m.rows)] for i in range(m.rows)]
        self.v = [[1 if i == j else 0 for j in range(m.cols)] for i in range(m.cols)]

    def swap_rows(self, i, j):
        self.s[i], self.s[j] = self.s[j], self.s[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]

    def swap_cols(self, i, j):
        for r in self.s:
            r[i], r[j] = r[j], r[i]
        for r in self.v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(self, dst, src, q):
        srow, urow = self.s[src], self.u[src]
        d, ud = self.s[dst], self.u[dst]
        for k in range(self.cols):
            d[k] += q * srow[k]
        for k in range(self.rows):
            ud[k] += q * urow[k]

    def addmul_col(self, dst, src, q):
        for r in self.s:
            r[dst] += q * r[src]
        for r in self.v:
            r[dst] += q * r[src]

    def negate_row(self, i):
        self.s[i] = [-x for x in self.s[i]]
        self.u[i] = [-x for x in self.u[i]]

    def _move_min_pivot(self, t: int) -> bool:
        """Swap the minimal-|entry| of the trailing block to (t, t)."""
        s = self.s
        pi = pj = -1
        best = None
        for i in range(t, self.rows):
            ri = s[i]
            for j in range(t, self.cols):
                x = ri[j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pi, pj = i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if best is None:
            return False
        if pi != t:
            self.swap_rows(t, pi)
        if pj != t:
            self.swap_cols(t, pj)
        if s[t][t] < 0:
            self.negate_row(t)
        return True

    def sweep(self, start: int) -> None:
        """Diagonalize the trailing block from (start, start) on.

        The minimal-absolute-value pivot is re-selected on every pass;
        without that, intermediate entries explode.
        """
        s = self.s
        t = start
        limit = min(self.rows, self.cols)
        while t < limit:
            if not self._move_min_pivot(t):
                break
            while True:
                piv = s[t][t]
                for i in range(t + 1, self.rows):
                    q = s[i][t] // piv
                    if q:
                        self.addmul_row(i, t, -q)
                for j in range(t + 1, self.cols):
                    q = s[t][j] // piv
                    if q:
                        self.addmul_col(j, t, -q)
                if all(s[i][t] == 0 for i in range(t + 1, self.rows)) and all(
                    s[t][j] == 0 for j in range(t + 1, self.cols)
                ):
                    break
                self._move_min_pivot(t)
            t += 1


def snf(m: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms: u * m * v = s.

    Diagonal entries are non-negative, satisfy d_1 | d_2 | ..., zeros trail.
    """
    w = _Worker(m)
    w.sweep(0)
    limit = min(m.rows, m.cols)
    t = 0
    while t < limit - 1:
        d = w.s[t][t]
        if d == 0:
            break
        offender = None
        for i in range(t + 1, limit):
            if w.s[i][i] % d:
                offender = i
                break
        if offender is None:
            t += 1
            continue
        # fold the offending diagonal entry back into the block at t and redo
        w.addmul_col(t, offender, 1)
        w.sweep(t)
    return SNFResult(
        IntMatrix(w.s, cols=m.cols),
        IntMatrix(w.u, cols=m.rows),
        IntMatrix(w.v, cols=m.cols),
    )


def hnf(m: IntMatrix) -> HNFResult:
    """Row Hermite normal form: u * m = h, u unimodular.

    Echelon with positive pivots; entries above each pivot reduced into
    [0, pivot).  Zero rows sink to the bottom.
    """
    rows, cols = m.rows, m.cols
    h = [list(r) for r in m.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    r = 0
    for j in range(cols):
        if r == rows:
            break
        while True:
            pi = -1
            best = None
            for i in range(r, rows):
                x = h[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pi = i
            if pi < 0:
                break
            if pi != r:
                h[r], h[pi] = h[pi], h[r]
                u[r], u[pi] = u[pi], u[r]
            done = True
            hr, ur = h[r], u[r]
            piv = hr[j]
            for i in range(r + 1, rows):
                x = h[i][j]
                if x:
                    q = x // piv
                    if q:
                        hi, ui = h[i], u[i]
                        for k in range(j, cols):
                            hi[k] -= q * hr[k]
                        for k in range(rows):
                            ui[k] -= q * ur[k]
                    if h[i][j]:
                        done = False
            if done:
                break
        if r < rows and h[r][j]:
            if h[r][j] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            piv = h[r][j]
            hr, ur = h[r], u[r]
            for i in range(r):
                q = h[i][j] // piv  # floor puts the entry into [0, piv)
                if q:
                    hi, ui = h[i], u[i]
                    for k in range(cols):
                        hi[k] -= q * hr[k]
                    for k in range(rows):
                        ui[k] -= q * ur[k]
            r += 1
    return HNFResult(IntMatrix(h, cols=cols), IntMatrix(u, cols=rows))


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square:
        raise ValueError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai = a[i]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (akk * ai[j] - aik * ak[j]) // prev
            ai[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def is_unimodular(m: IntMatrix) -> bool:
    return m.is_square and det(m) in (1, -1)


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (its HNF is the identity)."""
    res = hnf(m)
    if res.h != IntMatrix.identity(m.rows):
        raise ValueError("matrix is not unimodular")
    return res.u


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Saturated row basis of the left kernel {x : x * m = 0}."""
    res = hnf(m)
    rank = res.rank
    rows = [res.u.data[i] for i in range(rank, m.rows)]
    return IntMatrix.from_rows(rows, cols=m.rows)


def right_kernel_basis(m: IntMatrix) -> IntMatrix:
    """Saturated row basis of {x : m * x = 0} (solutions as rows)."""
    return kernel_basis(m.transpose())


def cokernel_invariants(m: IntMatrix) -> AbelianInvariants:
    """Invariants of Z^cols / (row space of m)."""
    res = snf(m)
    diag = res.diagonal()
    rank = sum(1 for d in diag if d)
    torsion = tuple(d for d in diag if d > 1)
    return AbelianInvariants(torsion=torsion, free_rank=m.cols - rank)


def _solve_with_hnf(res: HNFResult, n_rows: int, n_cols: int, target) -> tuple | None:
    h, u = res.h, res.u
    w = [0] * n_rows
    t = list(target)
    for i in range(n_rows):
        row = h.data[i]
        j = next((k for k, x in enumerate(row) if x), None)
        if j is None:
            break
        if t[j] % row[j]:
            return None
        c = t[j] // row[j]
        w[i] = c
        if c:
            for k in range(n_cols):
                t[k] -= c * row[k]
    if any(t):
        return None
    return tuple(
        sum(w[i] * u.data[i][k] for i in range(n_rows) if w[i]) for k in range(n_rows)
    )


def solve_left(basis: IntMatrix, target: Sequence[int]) -> tuple | None:
    """Solve x * basis = target over Z, or None if unsolvable."""
    return _solve_with_hnf(hnf(basis), basis.rows, basis.cols, target)


def express_rows(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix | None:
    """Coordinates of each row of `vectors` in `basis`, or None if any fails.

    The basis is Hermite-reduced once and every row reuses the factorization.
    """
    res = hnf(basis)
    out = []
    for row in vectors.data:
        x = _solve_with_hnf(res, basis.rows, basis.cols, row)
        if x is None:
            return None
        out.append(list(x))
    return IntMatrix.from_rows(out, cols=basis.rows)


def row_space_hnf(m: IntMatrix) -> IntMatrix:
    """Canonical (HNF, zero rows dropped) basis of the row space."""
    res = hnf(m)
    rows = [r for r in res.h.data if any(r)]
    return IntMatrix.from_rows(rows, cols=m.cols)


def is_saturated(basis: IntMatrix) -> bool:
    """True when Z^cols / rowspace(basis) is torsion-free."""
    if basis.rows == 0:
        return True
    diag = snf(basis).diagonal()
    return all(d == 1 for d in diag if d != 0) and sum(1 for d in diag if d) == basis.rows


def lattice_index(sup: IntMatrix, sub: IntMatrix) -> int | None:
    """Index [sup : sub] for sub contained in sup (row lattices, equal rank).

    Returns None when sub is not contained in sup or the ranks differ.
    """
    coords = express_rows(sup, sub)
    if coords is None:
        return None
    diag = snf(coords).diagonal()
    if sum(1 for d in diag if d) < sup.rows:
        return None
    idx = 1
    for d in diag:
        idx *= d
    return abs(idx)
