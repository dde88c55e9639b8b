"""Dense exact matrices over a :class:`~ou_kit.rings.Ring`.

Indices in the public helpers (``elementary``, ``Mat.entry``) are 1-based to
match the usual ``E_{i,j}(a)`` notation; the ``rows`` grid itself is a plain
0-based tuple of tuples.  0x0 matrices are allowed.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

from .rings import Element, Ring


class MatrixError(ValueError):
    pass


class NotInvertible(MatrixError):
    def __init__(self, det: str):
        super().__init__(f"not invertible over this ring: determinant {det} is not a unit")
        self.det = det


class Mat:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Ring, rows: Iterable[Sequence[Element]], ncols: int | None = None):
        grid = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(grid[0]) if grid else 0
        for r in grid:
            if len(r) != ncols:
                raise MatrixError("ragged rows")
        self.ring = ring
        self.nrows = len(grid)
        self.ncols = ncols
        self.rows = grid

    @classmethod
    def _trusted(cls, ring: Ring, rows: tuple, ncols: int) -> Mat:
        """Wrap an already rectangular tuple of row tuples without re-checking it."""
        self = object.__new__(cls)
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows
        return self

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_ints(cls, ring: Ring, rows: Iterable[Sequence[int]]) -> Mat:
        return cls(ring, [[ring.from_int(x) for x in r] for r in rows])

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int | None = None) -> Mat:
        ncols = nrows if ncols is None else ncols
        return cls(ring, [[ring.zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> Mat:
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def row(cls, ring: Ring, v: Sequence[Element]) -> Mat:
        return cls(ring, [tuple(v)], len(v))

    @classmethod
    def column(cls, ring: Ring, v: Sequence[Element]) -> Mat:
        return cls(ring, [(x,) for x in v], 1)

    # -- basics -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def entry(self, i: int, j: int) -> Element:
        return self.rows[i - 1][j - 1]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape or not _same_ring(self.ring, other.ring):
            return False
        # elements are kept in canonical form, so tuple equality is ring equality
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self.rows))

    def __repr__(self) -> str:
        fmt = self.ring.format
        body = ", ".join("[" + ", ".join(fmt(x) for x in r) + "]" for r in self.rows)
        return f"Mat({self.ring.descriptor}, {self.nrows}x{self.ncols}, [{body}])"

    def __matmul__(self, other: Mat) -> Mat:
        return mat_mul(self, other)

    def __add__(self, other: Mat) -> Mat:
        _same(self, other)
        if self.shape != other.shape:
            raise MatrixError(f"shape mismatch {self.shape} vs {other.shape}")
        add = self.ring.add
        rows = tuple(tuple(map(add, ra, rb)) for ra, rb in zip(self.rows, other.rows))
        return Mat._trusted(self.ring, rows, self.ncols)

    def __neg__(self) -> Mat:
        neg = self.ring.neg
        return Mat(self.ring, [[neg(a) for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: Mat) -> Mat:
        return self + (-other)

    def scale(self, c: Element) -> Mat:
        """Left scalar multiple ``c * A``."""
        mul = self.ring.mul
        return Mat(self.ring, [[mul(c, a) for a in r] for r in self.rows], self.ncols)

    def transpose(self) -> Mat:
        return Mat(self.ring, zip(*self.rows), self.nrows) if self.nrows else Mat(self.ring, [[] for _ in range(self.ncols)], 0)

    def conj(self) -> Mat:
        c = self.ring.conj
        return Mat(self.ring, [[c(a) for a in r] for r in self.rows], self.ncols)

    def is_identity(self) -> bool:
        if not self.is_square:
            return False
        z, o = self.ring.zero, self.ring.one
        return all(x == (o if i == j else z) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Mat:
        """0-based half-open slice ``A[r0:r1, c0:c1]``."""
        return Mat(self.ring, [r[c0:c1] for r in self.rows[r0:r1]], c1 - c0)

    def with_entry(self, i: int, j: int, value: Element) -> Mat:
        grid = [list(r) for r in self.rows]
        grid[i - 1][j - 1] = value
        return Mat(self.ring, grid, self.ncols)


def _same_ring(r: Ring, s: Ring) -> bool:
    return r is s or r == s


def _same(a: Mat, b: Mat) -> None:
    if not _same_ring(a.ring, b.ring):
        raise MatrixError(f"ring mismatch: {a.ring.descriptor} vs {b.ring.descriptor}")


def mat_mul(A: Mat, B: Mat) -> Mat:
    _same(A, B)
    if A.ncols != B.nrows:
        raise MatrixError(f"dimension mismatch: {A.shape} @ {B.shape}")
    R = A.ring
    add, mul = R.add, R.mul
    zero = R.zero
    ncols = B.ncols
    # Skip zero entries: most matrices here are identity plus a few entries.
    bnz = [[(j, x) for j, x in enumerate(r) if x != zero] for r in B.rows]
    out = []
    for arow in A.rows:
        acc = [zero] * ncols
        for k, a in enumerate(arow):
            if a == zero:
                continue
            for j, b in bnz[k]:
                acc[j] = add(acc[j], mul(a, b))
        out.append(tuple(acc))
    return Mat._trusted(R, tuple(out), ncols)


def mat_prod(ring: Ring, n: int, factors: Iterable[Mat]) -> Mat:
    acc = Mat.identity(ring, n)
    for f in factors:
        acc = acc @ f
    return acc


def elementary(ring: Ring, n: int, i: int, j: int, a: Element) -> Mat:
    """``E_{i,j}(a)``: the n x n identity with ``a`` added at (i, j)."""
    if i == j:
        raise MatrixError("elementary matrix needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise MatrixError(f"index ({i}, {j}) out of range for size {n}")
    return Mat.identity(ring, n).with_entry(i, j, a)


def elementary_product(ring: Ring, n: int, letters: Iterable[tuple[int, int, Element]]) -> Mat:
    """Ordered product of ``E_{i,j}(a)`` letters, applied as column operations."""
    z, o = ring.zero, ring.one
    grid = [[o if r == c else z for c in range(n)] for r in range(n)]
    add, mul = ring.add, ring.mul
    for i, j, a in letters:
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise MatrixError(f"bad elementary letter ({i}, {j})")
        # M @ E_{i,j}(a): column j += column i * a
        for row in grid:
            row[j - 1] = add(row[j - 1], mul(row[i - 1], a))
    return Mat(ring, grid, n)


def perp(A: Mat, B: Mat) -> Mat:
    """Block-diagonal sum ``diag(A, B)``."""
    _same(A, B)
    if not (A.is_square and B.is_square):
        raise MatrixError("perp needs square blocks")
    z = A.ring.zero
    na, nb = A.nrows, B.nrows
    grid = [list(r) + [z] * nb for r in A.rows] + [[z] * na + list(r) for r in B.rows]
    return Mat(A.ring, grid, na + nb)


def block_diag(ring: Ring, *blocks: Mat) -> Mat:
    out = Mat.zeros(ring, 0)
    for b in blocks:
        out = perp(out, b)
    return out


def conj_transpose(A: Mat) -> Mat:
    """``(A*)_{ij} = bar(A_{ji})``."""
    return A.transpose().conj()


# ---------------------------------------------------------------------------
# Division-free determinant and inverse (commutative rings)
# ---------------------------------------------------------------------------


def charpoly(A: Mat) -> list[Element]:
    """Coefficients of ``det(tI - A)``, leading first, by Berkowitz's method."""
    if not A.is_square:
        raise MatrixError("charpoly needs a square matrix")
    R = A.ring
    if not R.commutative:
        raise MatrixError("Berkowitz needs a commutative ring")
    add, mul, neg = R.add, R.mul, R.neg
    n = A.nrows
    rows = A.rows
    poly = [R.one]
    # Grow from the bottom-right 1x1 block outward.
    for k in range(n - 1, -1, -1):
        a = rows[k][k]
        r_vec = rows[k][k + 1:]
        c_vec = [rows[i][k] for i in range(k + 1, n)]
        size = n - k
        # First column of the Toeplitz matrix: 1, -a, -R C, -R A' C, ...
        col = [R.one, neg(a)]
        x = c_vec
        sub = [row[k + 1:] for row in rows[k + 1:]]
        for _ in range(size - 1):
            col.append(neg(R.sum(mul(p, q) for p, q in zip(r_vec, x))))
            x = [R.sum(mul(p, q) for p, q in zip(srow, x)) for srow in sub]
        new = []
        for i in range(size + 1):
            acc = R.zero
            for j in range(min(i + 1, len(poly))):
                acc = add(acc, mul(col[i - j], poly[j]))
            new.append(acc)
        poly = new
    return poly


def determinant(A: Mat) -> Element:
    poly = charpoly(A)
    c = poly[-1]
    return c if A.nrows % 2 == 0 else A.ring.neg(c)


def determinant_leibniz(A: Mat) -> Element:
    """Permutation-expansion determinant; only for small matrices."""
    R = A.ring
    n = A.nrows
    total = R.zero
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            while seen[i] != i:
                j = seen[i]
                seen[i], seen[j] = seen[j], seen[i]
                sign = -sign
        term = R.from_int(sign)
        for i in range(n):
            term = R.mul(term, A.rows[i][perm[i]])
        total = R.add(total, term)
    return total


def inverse_commutative(A: Mat) -> Mat:
    """Inverse via Cayley-Hamilton on the Berkowitz characteristic polynomial.

    With ``det(tI - A) = t^n + c1 t^(n-1) + ... + cn`` we have
    ``A^-1 = -cn^-1 (A^(n-1) + c1 A^(n-2) + ... + c_(n-1) I)``.
    """
    R = A.ring
    n = A.nrows
    poly = charpoly(A)
    if n == 0:
        return A
    det = determinant(A)
    cn_inv = R.unit_inverse(poly[-1])
    if cn_inv is None:
        raise NotInvertible(R.format(det))
    # Horner: B = A^(n-1) + c1 A^(n-2) + ... + c_(n-1) I
    ident = Mat.identity(R, n)
    acc = ident
    for c in poly[1:-1]:
        acc = (acc @ A) + ident.scale(c)
    return acc.scale(R.neg(cn_inv))
