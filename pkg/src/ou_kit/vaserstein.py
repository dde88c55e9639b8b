"""Hyperbolic form matrices and Vaserstein-type matrices.

The form matrix of the odd hyperbolic space of rank ``m`` over ``V_0`` is

    Psi = psi_tilde(m) (+) phi = [[0, c], [-lam c^T, mu]]
    Psi^-1                     = [[0, d], [-lam d^T, rho]]

with ``c = (1, 0, ..., 0)``, ``d = (-lam^-1, 0, ..., 0)`` of length
``N = n + 2m - 1`` and ``mu = diag(0, psi_tilde(m-1), phi)``,
``rho = diag(0, psi_tilde_prime(m-1), phi^-1)``, both N x N.

For ``v`` in ``R^N``:

    theta(v) = I + d^T vbar mu
    eta(v)   = I - lam^-1 rho vbar^T c
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .matrix import Mat, MatrixError, block_diag, inverse_commutative, perp
from .rings import Element, Ring


class FormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# psi_tilde recursions
# ---------------------------------------------------------------------------


def psi_tilde(ring: Ring, r: int) -> Mat:
    """``psi_1 = [[0, 1], [-lam, 0]]`` and ``psi_r = psi_1 (+) psi_(r-1)``."""
    if r < 0:
        raise FormError(f"negative rank {r}")
    one, z = ring.one, ring.zero
    base = Mat(ring, [[z, one], [ring.neg(ring.lam), z]])
    out = Mat.zeros(ring, 0)
    for _ in range(r):
        out = perp(base, out)
    return out


def psi_tilde_prime(ring: Ring, r: int) -> Mat:
    """``psi'_1 = [[0, -lam^-1], [1, 0]]`` and the same perp recursion."""
    if r < 0:
        raise FormError(f"negative rank {r}")
    one, z = ring.one, ring.zero
    base = Mat(ring, [[z, ring.neg(ring.lam_inv)], [one, z]])
    out = Mat.zeros(ring, 0)
    for _ in range(r):
        out = perp(base, out)
    return out


def bordered(corner: Element, top: Sequence[Element], left: Sequence[Element], body: Mat) -> Mat:
    """``[[corner, top], [left^T, body]]``."""
    ring = body.ring
    if len(top) != body.ncols or len(left) != body.nrows:
        raise MatrixError("border does not fit body")
    grid = [[corner, *top]] + [[x, *r] for x, r in zip(left, body.rows)]
    return Mat(ring, grid, body.ncols + 1)


# ---------------------------------------------------------------------------
# assembled form data
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HyperbolicFormData:
    ring: Ring
    m: int
    n: int
    phi: Mat
    phi_inv: Mat
    c: tuple
    d: tuple
    mu: Mat
    rho: Mat
    Psi: Mat
    Psi_inv: Mat

    @property
    def N(self) -> int:
        return self.n + 2 * self.m - 1

    @property
    def tail(self) -> Mat:
        """``diag(psi_tilde(m-1), phi)``: ``mu`` without its zero corner."""
        return self.mu.submatrix(1, self.N, 1, self.N)

    @property
    def tail_inv(self) -> Mat:
        return self.rho.submatrix(1, self.N, 1, self.N)

    # cached helpers for theta / eta (frozen dataclass, so cached_property writes __dict__)
    @cached_property
    def identity(self) -> Mat:
        return Mat.identity(self.ring, self.N)

    @cached_property
    def sparse_mu(self) -> tuple:
        zero = self.ring.zero
        return tuple(tuple((j, x) for j, x in enumerate(r) if x != zero) for r in self.mu.rows)

    @cached_property
    def sparse_rho(self) -> tuple:
        zero = self.ring.zero
        return tuple(tuple((k, x) for k, x in enumerate(r) if x != zero) for r in self.rho.rows)

    def vector(self, values: Sequence[Element]) -> tuple:
        v = tuple(values)
        if len(v) != self.N:
            raise FormError(f"vector length {len(v)} != N = {self.N}")
        return v


def assemble(ring: Ring, m: int, n: int, phi: Mat, phi_inv: Mat | None = None) -> HyperbolicFormData:
    if m < 1:
        raise FormError(f"hyperbolic rank m must be >= 1, got {m}")
    if n < 0:
        raise FormError(f"n must be >= 0, got {n}")
    if phi.shape != (n, n):
        raise FormError(f"phi is {phi.nrows}x{phi.ncols}, expected {n}x{n}")
    if phi.ring != ring:
        raise FormError("phi is over a different ring")
    if phi_inv is None:
        phi_inv = inverse_commutative(phi)
    if phi_inv.shape != (n, n):
        raise FormError("phi_inv has the wrong shape")
    ident = Mat.identity(ring, n)
    if not (phi @ phi_inv == ident and phi_inv @ phi == ident):
        raise FormError("phi_inv is not the inverse of phi")

    N = n + 2 * m - 1
    z = ring.zero
    corner = Mat.zeros(ring, 1)
    mu = block_diag(ring, corner, psi_tilde(ring, m - 1), phi)
    rho = block_diag(ring, corner, psi_tilde_prime(ring, m - 1), phi_inv)
    c = (ring.one,) + (z,) * (N - 1)
    d = (ring.neg(ring.lam_inv),) + (z,) * (N - 1)
    neg_lam = ring.neg(ring.lam)
    Psi = bordered(z, c, [ring.mul(neg_lam, x) for x in c], mu)
    Psi_inv = bordered(z, d, [ring.mul(neg_lam, x) for x in d], rho)

    direct = perp(psi_tilde(ring, m), phi)
    if Psi != direct:
        raise FormError("block decomposition does not reproduce psi_tilde(m) (+) phi")
    if not (Psi @ Psi_inv).is_identity():
        raise FormError("Psi @ Psi_inv != I")
    return HyperbolicFormData(ring, m, n, phi, phi_inv, c, d, mu, rho, Psi, Psi_inv)


# ---------------------------------------------------------------------------
# theta / eta
# ---------------------------------------------------------------------------


def _bar(ring: Ring, v: Sequence[Element]) -> tuple:
    return tuple(ring.conj(x) for x in v)


def theta(data: HyperbolicFormData, v: Sequence[Element]) -> Mat:
    """``I + d^T vbar mu``: identity except in the rows where ``d`` is nonzero."""
    R = data.ring
    v = data.vector(v)
    add, mul, conj, zero = R.add, R.mul, R.conj, R.zero
    row = [zero] * data.N
    for x, entries in zip(v, data.sparse_mu):
        if x == zero:
            continue
        xb = conj(x)
        for j, y in entries:
            row[j] = add(row[j], mul(xb, y))
    rows = list(data.identity.rows)
    for i, di in enumerate(data.d):
        if di != zero:
            rows[i] = tuple(add(x, mul(di, y)) for x, y in zip(rows[i], row))
    return Mat._trusted(R, tuple(rows), data.N)


def eta(data: HyperbolicFormData, v: Sequence[Element]) -> Mat:
    """``I - lam^-1 rho vbar^T c``: identity except in the columns where ``c`` is nonzero."""
    R = data.ring
    v = data.vector(v)
    add, mul, sub, zero = R.add, R.mul, R.sub, R.zero
    vbar = [R.conj(x) for x in v]
    targets = [(j, cj) for j, cj in enumerate(data.c) if cj != zero]
    rows = []
    for irow, entries in zip(data.identity.rows, data.sparse_rho):
        acc = zero
        for k, y in entries:
            acc = add(acc, mul(y, vbar[k]))
        if acc == zero:
            rows.append(irow)
            continue
        acc = mul(R.lam_inv, acc)
        r = list(irow)
        for j, cj in targets:
            r[j] = sub(r[j], mul(acc, cj))
        rows.append(tuple(r))
    return Mat._trusted(R, tuple(rows), data.N)


def theta_explicit(data: HyperbolicFormData, v: Sequence[Element]) -> Mat:
    """Entry-by-entry form of theta(v); only row 1 differs from I."""
    R = data.ring
    a = (None,) + _bar(R, data.vector(v))  # 1-based: a[k] = conj(a_k)
    m, n = data.m, data.n
    mli = R.neg(R.lam_inv)
    row = [R.one]
    for k in range(1, m):
        row.append(a[2 * k + 1])
        row.append(R.mul(mli, a[2 * k]))
    phi = data.phi.rows
    for k in range(n):
        s = R.sum(R.mul(a[2 * m + j], phi[j][k]) for j in range(n))
        row.append(R.mul(mli, s))
    return Mat(R, [row] + list(Mat.identity(R, data.N).rows[1:]), data.N)


def eta_explicit(data: HyperbolicFormData, v: Sequence[Element]) -> Mat:
    """Entry-by-entry form of eta(v); only column 1 differs from I."""
    R = data.ring
    a = (None,) + _bar(R, data.vector(v))
    m, n = data.m, data.n
    mli = R.neg(R.lam_inv)
    li2 = R.mul(R.lam_inv, R.lam_inv)
    col = [R.one]
    for k in range(1, m):
        col.append(R.mul(li2, a[2 * k + 1]))
        col.append(R.mul(mli, a[2 * k]))
    pinv = data.phi_inv.rows
    for k in range(n):
        s = R.sum(R.mul(a[2 * m + j], pinv[k][j]) for j in range(n))
        col.append(R.mul(mli, s))
    grid = [list(r) for r in Mat.identity(R, data.N).rows]
    for i, x in enumerate(col):
        grid[i][0] = x
    return Mat(R, grid, data.N)


def L_of(data: HyperbolicFormData, v: Sequence[Element]) -> Mat:
    """``[[1, 0], [v^T, theta(v)]]``."""
    R = data.ring
    v = data.vector(v)
    return bordered(R.one, (R.zero,) * data.N, v, theta(data, v))


def L_star_of(data: HyperbolicFormData, v: Sequence[Element]) -> Mat:
    """``[[1, v], [0, eta(v)]]``."""
    R = data.ring
    v = data.vector(v)
    return bordered(R.one, v, (R.zero,) * data.N, eta(data, v))


def is_unitary(data: HyperbolicFormData, M: Mat) -> bool:
    """Diagnostic only: does ``M`` preserve the form with Gram matrix ``Psi``?"""
    from .odd_quadratic import preserves_gram

    return preserves_gram(data.Psi, M)


# ---------------------------------------------------------------------------
# symplectic (alternating) mode
# ---------------------------------------------------------------------------


class SymplecticPair(NamedTuple):
    alpha: Mat
    beta: Mat
    lower: Mat
    upper: Mat


def is_alternating(phi: Mat) -> bool:
    R = phi.ring
    if not phi.is_square:
        return False
    n = phi.nrows
    rows = phi.rows
    for i in range(n):
        if not R.is_zero(rows[i][i]):
            return False
        for j in range(i + 1, n):
            if not R.eq(rows[j][i], R.neg(rows[i][j])):
                return False
    return True


def is_symplectic(M: Mat, phi: Mat) -> bool:
    return M.transpose() @ phi @ M == phi


def symplectic_pair(phi: Mat, phi_inv: Mat, v: Sequence[Element]) -> SymplecticPair:
    """Vaserstein's matrices for an invertible alternating ``phi`` of size 2n.

    ``phi = [[0, -c], [c^T, mu]]``, ``phi^-1 = [[0, d], [-d^T, rho]]``;
    ``alpha = I + d^T v mu`` and ``beta = I + rho v^T c``.

    With ``c`` read off ``phi`` in this sign convention, ``beta`` needs the
    plus sign for ``[[1, v], [0, beta]]`` to preserve ``phi``; the minus sign
    belongs to the convention ``phi = [[0, c], [-c^T, mu]]`` used by ``Psi``.
    """
    R = phi.ring
    if not is_alternating(phi):
        raise FormError("phi is not alternating")
    size = phi.nrows
    if size < 2 or size % 2:
        raise FormError(f"alternating phi must have even size >= 2, got {size}")
    if phi_inv.shape != phi.shape or not (phi @ phi_inv).is_identity():
        raise FormError("phi_inv is not the inverse of phi")
    N = size - 1
    v = tuple(v)
    if len(v) != N:
        raise FormError(f"vector length {len(v)} != {N}")

    c = tuple(R.neg(x) for x in phi.rows[0][1:])
    mu = phi.submatrix(1, size, 1, size)
    d = tuple(phi_inv.rows[0][1:])
    rho = phi_inv.submatrix(1, size, 1, size)
    if not R.is_zero(phi_inv.rows[0][0]) or phi_inv.col(0)[1:] != tuple(R.neg(x) for x in d):
        raise FormError("phi_inv does not have the block shape [[0, d], [-d^T, rho]]")

    ident = Mat.identity(R, N)
    alpha = ident + Mat.column(R, d) @ (Mat.row(R, v) @ mu)
    beta = ident + (rho @ Mat.column(R, v)) @ Mat.row(R, c)
    lower = bordered(R.one, (R.zero,) * N, v, alpha)
    upper = bordered(R.one, v, (R.zero,) * N, beta)
    return SymplecticPair(alpha, beta, lower, upper)


__all__ = [
    "FormError",
    "HyperbolicFormData",
    "L_of",
    "L_star_of",
    "SymplecticPair",
    "assemble",
    "bordered",
    "eta",
    "eta_explicit",
    "is_alternating",
    "is_symplectic",
    "is_unitary",
    "psi_tilde",
    "psi_tilde_prime",
    "symplectic_pair",
    "theta",
    "theta_explicit",
]
