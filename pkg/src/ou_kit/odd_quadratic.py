"""Odd quadratic spaces, the Heisenberg group and ESD transvections.

Vectors are coordinate tuples in a fixed basis ``b_1, ..., b_dim`` and the
form is read off a Gram matrix:

    <x, y> = sum_ij bar(x_i) lam^-1 gram_ij y_j

so that ``<b_i, b_j> = gram_ij``.  For the hyperbolic space ``H^m (+) V_0`` the
basis is ordered ``e_1, e_-1, e_2, e_-2, ..., e_m, e_-m`` followed by the basis
of ``V_0``; its Gram matrix is ``Psi = psi_tilde(m) (+) phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .matrix import Mat, conj_transpose
from .rings import Element, Ring, UndecidableMembership

L_MIN = "L_min"
L_MAX = "L_max"


class QuadraticError(ValueError):
    pass


class PreconditionError(QuadraticError):
    """An ESD transvection was requested with inadmissible arguments."""

    def __init__(self, name: str, detail: str = ""):
        super().__init__(f"precondition violated: {name}" + (f" ({detail})" if detail else ""))
        self.name = name


@dataclass(frozen=True, eq=False)
class OddQuadraticSpace:
    """A free module with an anti-Hermitian Gram matrix and a form parameter.

    ``mode`` picks the form parameter.  ``L_max`` is the kernel of the trace.
    ``L_min`` is the smallest parameter containing ``(e_i, 0)`` for every
    hyperbolic basis vector (the first ``2 * hyperbolic_rank`` coordinates);
    with ``hyperbolic_rank = 0`` it is exactly ``{(0, s + bar(s))}``.
    """

    ring: Ring
    gram: Mat
    mode: str = L_MAX
    hyperbolic_rank: int = 0

    def __post_init__(self):
        g = self.gram
        if not g.is_square:
            raise QuadraticError("gram matrix must be square")
        if self.mode not in (L_MIN, L_MAX):
            raise QuadraticError(f"unknown form parameter mode {self.mode!r}")
        if 2 * self.hyperbolic_rank > g.nrows:
            raise QuadraticError("hyperbolic rank exceeds dimension")
        if not is_antihermitian(g):
            raise QuadraticError("gram matrix is not anti-Hermitian")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def basis(self, k: int) -> tuple:
        """0-based coordinate basis vector."""
        R = self.ring
        return tuple(R.one if i == k else R.zero for i in range(self.dim))

    def check(self, x: Sequence[Element]) -> tuple:
        x = tuple(x)
        if len(x) != self.dim:
            raise QuadraticError(f"vector length {len(x)} != dim {self.dim}")
        return x


def is_antihermitian(gram: Mat) -> bool:
    """``gram_ji = -bar(gram_ij)`` for all i, j."""
    R = gram.ring
    rows = gram.rows
    n = gram.nrows
    return all(R.eq(rows[j][i], R.neg(R.conj(rows[i][j]))) for i in range(n) for j in range(i, n))


def hyperbolic_space(data, mode: str = L_MAX) -> OddQuadraticSpace:
    """The space ``H^m (+) V_0`` with Gram matrix ``data.Psi``."""
    return OddQuadraticSpace(data.ring, data.Psi, mode, data.m)


# ---------------------------------------------------------------------------
# vectors and the form
# ---------------------------------------------------------------------------


def vadd(R: Ring, x: Sequence[Element], y: Sequence[Element]) -> tuple:
    return tuple(R.add(a, b) for a, b in zip(x, y))


def vneg(R: Ring, x: Sequence[Element]) -> tuple:
    return tuple(R.neg(a) for a in x)


def vscale(R: Ring, x: Sequence[Element], s: Element) -> tuple:
    """Right scalar multiple ``x s``."""
    return tuple(R.mul(a, s) for a in x)


def form_eval(space: OddQuadraticSpace, x: Sequence[Element], y: Sequence[Element]) -> Element:
    R = space.ring
    x, y = space.check(x), space.check(y)
    rows = space.gram.rows
    total = R.zero
    for i, xi in enumerate(x):
        if R.is_zero(xi):
            continue
        inner = R.zero
        for j, g in enumerate(rows[i]):
            if not R.is_zero(g) and not R.is_zero(y[j]):
                inner = R.add(inner, R.mul(g, y[j]))
        total = R.add(total, R.prod(R.conj(xi), R.lam_inv, inner))
    return total


# ---------------------------------------------------------------------------
# Heisenberg group
# ---------------------------------------------------------------------------


class HeisenbergElement(NamedTuple):
    v: tuple
    r: Element


def h_zero(space: OddQuadraticSpace) -> HeisenbergElement:
    return HeisenbergElement((space.ring.zero,) * space.dim, space.ring.zero)


def h_add(space: OddQuadraticSpace, z1: HeisenbergElement, z2: HeisenbergElement) -> HeisenbergElement:
    """``(v1, r) + (v2, s) = (v1 + v2, r + s + <v1, v2>)``."""
    R = space.ring
    return HeisenbergElement(
        vadd(R, space.check(z1.v), space.check(z2.v)),
        R.add(R.add(z1.r, z2.r), form_eval(space, z1.v, z2.v)),
    )


def h_neg(space: OddQuadraticSpace, z: HeisenbergElement) -> HeisenbergElement:
    """``-(v, r) = (-v, -r + <v, v>)``."""
    R = space.ring
    return HeisenbergElement(vneg(R, space.check(z.v)), R.add(R.neg(z.r), form_eval(space, z.v, z.v)))


def h_act(space: OddQuadraticSpace, z: HeisenbergElement, s: Element) -> HeisenbergElement:
    """Right action ``(v, r) . s = (v s, bar(s) lam^-1 r s)``."""
    R = space.ring
    return HeisenbergElement(vscale(R, space.check(z.v), s), R.prod(R.conj(s), R.lam_inv, z.r, s))


def h_trace(space: OddQuadraticSpace, z: HeisenbergElement) -> Element:
    """``tr(v, r) = r - bar(r) - <v, v>``."""
    R = space.ring
    return R.sub(R.sub(z.r, R.conj(z.r)), form_eval(space, z.v, z.v))


def ordered_square(space: OddQuadraticSpace, v: Sequence[Element]) -> Element:
    """``sum_{a<b} <v_a b_a, v_b b_b>``: the r-part of summing ``(v_a b_a, 0)`` in order."""
    R = space.ring
    v = space.check(v)
    rows = space.gram.rows
    total = R.zero
    for a in range(len(v)):
        if R.is_zero(v[a]):
            continue
        ca = R.mul(R.conj(v[a]), R.lam_inv)
        for b in range(a + 1, len(v)):
            g = rows[a][b]
            if not R.is_zero(g) and not R.is_zero(v[b]):
                total = R.add(total, R.prod(ca, g, v[b]))
    return total


def param_contains(space: OddQuadraticSpace, z: HeisenbergElement) -> bool:
    R = space.ring
    if space.mode == L_MAX:
        return R.is_zero(h_trace(space, z))
    v = space.check(z.v)
    if any(not R.is_zero(x) for x in v[2 * space.hyperbolic_rank:]):
        return False
    try:
        return R.is_trace_like(R.sub(z.r, ordered_square(space, v)))
    except UndecidableMembership as exc:
        raise UndecidableMembership(f"undecidable parameter membership: {exc}") from None


# ---------------------------------------------------------------------------
# ESD transvections
# ---------------------------------------------------------------------------


def _esd_check(space: OddQuadraticSpace, v1, v2, r) -> None:
    R = space.ring
    if not R.is_zero(form_eval(space, v1, v2)):
        raise PreconditionError("<v1, v2> = 0")
    if not param_contains(space, HeisenbergElement(tuple(v1), R.zero)):
        raise PreconditionError("(v1, 0) in L")
    if not param_contains(space, HeisenbergElement(tuple(v2), r)):
        raise PreconditionError("(v2, r) in L")


def _esd_image(space, v1, v2, r, w) -> tuple:
    R = space.ring
    a = form_eval(space, v1, w)
    coeff1 = R.mul(R.lam_inv, R.add(form_eval(space, v2, w), R.mul(r, a)))
    return vadd(R, vadd(R, w, vscale(R, v1, coeff1)), vscale(R, v2, a))


def esd_apply(space: OddQuadraticSpace, v1, v2, r: Element, w) -> tuple:
    """``w + v1 lam^-1 (<v2, w> + r <v1, w>) + v2 <v1, w>``."""
    v1, v2, w = space.check(v1), space.check(v2), space.check(w)
    _esd_check(space, v1, v2, r)
    return _esd_image(space, v1, v2, r, w)


def esd_matrix(space: OddQuadraticSpace, v1, v2, r: Element) -> Mat:
    """Matrix of the ESD transvection; column k is the image of ``b_k``."""
    v1, v2 = space.check(v1), space.check(v2)
    _esd_check(space, v1, v2, r)
    cols = [_esd_image(space, v1, v2, r, space.basis(k)) for k in range(space.dim)]
    return Mat(space.ring, zip(*cols), space.dim) if cols else Mat.zeros(space.ring, 0)


def preserves_gram(gram: Mat, M: Mat) -> bool:
    """``<Mx, My> = <x, y>`` for all x, y, i.e. ``M* lam^-1 gram M = gram``."""
    R = gram.ring
    return conj_transpose(M) @ gram.scale(R.lam_inv) @ M == gram


def preserves_form(space: OddQuadraticSpace, M: Mat) -> bool:
    """Same question as :func:`preserves_gram`, answered pairwise on the basis."""
    cols = [M.col(k) for k in range(space.dim)]
    g = space.gram.rows
    eq = space.ring.eq
    return all(
        eq(form_eval(space, cols[i], cols[j]), g[i][j]) for i in range(space.dim) for j in range(space.dim)
    )


def equivalent_to_identity(space: OddQuadraticSpace, M: Mat) -> bool:
    """Diagnostic: ``(f(b) - b, <b - f(b), b>) in L_max`` for each basis vector b."""
    R = space.ring
    probe = OddQuadraticSpace(R, space.gram, L_MAX, space.hyperbolic_rank)
    for k in range(space.dim):
        b = space.basis(k)
        fb = M.col(k)
        diff = vadd(R, fb, vneg(R, b))
        z = HeisenbergElement(diff, form_eval(space, vneg(R, diff), b))
        if not param_contains(probe, z):
            return False
    return True


# ---------------------------------------------------------------------------
# elementary transvections on H^m (+) V_0
# ---------------------------------------------------------------------------


def pos(i: int) -> int:
    """0-based coordinate of ``e_i``: e_1, e_-1, e_2, e_-2, ..."""
    if i == 0:
        raise QuadraticError("hyperbolic index 0 does not exist")
    return 2 * i - 2 if i > 0 else -2 * i - 1


def e(space: OddQuadraticSpace, i: int) -> tuple:
    if abs(i) > space.hyperbolic_rank:
        raise QuadraticError(f"index {i} outside +-1..+-{space.hyperbolic_rank}")
    return space.basis(pos(i))


def epsilon(ring: Ring, i: int) -> Element:
    """``lam^-1`` for positive indices, ``-1`` for negative ones."""
    return ring.lam_inv if i > 0 else ring.neg(ring.one)


def elem_transvection_short(space: OddQuadraticSpace, i: int, j: int, r: Element) -> Mat:
    """``T_{i,j}(r) = T_{e_-j, -e_i r eps_j}(0)`` for ``j != +-i``."""
    if j == i or j == -i:
        raise QuadraticError(f"T_(i,j) needs j != +-i, got i={i}, j={j}")
    R = space.ring
    v2 = vscale(R, e(space, i), R.neg(R.mul(r, epsilon(R, j))))
    return esd_matrix(space, e(space, -j), v2, R.zero)


def elem_transvection_long(space: OddQuadraticSpace, i: int, v, r: Element) -> Mat:
    """``T_i(v, r) = T_{e_i, v eps_-i}(-bar(eps_-i) lam^-1 r eps_-i)``."""
    R = space.ring
    v = space.check(v)
    ei = e(space, i)
    if not R.is_zero(form_eval(space, ei, v)):
        raise PreconditionError("<e_i, v> = 0")
    if not param_contains(space, HeisenbergElement(v, r)):
        raise PreconditionError("(v, r) in L")
    eps = epsilon(R, -i)
    shift = R.neg(R.prod(R.conj(eps), R.lam_inv, r, eps))
    return esd_matrix(space, ei, vscale(R, v, eps), shift)
