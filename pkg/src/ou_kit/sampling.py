"""Seeded random inputs: vectors, invertible and anti-Hermitian phi, ESD arguments."""

from __future__ import annotations

import random

from .matrix import Mat, conj_transpose, elementary_product, inverse_commutative, perp
from .odd_quadratic import HeisenbergElement, OddQuadraticSpace, L_MIN, ordered_square, pos
from .rings import Element, Ring
from .vaserstein import psi_tilde


def random_vector(ring: Ring, n: int, rng: random.Random, bound: int = 20) -> tuple:
    return tuple(ring.random(rng, bound) for _ in range(n))


def random_elementary_letters(ring: Ring, n: int, count: int, rng: random.Random, bound: int = 5):
    if n < 2:
        return []
    letters = []
    for _ in range(count):
        i, j = rng.sample(range(1, n + 1), 2)
        letters.append((i, j, ring.random(rng, bound)))
    return letters


def _inverse_letters(ring: Ring, letters):
    return [(i, j, ring.neg(a)) for i, j, a in reversed(letters)]


def random_unimodular(ring: Ring, n: int, rng: random.Random, count: int | None = None) -> tuple[Mat, Mat]:
    """A random product of elementary matrices and its inverse."""
    count = 2 * n if count is None else count
    letters = random_elementary_letters(ring, n, count, rng)
    return elementary_product(ring, n, letters), elementary_product(ring, n, _inverse_letters(ring, letters))


def random_invertible_phi(ring: Ring, n: int, rng: random.Random) -> tuple[Mat, Mat]:
    """``L @ I_n @ R`` for random elementary words ``L``, ``R`` (2n letters each)."""
    left, left_inv = random_unimodular(ring, n, rng)
    right, right_inv = random_unimodular(ring, n, rng)
    return left @ right, right_inv @ left_inv


def antihermitian_seed(ring: Ring, n: int) -> Mat | None:
    """``psi_tilde(n // 2)``, padded by an anti-Hermitian unit when n is odd."""
    base = psi_tilde(ring, n // 2)
    if n % 2 == 0:
        return base
    u = ring.antihermitian_unit()
    if u is None:
        return None
    return perp(base, Mat(ring, [[u]]))


def random_antihermitian_phi(ring: Ring, n: int, rng: random.Random) -> tuple[Mat, Mat] | None:
    """``lam^-1 g* A g`` with A an anti-Hermitian seed; ``None`` if no seed exists."""
    seed = antihermitian_seed(ring, n)
    if seed is None:
        return None
    g, _ = random_unimodular(ring, n, rng)
    phi = (conj_transpose(g) @ seed @ g).scale(ring.lam_inv)
    return phi, inverse_commutative(phi)


def random_alternating(ring: Ring, size: int, rng: random.Random) -> tuple[Mat, Mat]:
    """``g^T J g`` with ``J = [[0, -1], [1, 0]]`` blocks; returns (phi, phi^-1)."""
    block = Mat.from_ints(ring, [[0, -1], [1, 0]])
    J = Mat.zeros(ring, 0)
    for _ in range(size // 2):
        J = perp(J, block)
    g, g_inv = random_unimodular(ring, size, rng)
    phi = g.transpose() @ J @ g
    J_inv = J.scale(ring.neg(ring.one))
    return phi, g_inv @ J_inv @ g_inv.transpose()


# ---------------------------------------------------------------------------
# Heisenberg / ESD arguments on a space with Gram matrix psi_tilde(M)
# ---------------------------------------------------------------------------


def _check_psi_space(space: OddQuadraticSpace) -> int:
    M = space.dim // 2
    if space.dim % 2 or space.gram != psi_tilde(space.ring, M):
        raise ValueError("sampler needs a space whose Gram matrix is psi_tilde(M)")
    return M


def _support(space: OddQuadraticSpace) -> int:
    """Number of hyperbolic pairs usable by parameter elements in this mode."""
    M = space.dim // 2
    return space.hyperbolic_rank if space.mode == L_MIN else M


def random_trace_like(ring: Ring, rng: random.Random, bound: int = 10) -> Element:
    x = ring.random(rng, bound)
    return ring.add(x, ring.conj(x))


def random_param_element(space: OddQuadraticSpace, rng: random.Random, bound: int = 10) -> HeisenbergElement:
    """A random member of the space's form parameter (zero-diagonal Gram)."""
    R = space.ring
    _check_psi_space(space)
    k = 2 * _support(space)
    v = tuple(R.random(rng, bound) if i < k else R.zero for i in range(space.dim))
    r = R.add(ordered_square(space, v), random_trace_like(R, rng, bound))
    return HeisenbergElement(v, r)


def random_esd_args(space: OddQuadraticSpace, rng: random.Random, bound: int = 10):
    """Random admissible ``(v1, v2, r)`` for an ESD transvection."""
    R = space.ring
    _check_psi_space(space)
    M = _support(space)
    dim = space.dim
    if M == 0:
        return (R.zero,) * dim, (R.zero,) * dim, random_trace_like(R, rng, bound)
    s = [R.one] + [R.random(rng, bound) for _ in range(M - 1)]
    v1 = [R.zero] * dim
    for k in range(1, M + 1):
        v1[pos(k)] = s[k - 1]
    v2 = list(random_param_element(space, rng, bound).v)
    # <v1, v2> = sum_k bar(s_k) lam^-1 v2[pos(-k)]; solve for the k = 1 term.
    acc = R.sum(R.prod(R.conj(s[k - 1]), R.lam_inv, v2[pos(-k)]) for k in range(2, M + 1))
    v2[pos(-1)] = R.neg(acc)
    v2 = tuple(v2)
    r = R.add(ordered_square(space, v2), random_trace_like(R, rng, bound))
    return tuple(v1), v2, r


def random_isotropic_for(space: OddQuadraticSpace, i: int, rng: random.Random, bound: int = 10) -> tuple:
    """A random isotropic vector orthogonal to ``e_i``, supported on hyperbolic pairs."""
    R = space.ring
    v = [R.zero] * space.dim
    for k in range(1, space.hyperbolic_rank + 1):
        idx = i if k == abs(i) else (k if rng.random() < 0.5 else -k)
        v[pos(idx)] = R.random(rng, bound)
    return tuple(v)
