import random

import pytest

from ou_kit.matrix import Mat, NotInvertible, perp
from ou_kit.odd_quadratic import is_antihermitian
from ou_kit.rings import ring_from_descriptor
from ou_kit.sampling import random_alternating, random_antihermitian_phi, random_invertible_phi, random_vector
from ou_kit.vaserstein import (
    FormError,
    L_of,
    L_star_of,
    assemble,
    eta,
    eta_explicit,
    is_alternating,
    is_symplectic,
    psi_tilde,
    psi_tilde_prime,
    symplectic_pair,
    theta,
    theta_explicit,
)


def test_psi_tilde_base_cases(Z):
    assert psi_tilde(Z, 1) == Mat.from_ints(Z, [[0, 1], [-1, 0]])
    assert psi_tilde(Z, 0).shape == (0, 0)
    with pytest.raises(FormError):
        psi_tilde(Z, -1)


def test_psi_tilde_twisted(twisted):
    R = twisted
    p, q = psi_tilde(R, 1), psi_tilde_prime(R, 1)
    assert p.entry(2, 1) == R.neg(R.lam)
    assert (p @ q).is_identity()


@pytest.mark.parametrize("r", range(0, 7))
def test_psi_recursion_inverse(ring, r):
    p, q = psi_tilde(ring, r), psi_tilde_prime(ring, r)
    assert (p @ q).is_identity() and (q @ p).is_identity()
    if r:
        assert p == perp(psi_tilde(ring, 1), psi_tilde(ring, r - 1))


def test_assemble_example(Z, data_211):
    d = data_211
    assert d.N == 4
    assert d.Psi == perp(psi_tilde(Z, 2), Mat.from_ints(Z, [[1]]))
    assert d.c == (1, 0, 0, 0)
    assert d.d == (-1, 0, 0, 0)


def test_assemble_m1(Z):
    phi = Mat.from_ints(Z, [[0, 1], [-1, 0]])
    d = assemble(Z, 1, 2, phi)
    assert d.mu == perp(Mat.zeros(Z, 1), phi)


def test_assemble_rejects_singular_phi(Z):
    with pytest.raises(NotInvertible, match="determinant 2"):
        assemble(Z, 2, 1, Mat.from_ints(Z, [[2]]))


def test_assemble_rejects_wrong_inverse(Z):
    with pytest.raises(FormError):
        assemble(Z, 1, 1, Mat.from_ints(Z, [[1]]), Mat.from_ints(Z, [[-1]]))


@pytest.mark.parametrize("m, n", [(0, 1), (1, -1)])
def test_assemble_rejects_bad_sizes(Z, m, n):
    with pytest.raises(FormError):
        assemble(Z, m, n, Mat.identity(Z, max(n, 0)))


def test_assemble_random(ring):
    rng = random.Random(0)
    for m in (1, 2, 3):
        for n in (0, 1, 2, 3):
            d = assemble(ring, m, n, *random_invertible_phi(ring, n, rng))
            assert (d.Psi @ d.Psi_inv).is_identity()


def test_antihermitian_phi_gives_antihermitian_psi(ring):
    rng = random.Random(1)
    for n in (0, 1, 2, 3):
        pair = random_antihermitian_phi(ring, n, rng)
        if pair is None:
            continue
        assert is_antihermitian(assemble(ring, 2, n, *pair).Psi)


def test_theta_eta_examples(Z, data_211):
    I = Mat.identity(Z, 4)
    v = (5, 7, 11, 13)
    expected_theta = Mat(Z, [(1, 11, -7, -13)] + list(I.rows[1:]), 4)
    assert theta(data_211, v) == expected_theta
    assert eta(data_211, v) == expected_theta.transpose()
    assert theta(data_211, (9, 0, 0, 0)).is_identity()


def test_displayed_forms_agree(ring):
    rng = random.Random(2)
    for m in (1, 2, 3):
        for n in (0, 1, 2, 3):
            d = assemble(ring, m, n, *random_invertible_phi(ring, n, rng))
            for _ in range(10):
                v = random_vector(ring, d.N, rng)
                assert theta(d, v) == theta_explicit(d, v)
                assert eta(d, v) == eta_explicit(d, v)


def test_theta_rejects_wrong_length(data_211):
    with pytest.raises(FormError):
        theta(data_211, (1, 2))


def test_L_examples(Z, data_211):
    zero = (0, 0, 0, 0)
    assert L_of(data_211, zero).is_identity()
    assert L_star_of(data_211, zero).is_identity()
    L = L_of(data_211, (5, 7, 11, 13))
    assert [r[0] for r in L.rows] == [1, 5, 7, 11, 13]
    assert L.rows[1] == (5, 1, 11, -7, -13)
    assert L.rows[0] == (1, 0, 0, 0, 0)


def _standard_alternating(R):
    # [[0, -c], [c^T, mu]] with c = (1, 0, 0): e_1 pairs with e_2, e_3 with e_4
    phi = Mat.from_ints(R, [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return phi, Mat.from_ints(R, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_symplectic_example(Z):
    phi, phi_inv = _standard_alternating(Z)
    pair = symplectic_pair(phi, phi_inv, (1, 2, 3))
    I = Mat.identity(Z, 3)
    assert pair.alpha == Mat(Z, [(1, 3, -2)] + list(I.rows[1:]), 3)
    assert pair.beta == Mat(Z, [(1, 0, 0), (3, 1, 0), (-2, 0, 1)], 3)
    assert is_symplectic(pair.lower, phi) and is_symplectic(pair.upper, phi)


def test_symplectic_minus_sign_fails(Z):
    """The opposite sign in beta does not give a symplectic matrix for this phi."""
    phi, phi_inv = _standard_alternating(Z)
    pair = symplectic_pair(phi, phi_inv, (1, 2, 3))
    two_I = Mat.identity(Z, 3).scale(2)
    beta_minus = two_I - pair.beta  # I - rho v^T c
    assert beta_minus == Mat(Z, [(1, 0, 0), (-3, 1, 0), (2, 0, 1)], 3)
    upper = Mat(Z, [(1, 1, 2, 3)] + [(0,) + r for r in beta_minus.rows], 4)
    assert not is_symplectic(upper, phi)


def test_symplectic_zero_vector(Z):
    phi, phi_inv = _standard_alternating(Z)
    pair = symplectic_pair(phi, phi_inv, (0, 0, 0))
    assert pair.alpha.is_identity() and pair.beta.is_identity()
    assert pair.lower.is_identity() and pair.upper.is_identity()


@pytest.mark.parametrize("desc", ["int", "mod:7"])
@pytest.mark.parametrize("size", [2, 4, 6])
def test_symplectic_random(desc, size):
    R = ring_from_descriptor(desc)
    rng = random.Random(size)
    for _ in range(20):
        phi, phi_inv = random_alternating(R, size, rng)
        assert is_alternating(phi) and (phi @ phi_inv).is_identity()
        pair = symplectic_pair(phi, phi_inv, random_vector(R, size - 1, rng))
        assert is_symplectic(pair.lower, phi) and is_symplectic(pair.upper, phi)


def test_symplectic_rejects_non_alternating(Z):
    with pytest.raises(FormError):
        symplectic_pair(Mat.identity(Z, 2), Mat.identity(Z, 2), (1,))
