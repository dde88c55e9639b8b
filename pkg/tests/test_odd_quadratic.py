import random

import pytest

from ou_kit.matrix import Mat
from ou_kit.odd_quadratic import (
    L_MAX,
    L_MIN,
    HeisenbergElement,
    OddQuadraticSpace,
    PreconditionError,
    QuadraticError,
    e,
    elem_transvection_long,
    elem_transvection_short,
    esd_apply,
    esd_matrix,
    form_eval,
    h_act,
    h_add,
    h_neg,
    h_trace,
    h_zero,
    param_contains,
    pos,
    preserves_form,
    preserves_gram,
)
from ou_kit.rings import Integers, Ring, UndecidableMembership
from ou_kit.sampling import random_esd_args, random_isotropic_for, random_param_element, random_trace_like
from ou_kit.vaserstein import psi_tilde

H = HeisenbergElement


def plane(R, mode=L_MAX, rank=1):
    return OddQuadraticSpace(R, psi_tilde(R, 1), mode, rank)


def test_form_values_on_hyperbolic_plane(Z):
    sp = plane(Z)
    e1, e2 = sp.basis(0), sp.basis(1)
    assert form_eval(sp, e1, e2) == 1
    assert form_eval(sp, e1, e1) == 0
    assert form_eval(sp, e2, e1) == -1


def test_form_is_antihermitian(ring):
    sp = OddQuadraticSpace(ring, psi_tilde(ring, 2))
    rng = random.Random(1)
    for _ in range(30):
        x = tuple(ring.random(rng) for _ in range(4))
        y = tuple(ring.random(rng) for _ in range(4))
        assert form_eval(sp, x, y) == ring.neg(ring.conj(form_eval(sp, y, x)))


def test_space_rejects_non_antihermitian_gram(Z):
    with pytest.raises(QuadraticError):
        OddQuadraticSpace(Z, Mat.from_ints(Z, [[1]]))


def test_heisenberg_examples(Z):
    sp = plane(Z)
    assert h_add(sp, H((1, 0), 0), H((0, 1), 0)) == H((1, 1), 1)
    z = H((1, 0), 3)
    assert h_neg(sp, z) == H((-1, 0), -3)
    assert h_add(sp, z, h_neg(sp, z)) == h_zero(sp)
    assert h_add(sp, z, h_zero(sp)) == z


def test_trace_examples(Z, Zi):
    assert h_trace(plane(Z), H((0, 0), 0)) == 0
    assert h_trace(plane(Z), H((4, -7), 9)) == 0
    sp = OddQuadraticSpace(Zi, psi_tilde(Zi, 1))
    zero = Zi.zero
    assert h_trace(sp, H((zero, zero), (0, 1))) == (0, 2)


def test_heisenberg_action_on_integers(Z):
    sp = plane(Z)
    assert h_act(sp, H((1, 2), 5), 3) == H((3, 6), 45)


def test_param_membership_examples(Z):
    sp = OddQuadraticSpace(Z, psi_tilde(Z, 1), L_MIN, 0)
    assert param_contains(sp, H((0, 0), 6))
    assert not param_contains(sp, H((0, 0), 3))
    assert not param_contains(sp, H((1, 0), 0))
    assert param_contains(plane(Z, L_MAX), H((2, 5), 7))


def test_lmin_contains_hyperbolic_basis(ring):
    sp = OddQuadraticSpace(ring, psi_tilde(ring, 2), L_MIN, 2)
    for k in range(4):
        assert param_contains(sp, H(sp.basis(k), ring.zero))


def test_lmin_inside_lmax(ring):
    rng = random.Random(4)
    lmin = OddQuadraticSpace(ring, psi_tilde(ring, 3), L_MIN, 2)
    lmax = OddQuadraticSpace(ring, psi_tilde(ring, 3), L_MAX, 2)
    for _ in range(100):
        z = random_param_element(lmin, rng)
        assert param_contains(lmin, z) and param_contains(lmax, z)


def test_undecidable_membership():
    class NoDecider(Integers):
        is_trace_like = Ring.is_trace_like

    R = NoDecider()
    sp = OddQuadraticSpace(R, psi_tilde(R, 1), L_MIN, 0)
    with pytest.raises(UndecidableMembership, match="undecidable parameter membership"):
        param_contains(sp, H((0, 0), 2))
    # L_max never needs the decider
    assert param_contains(OddQuadraticSpace(R, psi_tilde(R, 1)), H((0, 0), 2))


def test_esd_identity_cases(Z):
    sp = plane(Z, L_MIN)
    assert esd_matrix(sp, (1, 0), (0, 0), 0).is_identity()
    assert esd_matrix(sp, (0, 0), (0, 0), 0).is_identity()


def test_esd_hyperbolic_plane_example(Z):
    sp = plane(Z, L_MIN)
    M = esd_matrix(sp, (1, 0), (0, 0), 2)
    assert M == Mat.from_ints(Z, [[1, 2], [0, 1]])
    assert preserves_gram(sp.gram, M)
    assert esd_apply(sp, (1, 0), (0, 0), 2, (0, 1)) == (2, 1)


def test_esd_composition(Z):
    sp = plane(Z, L_MIN)
    M = esd_matrix(sp, (1, 0), (0, 0), 2) @ esd_matrix(sp, (1, 0), (0, 0), 4)
    assert M == Mat.from_ints(Z, [[1, 6], [0, 1]]) == esd_matrix(sp, (1, 0), (0, 0), 6)


def test_esd_preconditions(Z):
    sp = plane(Z, L_MIN)
    with pytest.raises(PreconditionError, match="<v1, v2>"):
        esd_matrix(sp, (1, 0), (0, 1), 0)
    with pytest.raises(PreconditionError, match=r"\(v2, r\)"):
        esd_matrix(sp, (1, 0), (0, 0), 3)


def test_esd_isometry_random(ring):
    rng = random.Random(9)
    for mode in (L_MAX, L_MIN):
        sp = OddQuadraticSpace(ring, psi_tilde(ring, 3), mode, 2)
        for _ in range(20):
            v1, v2, r = random_esd_args(sp, rng)
            M = esd_matrix(sp, v1, v2, r)
            assert preserves_gram(sp.gram, M)
            assert preserves_form(sp, M)


def test_basis_ordering():
    assert [pos(i) for i in (1, -1, 2, -2, 3, -3)] == [0, 1, 2, 3, 4, 5]
    with pytest.raises(QuadraticError):
        pos(0)


def test_short_transvection_examples(Z):
    sp = OddQuadraticSpace(Z, psi_tilde(Z, 2), L_MAX, 2)
    assert elem_transvection_short(sp, 1, 2, 0).is_identity()
    T = elem_transvection_short(sp, 1, 2, 5)
    assert T == esd_matrix(sp, e(sp, -2), tuple(-5 * x for x in e(sp, 1)), 0)
    assert preserves_form(sp, T)
    with pytest.raises(QuadraticError):
        elem_transvection_short(sp, 1, -1, 5)


def test_short_transvections_additive(ring):
    sp = OddQuadraticSpace(ring, psi_tilde(ring, 2), L_MAX, 2)
    rng = random.Random(8)
    for i, j in [(1, 2), (-1, 2), (2, -1), (-2, -1)]:
        r, s = ring.random(rng), ring.random(rng)
        T = elem_transvection_short(sp, i, j, r)
        assert preserves_gram(sp.gram, T)
        assert T @ elem_transvection_short(sp, i, j, s) == elem_transvection_short(sp, i, j, ring.add(r, s))


def test_long_transvection_identity(ring):
    sp = OddQuadraticSpace(ring, psi_tilde(ring, 2), L_MAX, 2)
    zero = (ring.zero,) * 4
    assert elem_transvection_long(sp, 1, zero, ring.zero).is_identity()
    assert elem_transvection_long(sp, -2, zero, ring.zero).is_identity()


def test_long_transvection_isometry(ring):
    sp = OddQuadraticSpace(ring, psi_tilde(ring, 3), L_MAX, 3)
    rng = random.Random(12)
    for _ in range(30):
        i = rng.choice([1, -1, 2, -2, 3, -3])
        v = random_isotropic_for(sp, i, rng)
        T = elem_transvection_long(sp, i, v, random_trace_like(ring, rng))
        assert preserves_gram(sp.gram, T)


def test_long_transvection_needs_isotropic_vector(Zi):
    # over the Gaussian integers (v, r) must have trace 0, which forces <v, v> = r - bar(r)
    sp = OddQuadraticSpace(Zi, psi_tilde(Zi, 2), L_MAX, 2)
    o, z = Zi.one, Zi.zero
    v = (o, z, o, (0, 1))  # e_1 + e_2 + w e_-2: <v, v> != 0 for any symmetric r
    with pytest.raises(PreconditionError):
        elem_transvection_long(sp, 1, v, Zi.zero)


def test_long_transvection_orthogonality_precondition(Z):
    sp = OddQuadraticSpace(Z, psi_tilde(Z, 2), L_MAX, 2)
    with pytest.raises(PreconditionError, match="<e_i, v>"):
        elem_transvection_long(sp, 1, (0, 1, 0, 0), 0)
