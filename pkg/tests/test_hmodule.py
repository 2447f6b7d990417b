import functools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact import linalg as la
from artifact.errors import CheckFailure
from artifact.hecke import Character, HeckeAlgebra
from artifact.hmodule import (
    FinModule,
    add_multisets,
    character_module,
    classify,
    decompose_Hx0,
    direct_sum,
    dual_iota_twist,
    hom_space,
    multiset_dimension,
    regular_right_ideal,
)


@functools.lru_cache(maxsize=None)
def algebra(p, f=1):
    return HeckeAlgebra(p, f)


def chars(H, *specs):
    return [character_module(H, Character(*s)) for s in specs]


@pytest.mark.parametrize("pf", [(3, 1), (5, 1), (2, 2)])
def test_zeta_on_characters(pf):
    H = algebra(*pf)
    for chi in H.characters():
        M = character_module(H, chi)
        z = int(M.matrix(H.zeta)[0, 0])
        assert z == (0 if chi.is_supersingular else 1)


def test_character_count():
    for pf in [(3, 1), (5, 1), (3, 2)]:
        H = algebra(*pf)
        assert len(H.characters()) == H.q + 2


def test_classify_sum():
    H = algebra(3)
    chi0, triv = chars(H, (0, -1, 0), (0, 0, 0))
    c = classify(direct_sum([chi0, triv]))
    assert c.supersingular_part.dim == 1 and c.nonsupersingular_part.dim == 1
    assert hom_space(c.supersingular_part, chi0) and hom_space(c.nonsupersingular_part, triv)
    assert not (c.is_zeta_torsion or c.is_zeta_torsionfree)


def test_zero_module_is_both():
    H = algebra(3)
    z = la.zeros(0, 0)
    c = classify(FinModule(H, "right", z, z, z))
    assert c.is_zeta_torsion and c.is_zeta_torsionfree


def two_dim(H, c):
    # tau_s0 = diag(0, -1), tau_s1 = [[-1, 0], [c, 0]], Omega trivial
    k = H.k
    m1 = k.neg(1)
    T0 = np.array([[0, 0], [0, m1]], dtype=np.int64)
    T1 = np.array([[m1, 0], [c, 0]], dtype=np.int64)
    return FinModule(H, "right", T0, T1, la.identity(2))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1)]), st.integers(0, 4))
def test_classify_two_dim(pf, c):
    H = algebra(*pf)
    M = two_dim(H, c % H.q)
    Z = M.row_action(M.matrix(H.zeta))
    r = la.rank(H.k, Z)
    res = classify(M)
    assert res.supersingular_part.dim + res.nonsupersingular_part.dim == 2
    assert res.is_zeta_torsionfree == (r == 2)
    nilp = not np.any(la.power(H.k, Z, 2))
    assert res.is_zeta_torsion == nilp


def test_bad_relations_rejected():
    H = algebra(3)
    T = np.array([[1]], dtype=np.int64)
    with pytest.raises(CheckFailure):
        FinModule(H, "right", T, T, la.identity(1))


@pytest.mark.parametrize("pf", [(3, 1), (5, 1), (2, 2)])
def test_hom_between_characters(pf):
    H = algebra(*pf)
    cs = H.characters()
    for a in cs:
        for b in cs:
            n = len(hom_space(character_module(H, a), character_module(H, b)))
            assert n == (1 if a == b else 0)


@pytest.mark.parametrize("pf", [(2, 1), (3, 1), (5, 1)])
def test_dual_twist_of_characters(pf):
    H = algebra(*pf)
    swap = {Character(0, -1, 0): Character(0, 0, -1), Character(0, 0, 0): Character(0, -1, -1)}
    swap.update({v: k for k, v in swap.items()})
    for chi in H.characters():
        D = dual_iota_twist(character_module(H, chi))
        assert D.side == "left"
        want = swap.get(chi, chi)
        assert hom_space(D, character_module(H, want, side="left"))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1)]), st.integers(0, 2**32 - 1))
def test_dual_twist_preserves_dimension(pf, seed):
    H = algebra(*pf)
    rng = np.random.default_rng(seed)
    cs = H.characters()
    M = direct_sum([character_module(H, cs[int(i)]) for i in rng.integers(len(cs), size=3)])
    # conjugate by a random invertible matrix
    while True:
        P = rng.integers(H.k.order, size=(3, 3)).astype(np.int64)
        if la.rank(H.k, P) == 3:
            break
    Pi = la.inverse(H.k, P)
    conj = lambda T: H.k.matmul(H.k.matmul(P, T), Pi)
    N = FinModule(H, "right", conj(M.T0), conj(M.T1), conj(M.Tg))
    D = dual_iota_twist(N)
    assert D.dim == 3
    assert dual_iota_twist(D).side == "right"
    assert len(hom_space(M, N)) == len(hom_space(M, M))


@pytest.mark.parametrize("pf", [(3, 1), (5, 1), (2, 2), (3, 2)])
def test_decompose_regular_ideals(pf):
    H = algebra(*pf)
    for j in H.lambda_indices():
        if j == 0:
            continue
        E = regular_right_ideal(H, H.e_lambda(j))
        assert decompose_Hx0(E) == {f"e_lambda^{j} H_x0": 1}
        # its simple submodules: only the character lambda^-1 with tau_s0 = 0
        for jj in H.lambda_indices():
            C = character_module(H, Character(jj), tag="H_x0")
            assert bool(hom_space(C, E)) == (jj == H.inverse_index(j))
    S = decompose_Hx0(regular_right_ideal(H, H.tau_s(0)))
    want = {"chi0_sign": 1} | {f"chi0_lambda^{j}": 1 for j in H.lambda_indices() if j}
    assert S == want
    assert multiset_dimension(S) == H.q - 1


def test_decompose_zero_and_sums():
    H = algebra(5)
    z = la.zeros(0, 0)
    assert decompose_Hx0(FinModule(H, "right", z, None, z, "H_x0")) == {}
    parts = [regular_right_ideal(H, x) for x in (H.one(), H.tau_s(0), H.tau_s(0) + H.e1(), H.e_lambda(2))]
    total = add_multisets(*(decompose_Hx0(P) for P in parts))
    assert decompose_Hx0(direct_sum(parts)) == total
    assert multiset_dimension(total) == sum(P.dim for P in parts)
