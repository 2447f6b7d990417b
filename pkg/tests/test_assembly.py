import functools

import numpy as np
import pytest

from artifact import linalg as la
from artifact.assembly import (
    annihilation_checks,
    build_truncation,
    filtration_check,
    finite_submodule,
    h1_xx0_decompose,
    natural_map,
    shapiro_group,
    socle_table,
    stable_subspace,
    z_m,
)
from artifact.errors import DomainError, LevelError
from artifact.finring import CharCase, FieldParams
from artifact.hecke import Character
from artifact.hmodule import add_multisets, character_module, decompose_Hx0, hom_space, regular_right_ideal
from artifact.progroup import SubgroupSpec as S, frattini_quotient, h1_map

EQ, ZERO = CharCase.EQUAL, CharCase.ZERO
CHI0, CHI1 = Character(0, -1, 0), Character(0, 0, -1)
TRIV, SIGN = Character(0), Character(0, -1, -1)


@functools.lru_cache(maxsize=None)
def M1(p, f, cc, m, conv="inverse"):
    return finite_submodule(FieldParams(p, f, cc), m, omega_convention=conv)


def test_shapiro_groups():
    assert shapiro_group(0, 1, 3) == S.I()
    assert shapiro_group(1, 0, 3) == S.I_minus(1)
    assert shapiro_group(5, 1, 3) == S.I_plus(2)
    assert shapiro_group(5, 0, 3) == S.I_minus(3)


def test_piece_grading():
    T = build_truncation(FieldParams(3, 1, EQ), 3, 4)
    for P in T.pieces:
        assert P.grade == P.length + P.sigma
        assert P.spec == shapiro_group(P.length, P.sigma, 3)
        assert P.dim == frattini_quotient(T.params, P.spec).dim
    assert [P.grade for P in T.pieces] == sorted(P.grade for P in T.pieces)


@pytest.mark.parametrize(
    "p,f,cc,m,nmax", [(3, 1, EQ, 2, 4), (3, 1, ZERO, 3, 5), (5, 1, EQ, 3, 5), (3, 2, EQ, 2, 4), (2, 1, EQ, 2, 4)]
)
def test_relations_hold(p, f, cc, m, nmax):
    assert build_truncation(FieldParams(p, f, cc), m, nmax).relation_defects() == []


def test_truncation_arguments():
    P = FieldParams(3, 1, EQ)
    with pytest.raises(LevelError):
        build_truncation(P, 0)
    with pytest.raises(LevelError):
        build_truncation(P, 3, 2)
    with pytest.raises(DomainError):
        build_truncation(P, 2, degree=2)
    with pytest.raises(DomainError):
        build_truncation(P, 2, omega_convention="sideways")


def test_explicit_formula_grade_one():
    # Omega-invariant (beta, alpha) on D_1: tau_s0 gives res(alpha) + sum_z u(z)^* beta
    # on every s0 omega piece and cores(beta) on every omega piece
    P = FieldParams(5, 1, EQ)
    T = build_truncation(P, 2)
    W, Fp = T.W, T.Fp
    QI, QK = frattini_quotient(P, S.I()), frattini_quotient(P, S.K(1))
    res, cores = h1_map("res", QI, QK), h1_map("cores", QK, QI)
    conj = la.zeros(QK.dim, QK.dim)
    for z in W.F.units():
        conj = Fp.aadd(conj, h1_map("conj", QK, QK, W.u_ws(W.s0, 0, z)))
    rng = np.random.default_rng(7)
    for _ in range(5):
        a, b = rng.integers(5, size=QI.dim), rng.integers(5, size=QK.dim)
        x = la.zeros(1, T.dim)[0]
        for Pc in T.pieces:
            if Pc.grade == 1:
                x[Pc.slice] = a if Pc.sigma else b
        y = Fp.matmul(x[None, :], T.T[0])[0]
        want_s0 = Fp.aadd(Fp.matmul(a[None, :], res), Fp.matmul(b[None, :], conj))[0]
        want_om = Fp.matmul(b[None, :], cores)[0]
        for Pc in T.pieces:
            if Pc.grade == 1:
                assert np.array_equal(y[Pc.slice], want_om if Pc.sigma else want_s0)
            else:
                assert not np.any(y[Pc.slice])


def test_explicit_formula_plus_part():
    # Omega-invariant (alpha, beta) on D_1^+ + D_2^+ at m = 3: tau_s1 gives
    # (cores(beta), res(alpha) + sum_z u_{w_2, s1}(z)^* beta)
    P = FieldParams(3, 1, EQ)
    T = build_truncation(P, 3)
    W, Fp = T.W, T.Fp
    Q0, Q1 = frattini_quotient(P, S.I()), frattini_quotient(P, S.I_plus(1))
    res, cores = h1_map("res", Q0, Q1), h1_map("cores", Q1, Q0)
    w2 = W.w_n(2)
    conj = la.zeros(Q1.dim, Q1.dim)
    for z in W.F.units():
        conj = Fp.aadd(conj, h1_map("conj", Q1, Q1, W.u_ws(w2, 1, z)))
    rng = np.random.default_rng(11)
    for _ in range(5):
        a, b = rng.integers(3, size=Q0.dim), rng.integers(3, size=Q1.dim)
        x = la.zeros(1, T.dim)[0]
        for Pc in T.pieces:
            if Pc.sigma and Pc.grade == 1:
                x[Pc.slice] = a
            elif Pc.sigma and Pc.grade == 2:
                x[Pc.slice] = b
        y = Fp.matmul(x[None, :], T.T[1])[0]
        want1 = Fp.matmul(b[None, :], cores)[0]
        want2 = Fp.aadd(Fp.matmul(a[None, :], res), Fp.matmul(b[None, :], conj))[0]
        for Pc in T.pieces:
            if Pc.sigma and Pc.grade == 1:
                assert np.array_equal(y[Pc.slice], want1)
            elif Pc.sigma and Pc.grade == 2:
                assert np.array_equal(y[Pc.slice], want2)


@pytest.mark.parametrize("p,f,cc", [(3, 1, EQ), (5, 1, ZERO), (3, 2, EQ), (2, 1, EQ)])
def test_level_one_is_zero(p, f, cc):
    M = M1(p, f, cc, 1)
    assert M.dim == 0
    assert z_m(M.module).dim == 0


@pytest.mark.parametrize("m", [2, 3])
def test_Q3_vanishes(m):
    assert M1(3, 1, ZERO, m).dim == 0


def test_small_q():
    M = M1(2, 1, EQ, 2).module
    assert M.dim == 1
    assert socle_table(M)[CHI0] == 1
    Z = z_m(M)
    assert hom_space(Z, character_module(M.H, CHI1, side="left"))


def test_F3_level_two_dual():
    Z = z_m(M1(3, 1, EQ, 2).module)
    assert Z.dim == 1 and socle_table(Z)[CHI1] == 1


def test_F5_level_two():
    M = M1(5, 1, EQ, 2).module
    tab = socle_table(M)
    assert tab[CHI0] == 1
    # lambda(z) = z^-1 is lambda^3 for q = 5
    assert tab[Character(3)] == 0
    assert tab[Character(1)] == tab[Character(2)] == 1
    assert tab[TRIV] == tab[SIGN] == 0


def test_zeta_square_kills_F3_level_three():
    M = M1(3, 1, EQ, 3).module
    assert not np.any(M.matrix(M.H.zeta_power(2)))


def test_tau_s1_kills_level_two():
    for p, f in [(3, 1), (5, 1), (3, 2)]:
        M = M1(p, f, EQ, 2).module
        assert not np.any(M.matrix(M.H.tau_s(1)))


def test_annihilation_needs_m_two():
    with pytest.raises(LevelError):
        annihilation_checks(M1(3, 1, EQ, 1).module, 1)


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (3, 2)])
def test_natural_map_injective(p, f):
    for m in (2, 3):
        src = M1(p, f, EQ, m)
        dst = M1(p, f, EQ, m + 1)
        N = natural_map(src, dst.truncation)
        Fp = dst.truncation.Fp
        assert la.rank(Fp, N) == src.dim
        if src.dim:
            # the image lies inside the next finite submodule
            assert la.rank(Fp, np.vstack([dst.basis, N])) == dst.dim


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (3, 2)])
def test_eigenspace_stable_in_m(p, f):
    for m in (2, 3):
        chi = CHI0 if m % 2 == 0 else CHI1
        assert socle_table(M1(p, f, EQ, m).module)[chi] == socle_table(M1(p, f, EQ, m + 1).module)[chi]


@pytest.mark.parametrize("p,f,mmax", [(3, 1, 4), (5, 1, 4), (3, 2, 3)])
def test_chi_eps_law(p, f, mmax):
    for m in range(1, mmax + 1):
        chi = CHI0 if m % 2 == 0 else CHI1
        assert socle_table(M1(p, f, EQ, m).module)[chi] == (m - 1) * f


def twist(chi: Character) -> Character:
    if chi.j:
        return chi
    return Character(0, -1 - chi.c0, -1 - chi.c1)


@pytest.mark.parametrize("p,f,cc,m", [(3, 1, EQ, 3), (5, 1, EQ, 2), (5, 1, EQ, 3), (3, 2, EQ, 2), (2, 1, EQ, 2)])
def test_socle_matches_cosocle_of_dual(p, f, cc, m):
    M = M1(p, f, cc, m).module
    Z = z_m(M)
    tab = socle_table(M)
    for chi, d in tab.items():
        C = character_module(M.H, twist(chi), side="left")
        assert len(hom_space(Z, C)) == d


@pytest.mark.parametrize("p,f,m", [(5, 1, 2), (5, 1, 3), (3, 2, 2)])
def test_omega_conventions_swap_lambda(p, f, m):
    inv = socle_table(M1(p, f, EQ, m, "inverse").module)
    fwd = socle_table(M1(p, f, EQ, m, "forward").module)
    H = M1(p, f, EQ, m).module.H
    for chi, d in inv.items():
        other = Character(H.inverse_index(chi.j), chi.c0, chi.c1) if chi.j else chi
        assert fwd[other] == d


def test_stable_subspace_fixpoint():
    from artifact.finring import field

    F = field(3)
    # shift operator e0 -> e1 -> e2 -> 0: the largest stable subspace of <e1, e2> is itself
    A = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.int64)
    V = np.array([[0, 1, 0], [0, 0, 1]], dtype=np.int64)
    assert stable_subspace(F, V, [A]).shape[0] == 2
    V = np.array([[1, 0, 0], [0, 1, 0]], dtype=np.int64)
    assert stable_subspace(F, V, [A]).shape[0] == 0


def test_hx0_for_Q3():
    r = h1_xx0_decompose(FieldParams(3, 1, ZERO))
    H = r.module.H
    want = add_multisets(
        decompose_Hx0(regular_right_ideal(H, H.one())),
        decompose_Hx0(regular_right_ideal(H, H.tau_s(0))),
        times=[2, 1],
    )
    assert r.multiset == want


@pytest.mark.parametrize("p,f,cc", [(3, 1, ZERO), (5, 1, EQ), (3, 2, EQ), (5, 1, ZERO)])
def test_hx0_e1_block(p, f, cc):
    P = FieldParams(p, f, cc)
    r = h1_xx0_decompose(P)
    assert r.triv_dim == frattini_quotient(P, S.I()).dim
    assert r.sign_dim == frattini_quotient(P, S.K(1)).dim


@pytest.mark.parametrize("m,i,j", [(2, 2, 0), (2, 2, 1), (2, 3, 1), (3, 3, 1)])
def test_filtration(m, i, j):
    out = filtration_check(FieldParams(3, 1, EQ), m, i, j, n_max=i + 3)
    assert out and all(ok for _, ok in out)


def test_filtration_rejects_small_i():
    with pytest.raises(LevelError):
        filtration_check(FieldParams(3, 1, EQ), 3, 2)
