import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact import linalg as la
from artifact.errors import MembershipError, NotASubgroupPair
from artifact.finring import CharCase, FieldParams, field, local_ring
from artifact.progroup import (
    SubgroupSpec as S,
    ambient_ring,
    check_stability,
    conjugation_matrix,
    diag,
    frattini_quotient,
    h1_map,
    identity,
    iwahori_assemble,
    iwahori_factor,
    mat_mul,
    n_conjugation_matrix,
    transfer_element,
    transfer_matrix,
    u_minus,
    u_plus,
)

EQ, ZERO = CharCase.EQUAL, CharCase.ZERO


def fq(P, spec, backend=None):
    return frattini_quotient(P, spec, backend=backend or ("brute" if P.p == 2 else "coordinate"))


def test_iwahori_factor_identity():
    R = local_ring(3, 1, ZERO, 4)
    assert iwahori_factor(R, identity(R)) == (R.zero, R.one, R.zero)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([ZERO, EQ]), st.integers(0, 2**32 - 1))
def test_iwahori_roundtrip(cc, seed):
    R = local_ring(3, 1, cc, 4)
    rng = np.random.default_rng(seed)
    c = R.random(rng, 1)
    t = R.add(R.teichmuller(int(rng.integers(1, 3))), R.random(rng, 1))
    b = R.random(rng)
    g = iwahori_assemble(R, c, t, b)
    assert g == (t, R.mul(t, b), R.mul(c, t), R.add(R.mul(R.mul(c, t), b), R.inv(t)))
    assert g == mat_mul(R, mat_mul(R, u_minus(R, c), diag(R, t)), u_plus(R, b))
    assert iwahori_factor(R, g) == (c, t, b)
    # the pro-p Iwahori needs t = 1 mod pi
    assert S.I().contains(R, g) == (R.residue(t) == 1)


def test_membership_errors():
    P = FieldParams(3, 1, ZERO)
    Q = fq(P, S.K(1))
    R = ambient_ring(Q)
    with pytest.raises(MembershipError):
        Q.coords(R, u_plus(R, R.one))
    with pytest.raises(NotASubgroupPair):
        transfer_matrix(fq(P, S.I_plus(1)), fq(P, S.I_minus(1)))


@pytest.mark.parametrize("p,f,cc", [(3, 1, ZERO), (3, 1, EQ), (5, 1, ZERO), (3, 2, EQ), (3, 2, ZERO)])
def test_frattini_dimensions(p, f, cc):
    P = FieldParams(p, f, cc)
    assert fq(P, S.K(1)).dim == 3 * f
    assert fq(P, S.I()).dim == 2 * f


def test_qp_generators_of_I():
    for p in (3, 5):
        P = FieldParams(p, 1, ZERO)
        Q = fq(P, S.I())
        R = ambient_ring(Q)
        vs = np.array([Q.coords(R, u_minus(R, R.from_int(p))), Q.coords(R, u_plus(R, R.one))])
        assert la.rank(field(p), vs) == 2


def test_q2_dimensions():
    P = FieldParams(2, 1, ZERO)
    assert [fq(P, S.I_plus(i)).dim for i in (1, 2, 3)] == [3, 4, 4]
    assert [fq(P, S.I_minus(i)).dim for i in (1, 2, 3)] == [3, 4, 4]


def test_transfer_examples():
    for p in (3, 5):
        P = FieldParams(p, 1, ZERO)
        A, B = fq(P, S.I()), fq(P, S.I_plus(1))
        R = ambient_ring(A, B, extra=1)
        got = transfer_element(A, B, R, u_minus(R, R.from_int(p)))
        assert np.array_equal(got, B.coords(R, u_minus(R, R.from_int(p * p))))
        got = transfer_element(A, B, R, u_plus(R, R.one))
        want = B.coords(R, u_minus(R, R.from_int(9))) if p == 3 else np.zeros(B.dim, dtype=np.int64)
        assert np.array_equal(got, want)


@pytest.mark.parametrize("p,f,cc", [(3, 1, EQ), (5, 1, EQ), (3, 2, ZERO)])
def test_transfer_zero_in_higher_levels(p, f, cc):
    P = FieldParams(p, f, cc)
    for i in (1, 2):
        for mk in (S.I_plus, S.I_minus):
            assert not np.any(transfer_matrix(fq(P, mk(i)), fq(P, mk(i + 1))))


@pytest.mark.parametrize("p,cc", [(2, EQ), (3, EQ), (3, ZERO), (2, ZERO)])
def test_cores_after_res_is_zero(p, cc):
    # cores o res is multiplication by the index q, which is 0 in k
    P = FieldParams(p, 1, cc)
    Fp = field(p)
    for big, small in [(S.I(), S.I_plus(1)), (S.I(), S.I_minus(1)), (S.I_plus(1), S.I_plus(2))]:
        for backend in ("brute",) if p == 2 else ("coordinate", "brute"):
            G, D = fq(P, big, backend), fq(P, small, backend)
            comp = Fp.matmul(h1_map("res", G, D), h1_map("cores", D, G))
            assert not np.any(comp)


@pytest.mark.parametrize("p,f,cc", [(3, 1, EQ), (5, 1, ZERO), (3, 2, EQ), (3, 2, ZERO)])
def test_conjugation_closed_form_on_K1(p, f, cc):
    # u = (1 [z]; 0 1) pulls back (0, 0, beta) to (-beta(z^2 .), -2 beta(z .), beta)
    P = FieldParams(p, f, cc)
    Q = fq(P, S.K(1))
    R = Q.ring(3)
    Fq, F = R.Fq, field(p)
    basis = [p**s for s in range(f)]
    for z in Fq.units():
        C = conjugation_matrix(Q, u_plus(R, R.teichmuller(z)), R)
        for r in range(f):
            beta = lambda y: int(Fq.fp_vector(y)[r])
            a = np.zeros(3 * f, dtype=np.int64)
            a[2 * f + r] = 1
            got = F.matmul(a[None, :], C.T)[0]
            want = (
                [-beta(Fq.mul(Fq.mul(z, z), e)) % p for e in basis]
                + [-2 * beta(Fq.mul(z, e)) % p for e in basis]
                + [beta(e) for e in basis]
            )
            assert got.tolist() == want


@pytest.mark.parametrize("p,cc", [(3, ZERO), (3, EQ), (5, ZERO), (2, ZERO)])
def test_N_swaps_plus_and_minus(p, cc):
    P = FieldParams(p, 1, cc)
    Fp = field(p)
    for i in (1, 2):
        A, B = fq(P, S.I_plus(i)), fq(P, S.I_minus(i))
        assert A.dim == B.dim
        ra = la.rank(Fp, transfer_matrix(A, fq(P, S.I_plus(i + 1))))
        rb = la.rank(Fp, transfer_matrix(B, fq(P, S.I_minus(i + 1))))
        assert ra == rb
    if p != 2:
        # N I_i^- N^-1 = I_i^+, so the induced map is bijective
        for i in (1, 2):
            M = n_conjugation_matrix(fq(P, S.I_minus(i)), fq(P, S.I_plus(i)))
            assert la.rank(Fp, M) == M.shape[0] == M.shape[1]


@pytest.mark.parametrize("spec", [S.I(), S.K(1), S.I_plus(1), S.I_minus(1), S.I_plus(2), S.I_minus(2)], ids=repr)
@pytest.mark.parametrize("cc", [ZERO, EQ])
def test_backends_agree(spec, cc):
    P = FieldParams(3, 1, cc)
    A = frattini_quotient(P, spec, backend="coordinate")
    B = frattini_quotient(P, spec, backend="brute")
    assert A.dim == B.dim and A.basis == B.basis
    R = ambient_ring(A, B)
    for g in A.reps(R):
        assert np.array_equal(A.coords(R, g), B.coords(R, g))


@pytest.mark.parametrize("cc", [ZERO, EQ])
def test_backends_agree_on_maps(cc):
    P = FieldParams(3, 1, cc)
    for big, small in [(S.I(), S.I_plus(1)), (S.I(), S.I_minus(1)), (S.I_minus(1), S.I_minus(2))]:
        mats = []
        for backend in ("coordinate", "brute"):
            G, D = frattini_quotient(P, big, backend=backend), frattini_quotient(P, small, backend=backend)
            mats.append((h1_map("res", G, D), h1_map("cores", D, G)))
        for x, y in zip(*mats):
            assert np.array_equal(x, y)


@pytest.mark.parametrize("p,cc", [(3, ZERO), (5, EQ), (2, ZERO)])
def test_stability_one_level_up(p, cc):
    P = FieldParams(p, 1, cc)
    for spec in (S.I(), S.K(1), S.I_plus(2)):
        check_stability(fq(P, spec))
