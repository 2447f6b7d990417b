import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import DomainError
from artifact.weyl import Elementary, WeylElt, affine_weyl

QS = [(2, 1), (3, 1), (5, 1), (3, 2), (2, 2)]


@pytest.fixture(params=QS, ids=lambda pf: f"q={pf[0] ** pf[1]}")
def W(request):
    return affine_weyl(*request.param)


def test_generators(W):
    assert W.mul(W.s0, W.s1) == W.theta
    assert W.mul(W.s0, W.s0) == W.omega(W.F.neg(1))
    assert W.length(W.theta) == 2
    assert W.length(W.s0) == 1
    assert W.length(W.s1) == 1


def test_sigma_on_grade_one(W):
    for o in W.omegas():
        assert W.sigma(o) == 1
        assert W.sigma(W.mul(W.s0, o)) == 0


def test_distinguished_words(W):
    assert W.w_n(3) == W.mul(W.s1, W.s0)
    assert W.v_m(3) == W.prod(W.s0, W.s1, W.s0)
    assert W.v_m(2) == W.s1
    assert W.reduced_word(W.theta) == ((0, 1), W.one)
    for n in range(1, 13):
        assert W.grade(W.w_n(n)) == n
        assert W.grade(W.mul(W.s0, W.w_n(n))) == n
        assert all(W.grade(w) == n for w in W.pieces(n))
    with pytest.raises(DomainError):
        W.w_n(0)
    with pytest.raises(DomainError):
        W.omega(0)


def test_conjugating_u_plus(W):
    for z in W.F.units():
        assert W.conjugate_elementary(W.one, W.u_plus(z)) == W.u_plus(z)
        for j in range(4):
            v = W.power(W.mul(W.s0, W.s1), j)
            assert W.conjugate_elementary(v, W.u_plus(z)) == Elementary("+", (z, W.length(v), 1))
            v = W.mul(W.s1, v)
            got = W.conjugate_elementary(v, W.u_plus(z))
            want = Elementary("-", W._eneg((z, W.length(v) + 1, 1)))
            assert got == want


def test_N_conjugates_s0_to_s1(W):
    N = W.N_matrix()
    M = W.mat_mul(W.mat_mul(N, W.matrix(W.s0)), W.mat_inv(N))
    assert W.from_matrix(M) == W.s1
    if W.p != 2:
        assert M == W.matrix(W.s1)


def test_canonical_form_roundtrip(W):
    for w in W.elements(6):
        assert W.from_matrix(W.matrix(w)) == w
        assert W.mul(w, W.inv(w)) == W.one


def test_from_reduced_word(W):
    for w in W.elements(10):
        letters, om = W.reduced_word(w)
        assert len(letters) == W.length(w)
        assert W.from_word(letters, om) == w


def test_length_additivity_matches_word_concatenation(W):
    # A word in s0, s1 is reduced iff it alternates; Omega passes through
    # the simple reflections, so l(vw) = l(v) + l(w) iff the last letter of
    # v differs from the first letter of w.
    ws = W.elements(6)
    for v in ws[:: max(1, len(ws) // 40)]:
        lv, _ = W.reduced_word(v)
        for w in ws:
            lw, _ = W.reduced_word(w)
            additive = not lv or not lw or lv[-1] != lw[0]
            total = W.length(W.mul(v, w))
            assert total <= W.length(v) + W.length(w)
            assert (total == W.length(v) + W.length(w)) == additive


def test_u_ws_omega_shift(W):
    F = W.F
    for w in W.elements(5):
        for s in (0, 1):
            if W.length(W.mul(w, W.s[s])) > W.length(w):
                continue
            for z1 in F.units():
                for z2 in F.units():
                    lhs = W.u_ws(W.mul(w, W.omega(z1)), s, z2)
                    rhs = W.u_ws(w, s, F.mul(F.mul(z1, z1), z2))
                    assert lhs == rhs


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(QS), st.booleans(), st.integers(-8, 8), st.integers(1, 100))
def test_inverse(pf, anti, n, zi):
    W = affine_weyl(*pf)
    w = WeylElt(anti, n, 1 + zi % (W.q - 1) if W.q > 2 else 1)
    assert W.mul(w, W.inv(w)) == W.one
    assert W.mul(W.inv(w), w) == W.one


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QS), st.lists(st.integers(0, 1), max_size=10))
def test_words_lengths(pf, letters):
    W = affine_weyl(*pf)
    w = W.from_word(letters)
    reduced = [a for i, a in enumerate(letters) if i == 0 or letters[i - 1] != a]
    # adjacent equal letters cancel up to Omega, so the length is that of the
    # word after repeatedly deleting equal adjacent pairs
    stack = []
    for a in letters:
        if stack and stack[-1] == a:
            stack.pop()
        else:
            stack.append(a)
    assert W.length(w) == len(stack)
    assert W.length(w) <= len(reduced)
