import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import DomainError, LevelError, NonUnitInverse, ValuationError
from artifact.finring import CharCase, FieldParams, field, local_ring, primitive_polynomial

RINGS = [
    (3, 1, CharCase.ZERO, 4),
    (5, 1, CharCase.ZERO, 3),
    (2, 1, CharCase.ZERO, 5),
    (3, 2, CharCase.ZERO, 3),
    (3, 1, CharCase.EQUAL, 4),
    (5, 1, CharCase.EQUAL, 3),
    (3, 2, CharCase.EQUAL, 3),
    (2, 2, CharCase.EQUAL, 3),
]


def test_inverse_in_z_mod_81():
    R = local_ring(3, 1, CharCase.ZERO, 4)
    assert R.inv((2,)) == (41,)
    assert pow(2, -1, 81) == 41


def test_valuation_of_zero_is_level():
    for p, f, cc, L in RINGS:
        R = local_ring(p, f, cc, L)
        assert R.valuation(R.zero) == L


def test_truncated_polynomial_product():
    # (1 + t)(1 - t + t^2) = 1 + t^3 = 1 in F_3[t]/(t^3)
    R = local_ring(3, 1, CharCase.EQUAL, 3)
    assert R.mul((1, 1, 0), (1, 2, 1)) == (1, 0, 0)


def test_teichmuller_examples():
    assert local_ring(3, 1, CharCase.ZERO, 2).teichmuller(2) == (8,)
    for p, f, cc, L in RINGS:
        R = local_ring(p, f, cc, L)
        assert R.teichmuller(1) == R.one
    R = local_ring(3, 2, CharCase.EQUAL, 3)
    for z in R.Fq.units():
        assert R.teichmuller(z) == (z, 0, 0)


def test_digit_examples():
    R = local_ring(3, 1, CharCase.ZERO, 3)
    assert R.digit_decompose(R.zero, 0, 3) == [0, 0, 0]
    # greedy peeling by hand: 12 = 3 * 4, 4 = 1 mod 3, then 12 - 3 = 9 = 9 * 1
    digits = R.digit_decompose((12,), 1, 3)
    assert digits == [1, 1]
    assert R.reassemble(digits, 1) == (12,)
    E = local_ring(3, 1, CharCase.EQUAL, 3)
    assert E.digit_decompose((0, 1, 2), 1, 3) == [1, 2]


def test_digit_errors():
    R = local_ring(3, 1, CharCase.ZERO, 3)
    with pytest.raises(ValuationError):
        R.digit_decompose((1,), 1, 3)
    with pytest.raises(LevelError):
        R.digit_decompose((0,), 2, 5)
    with pytest.raises(NonUnitInverse):
        R.inv((3,))


def test_params_validation():
    with pytest.raises(DomainError):
        FieldParams(4)
    with pytest.raises(DomainError):
        FieldParams(3, 2, kdeg=3)
    assert FieldParams(3, 1, "0").is_Qp
    assert not FieldParams(3, 2, "0").is_Qp
    assert not FieldParams(3, 1, "p").is_Qp
    assert FieldParams(3, 2, "0").label() == "Q_3^ur(2)"


def test_primitive_polynomial_is_deterministic_and_primitive():
    for p, d in [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)]:
        low = primitive_polynomial(p, d)
        assert primitive_polynomial(p, d) == low
        F = field(p, d)
        orders = {e for e in range(1, F.order) if F.pow(F.gen, e) == 1}
        assert min(orders) == F.order - 1


@pytest.mark.parametrize("p,d", [(2, 2), (3, 2), (2, 3)])
def test_small_field_axioms(p, d):
    F = field(p, d)
    els = list(F.elements())
    for a, b in itertools.product(els, els):
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a, b, c in itertools.product(els[:5], els, els):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


ring_params = st.sampled_from(RINGS)


@settings(max_examples=60, deadline=None)
@given(ring_params, st.integers(0, 2**32 - 1))
def test_unit_inverse(rp, seed):
    R = local_ring(*rp)
    rng = np.random.default_rng(seed)
    u = R.add(R.teichmuller(int(rng.integers(1, R.q))), R.random(rng, 1))
    assert R.is_unit(u)
    assert R.mul(u, R.inv(u)) == R.one


@settings(max_examples=40, deadline=None)
@given(ring_params, st.integers(0, 2**32 - 1))
def test_teichmuller_multiplicative_and_fixed(rp, seed):
    R = local_ring(*rp)
    rng = np.random.default_rng(seed)
    a, b = (int(x) for x in rng.integers(1, R.q, size=2))
    ta, tb = R.teichmuller(a), R.teichmuller(b)
    assert R.mul(ta, tb) == R.teichmuller(R.Fq.mul(a, b))
    assert R.pow(ta, R.q) == ta


@settings(max_examples=200, deadline=None)
@given(ring_params, st.integers(0, 2**32 - 1), st.data())
def test_digit_reassembly(rp, seed, data):
    R = local_ring(*rp)
    rng = np.random.default_rng(seed)
    a = data.draw(st.integers(0, R.L - 1))
    b = data.draw(st.integers(a + 1, R.L))
    u = R.random(rng, a)
    digits = R.digit_decompose(u, a, b)
    target = R.at_level(b)
    assert R.reduce(R.reassemble(digits, a), target) == R.reduce(u, target)


@settings(max_examples=40, deadline=None)
@given(ring_params, st.integers(0, 2**32 - 1))
def test_teichmuller_compatible_with_reduction(rp, seed):
    R = local_ring(*rp)
    z = int(np.random.default_rng(seed).integers(1, R.q))
    for L in range(1, R.L):
        S = R.at_level(L)
        assert R.reduce_level(R.teichmuller(z), L) == S.teichmuller(z)


@settings(max_examples=60, deadline=None)
@given(ring_params, st.integers(0, 2**32 - 1))
def test_valuation_of_product(rp, seed):
    R = local_ring(*rp)
    rng = np.random.default_rng(seed)
    a, b = R.random(rng), R.random(rng)
    assert R.valuation(R.mul(a, b)) == min(R.valuation(a) + R.valuation(b), R.L)
    assert R.is_unit(a) == (R.valuation(a) == 0)
