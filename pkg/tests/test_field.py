import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modalq import kernels
from modalq.errors import DomainError, FieldMismatchError
from modalq.field import FieldSpec, add, enumerate_elements, inv, is_irreducible, mul

from conftest import F2, F3, F4, SMALL_FIELDS


def el(spec, v):
    return spec.element(v)


def naive_polymul_mod(a, b, modulus, p):
    # schoolbook product then reduction by repeated subtraction of the monic modulus
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    k = len(modulus) - 1
    for top in range(len(prod) - 1, k - 1, -1):
        f = prod[top]
        if f:
            for i, m in enumerate(modulus):
                prod[top - k + i] = (prod[top - k + i] - f * m) % p
    return tuple(prod[:k])


class TestExamples:
    def test_add(self):
        assert add(el(F2, 1), el(F2, 1)) == F2.zero
        assert add(el(F3, 2), el(F3, 2)) == el(F3, 1)
        assert el(F4, [0, 1]) + el(F4, [1, 1]) == F4.one

    def test_mul(self):
        assert mul(el(F3, 2), el(F3, 2)) == el(F3, 1)
        x = el(F4, [0, 1])
        assert x * x == el(F4, [1, 1])
        f5 = FieldSpec(5)
        assert el(f5, 3) * el(f5, 4) == el(f5, 2)

    def test_inv(self):
        assert inv(el(F3, 2)) == el(F3, 2)
        f7 = FieldSpec(7)
        assert inv(el(f7, 3)) == el(f7, 5)
        assert inv(el(F4, [0, 1])) == el(F4, [1, 1])

    def test_inv_zero(self):
        with pytest.raises(ZeroDivisionError):
            inv(F3.zero)

    def test_enumeration_order(self):
        assert [e.coeffs for e in enumerate_elements(F2)] == [(0,), (1,)]
        assert [e.coeffs for e in enumerate_elements(F3)] == [(0,), (1,), (2,)]
        assert [str(e) for e in enumerate_elements(F4)] == ["0", "1", "x", "x+1"]

    def test_mismatch(self):
        with pytest.raises(FieldMismatchError):
            add(F2.one, F3.one)
        with pytest.raises(DomainError):
            mul(F2.one, F4.one)


class TestSpec:
    @pytest.mark.parametrize("text,q", [("2", 2), ("5", 5), ("4", 4), ("2^2", 4), ("2^2:1,1,1", 4), ("3^2", 9), ("8", 8)])
    def test_parse(self, text, q):
        assert FieldSpec.parse(text).q == q

    def test_str_round_trip(self):
        for spec in SMALL_FIELDS:
            assert FieldSpec.parse(str(spec)) == spec

    @pytest.mark.parametrize("text", ["1", "6", "2^2:1,0,1", "2^2:1,1", "x", "2^2:1,1,2", "12^2"])
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            FieldSpec.parse(text)

    def test_reducible_modulus(self):
        # x^2 + 1 = (x+1)^2 over GF(2)
        with pytest.raises(DomainError, match="reducible"):
            FieldSpec(2, 2, (1, 0, 1))

    def test_irreducibility_against_root_count(self):
        # degree 2 and 3 polynomials are irreducible iff they have no root
        for p in (2, 3, 5):
            for deg in (2, 3):
                for low in itertools.product(range(p), repeat=deg):
                    m = list(low) + [1]
                    has_root = any(sum(c * x**i for i, c in enumerate(m)) % p == 0 for x in range(p))
                    assert is_irreducible(m, p) == (not has_root)

    def test_prime_bounds(self):
        with pytest.raises(DomainError):
            FieldSpec(2**31 + 11)
        assert FieldSpec(2**31 - 1).q == 2**31 - 1

    def test_coefficient_list_too_long(self):
        with pytest.raises(DomainError):
            F4.element([1, 0, 1])


@pytest.mark.parametrize("spec", SMALL_FIELDS, ids=lambda s: s.label())
class TestAxiomsExhaustive:
    def test_ring_laws(self, spec):
        els = spec.elements()
        for a, b in itertools.product(els, repeat=2):
            assert a + b == b + a
            assert a * b == b * a
            assert a + (-a) == spec.zero
        for a, b, c in itertools.product(els, repeat=3):
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    def test_identities_and_inverses(self, spec):
        for a in spec.elements():
            assert a + spec.zero == a
            assert a * spec.one == a
            if not a.is_zero():
                assert a * inv(a) == spec.one
                assert a / a == spec.one

    def test_frobenius(self, spec):
        for a in spec.elements():
            assert a ** spec.q == a

    def test_index_round_trip(self, spec):
        for i in range(spec.q):
            e = spec.from_index(i)
            assert e.index == i
            assert spec.element(list(e.coeffs)) == e

    def test_kernel_tables_match(self, spec):
        p, k, exp, log = spec.kernel_args
        idx = np.arange(spec.q)
        a, b = np.meshgrid(idx, idx, indexing="ij")
        fast = kernels.v_mul(a, b, p, k, exp, log)
        slow = np.array([[(spec.from_index(i) * spec.from_index(j)).index for j in idx] for i in idx])
        assert np.array_equal(fast, slow)
        plus = kernels.v_add(a, b, p, k)
        assert np.array_equal(plus, [[(spec.from_index(i) + spec.from_index(j)).index for j in idx] for i in idx])
        invs = kernels.v_inv(idx[1:], p, k, exp, log)
        assert np.array_equal(kernels.v_mul(idx[1:], invs, p, k, exp, log), np.ones(spec.q - 1))


@pytest.mark.parametrize("spec", [s for s in SMALL_FIELDS if s.k > 1], ids=lambda s: s.label())
def test_mul_matches_schoolbook(spec):
    for a, b in itertools.product(spec.elements(), repeat=2):
        assert (a * b).coeffs == naive_polymul_mod(a.coeffs, b.coeffs, spec.modulus, spec.p)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(1, 8))
def test_division_gf9(i, j, nz):
    f9 = FieldSpec.builtin(9)
    a, b, c = f9.from_index(i), f9.from_index(j), f9.from_index(nz)
    assert (a * c) / c == a
    assert (a + b) / c == a / c + b / c
