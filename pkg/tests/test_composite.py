import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modalq.composite import FactorShape, reduce, reduce_pure, tensor_subspace
from modalq.errors import DomainError
from modalq.linalg import MatrixF, VectorF, kron
from modalq.subspace import Subspace, enumerate_subspaces, enumerate_vectors, includes, join

from conftest import F2, F3, F4, invertibles, sub

S22 = FactorShape((2, 2))


class TestExamples:
    def test_shape(self):
        assert FactorShape.parse("2x3").total == 6
        assert str(FactorShape.parse("2X2x2")) == "2x2x2"
        with pytest.raises(DomainError):
            FactorShape.parse("2by2")
        with pytest.raises(DomainError):
            FactorShape((2, 0))

    def test_tensor(self):
        assert tensor_subspace(sub(F2, (1, 0)), sub(F2, (0, 1))) == sub(F2, (0, 1, 0, 0))
        assert tensor_subspace(sub(F2, (1, 0)), Subspace.null(F2, 2)).is_null()
        assert tensor_subspace(Subspace.full(F2, 2), Subspace.full(F2, 2)).is_full()

    def test_reduce_pure(self):
        bell = VectorF(F2, [1, 0, 0, 1])
        assert reduce_pure(bell, S22, 1).is_full()
        assert reduce_pure(kron(VectorF(F2, [1, 0]), VectorF(F2, [0, 1])), S22, 2) == sub(F2, (0, 1))
        assert reduce_pure(VectorF(F3, [1, 0, 0, 2]), S22, 2).is_full()
        with pytest.raises(DomainError):
            reduce_pure(VectorF(F2, [0, 0, 0, 0]), S22, 1)

    def test_reduce(self):
        bell = sub(F3, (1, 0, 0, 1))
        assert reduce(bell, S22, 1).is_full() and reduce(bell, S22, 2).is_full()
        a, b = sub(F3, (1, 2)), sub(F3, (0, 1))
        assert reduce(tensor_subspace(a, b), S22, 1) == a
        assert reduce(tensor_subspace(a, b), S22, 2) == b
        assert reduce(sub(F2, (0, 1, 0, 0), (0, 0, 1, 0)), S22, 1).is_full()
        assert reduce(Subspace.null(F2, 4), S22, 1).is_null()
        with pytest.raises(DomainError):
            reduce(bell, FactorShape((2, 3)), 1)
        with pytest.raises(DomainError):
            reduce(bell, S22, 3)

    def test_asymmetric_shape_convention(self):
        # e_1 (x) e_2 in F^2 (x) F^3 sits at index 1*3 + 2
        v = kron(VectorF(F2, [0, 1]), VectorF(F2, [0, 0, 1]))
        assert v.tolist().index(1) == 5
        shape = FactorShape((2, 3))
        assert reduce_pure(v, shape, 1) == sub(F2, (0, 1))
        assert reduce_pure(v, shape, 2) == sub(F2, (0, 0, 1))

    def test_three_factors(self):
        shape = FactorShape((2, 2, 2))
        e0, e1 = VectorF(F2, [1, 0]), VectorF(F2, [0, 1])
        ghz = kron(kron(e0, e0), e0) + kron(kron(e1, e1), e1)
        for keep in (1, 2, 3):
            assert reduce_pure(ghz, shape, keep).is_full()
        prod = kron(kron(e0, e1), e1)
        assert [reduce_pure(prod, shape, k) for k in (1, 2, 3)] == [sub(F2, (1, 0)), sub(F2, (0, 1)), sub(F2, (0, 1))]


def _oracle_reduce(m: Subspace, keep: int) -> Subspace:
    """Join of the pure reductions of every nonzero vector of m."""
    out = Subspace.null(m.spec, 2)
    for v in enumerate_vectors(m)[1:]:
        out = join(out, reduce_pure(v, S22, keep))
    return out


@pytest.mark.parametrize("spec", [F2, F3], ids=lambda s: s.label())
def test_reduce_matches_vectorwise_oracle(spec):
    for m in enumerate_subspaces(4, spec):
        assert reduce(m, S22, 1) == _oracle_reduce(m, 1)
        assert reduce(m, S22, 2) == _oracle_reduce(m, 2)


def test_minimality_by_descent():
    factors = enumerate_subspaces(2, F2)
    for m in enumerate_subspaces(4, F2):
        r1, r2 = reduce(m, S22, 1), reduce(m, S22, 2)
        assert includes(tensor_subspace(r1, r2), m)
        for n1, n2 in itertools.product(factors, repeat=2):
            if includes(tensor_subspace(n1, n2), m):
                assert includes(n1, r1) and includes(n2, r2)


def test_mixture_law_exhaustive_gf2():
    subs = enumerate_subspaces(4, F2)
    for a, b in itertools.product(subs, repeat=2):
        for keep in (1, 2):
            assert reduce(join(a, b), S22, keep) == join(reduce(a, S22, keep), reduce(b, S22, keep))


@pytest.mark.parametrize("spec", [F2, F3, F4], ids=lambda s: s.label())
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_basis_independence(spec, data):
    k = data.draw(st.integers(1, 4))
    rows = data.draw(st.lists(st.lists(st.integers(0, spec.q - 1), min_size=4, max_size=4), min_size=k, max_size=k))
    m = MatrixF(spec, rows)
    p = data.draw(invertibles(spec, k))
    s1 = Subspace(spec, 4, m)
    # reduce the raw recombined rows directly, bypassing canonicalization
    from modalq.composite import _unfold

    raw = (p @ m).data
    for keep in (1, 2):
        direct = Subspace(spec, 2, MatrixF(spec, _unfold(raw, S22, keep)))
        assert direct == reduce(s1, S22, keep)


@pytest.mark.parametrize("spec", [F2, F3], ids=lambda s: s.label())
def test_product_vectors_reduce_to_factors(spec):
    vecs = [VectorF(spec, list(v)) for v in itertools.product(range(spec.q), repeat=2) if any(v)]
    for u, w in itertools.product(vecs, repeat=2):
        t = kron(u, w)
        assert reduce_pure(t, S22, 1) == Subspace(spec, 2, u.as_row())
        assert reduce_pure(t, S22, 2) == Subspace(spec, 2, w.as_row())
