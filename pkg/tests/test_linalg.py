import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modalq.errors import DomainError
from modalq.linalg import MatrixF, VectorF, inverse, kron, rank, right_kernel, rref, solve

from conftest import F2, F3, F4, all_vectors, invertibles, matrices


def M(spec, rows, cols=None):
    return MatrixF.from_rows(spec, rows, cols=cols)


class TestExamples:
    def test_rref(self):
        r, piv = rref(M(F2, [[1, 1], [0, 1]]))
        assert r.tolist() == [[1, 0], [0, 1]] and piv == [0, 1]
        r, piv = rref(M(F3, [[2, 1]]))
        assert r.tolist() == [[1, 2]] and piv == [0]
        r, piv = rref(MatrixF.zeros(F3, 2, 3))
        assert r.is_zero() and piv == []

    def test_rank(self):
        assert rank(MatrixF.identity(F2, 2)) == 2
        assert rank(M(F2, [[1, 1], [1, 1]])) == 1
        assert rank(MatrixF.zeros(F2, 3, 3)) == 0

    def test_right_kernel(self):
        k = right_kernel(M(F2, [[1, 0, 0, 0], [0, 0, 0, 1]]))
        assert k.tolist() == [[0, 1, 0, 0], [0, 0, 1, 0]]
        assert right_kernel(M(F3, [[1, 2], [0, 1]])).rows == 0
        assert right_kernel(MatrixF.zeros(F2, 1, 3)).tolist() == np.eye(3, dtype=int).tolist()

    def test_solve(self):
        assert solve(MatrixF.identity(F2, 2), VectorF(F2, [1, 0])).tolist() == [1, 0]
        assert solve(M(F2, [[1, 1]]), VectorF(F2, [1])).tolist() == [1, 0]
        assert solve(M(F2, [[0, 0]]), VectorF(F2, [1])) is None
        with pytest.raises(DomainError):
            solve(MatrixF.identity(F2, 2), VectorF(F2, [1, 0, 0]))

    def test_kron(self):
        assert kron(VectorF(F2, [1, 0]), VectorF(F2, [0, 1])).tolist() == [0, 1, 0, 0]
        assert kron(MatrixF.identity(F2, 2), MatrixF.identity(F2, 2)) == MatrixF.identity(F2, 4)
        assert kron(VectorF(F3, [1, 2]), VectorF(F3, [1, 1])).tolist() == [1, 1, 2, 2]

    def test_inverse(self):
        m = M(F3, [[1, 2], [0, 2]])
        assert inverse(m) @ m == MatrixF.identity(F3, 2)
        with pytest.raises(DomainError):
            inverse(M(F2, [[1, 1], [1, 1]]))

    def test_extension_entries(self):
        # x * (x+1) = 1 in GF(4); indices x = 2, x+1 = 3
        m = M(F4, [[[0, 1], [1, 1]]])
        assert m.tolist() == [[2, 3]]
        r, _ = rref(m)
        assert r.tolist() == [[1, 2]]  # scaled by x^-1 = x+1: (1, (x+1)^2 = x)


@pytest.mark.parametrize("spec", [F2, F3, F4], ids=lambda s: s.label())
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_rref_basis_independent(spec, data):
    m = data.draw(matrices(spec))
    p = data.draw(invertibles(spec, m.rows)) if m.rows else MatrixF.zeros(spec, 0, 0)
    r1, piv1 = rref(m)
    r2, piv2 = rref(p @ m) if m.rows else rref(m)
    assert r1 == r2 and piv1 == piv2
    assert rref(r1)[0] == r1


@pytest.mark.parametrize("spec", [F2, F3, F4], ids=lambda s: s.label())
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_rank_nullity_and_kernel(spec, data):
    m = data.draw(matrices(spec))
    k = right_kernel(m)
    assert rank(m) + k.rows == m.cols
    if k.rows and m.rows:
        assert (m @ k.T).is_zero()
    assert rref(k)[0] == k


@pytest.mark.parametrize("spec", [F2, F3], ids=lambda s: s.label())
def test_rref_structure_exhaustive(spec):
    for entries in itertools.product(range(spec.q), repeat=4):
        m = M(spec, [entries[:2], entries[2:]])
        r, piv = rref(m)
        for i, c in enumerate(piv):
            col = r.data[:, c]
            assert col[i] == 1 and col.sum() == 1
        assert not r.data[len(piv):].any()
        # rank against enumeration of the row space
        space = {tuple((a * m.data[0] + b * m.data[1]) % spec.p) for a in range(spec.q) for b in range(spec.q)}
        assert spec.q ** len(piv) == len(space)


@pytest.mark.parametrize("spec", [F2, F3, F4], ids=lambda s: s.label())
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_solve_is_exact(spec, data):
    m = data.draw(matrices(spec, max_rows=4, max_cols=4).filter(lambda a: a.rows > 0))
    b = VectorF(spec, data.draw(st.lists(st.integers(0, spec.q - 1), min_size=m.rows, max_size=m.rows)))
    x = solve(m, b)
    if x is None:
        # inconsistent: b lies outside the column space
        assert rank(MatrixF(spec, np.hstack([m.data, b.entries[:, None]]))) > rank(m)
    else:
        assert m @ x == b


def test_solve_none_only_when_inconsistent_exhaustive():
    m = M(F2, [[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    col_space = {tuple(m.data @ np.array(x) % 2) for x in itertools.product(range(2), repeat=3)}
    for b in all_vectors(F2, 3):
        assert (solve(m, VectorF(F2, b)) is not None) == (tuple(b) in col_space)


@pytest.mark.parametrize("spec", [F2, F3], ids=lambda s: s.label())
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_kron_rank_multiplies(spec, data):
    a = data.draw(matrices(spec, max_rows=3, max_cols=3))
    b = data.draw(matrices(spec, max_rows=3, max_cols=3))
    k = kron(a, b)
    assert k.shape == (a.rows * b.rows, a.cols * b.cols)
    assert rank(k) == rank(a) * rank(b)
