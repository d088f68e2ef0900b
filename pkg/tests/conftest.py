import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from modalq.field import FieldSpec
from modalq.linalg import MatrixF, VectorF
from modalq.subspace import Subspace

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec.builtin(4)

SMALL_FIELDS = [F2, F3, F4, FieldSpec(5), FieldSpec(7), FieldSpec.builtin(8), FieldSpec.builtin(9)]


def vec(spec, *xs):
    return VectorF(spec, list(xs))


def sub(spec, *rows, ambient=None):
    n = ambient if ambient is not None else len(rows[0])
    return Subspace(spec, n, MatrixF.from_rows(spec, [list(r) for r in rows], cols=n))


def all_vectors(spec, n):
    """Brute-force list of every vector of F^n as index arrays."""
    return [np.array(v, dtype=np.int64) for v in itertools.product(range(spec.q), repeat=n)]


@st.composite
def matrices(draw, spec, max_rows=4, max_cols=5, rows=None, cols=None):
    r = rows if rows is not None else draw(st.integers(0, max_rows))
    c = cols if cols is not None else draw(st.integers(1, max_cols))
    data = draw(st.lists(st.lists(st.integers(0, spec.q - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return MatrixF(spec, np.array(data, dtype=np.int64).reshape(r, c))


@st.composite
def invertibles(draw, spec, n):
    """P @ L @ U with unit-lower L and upper U with nonzero diagonal."""
    if n == 0:
        return MatrixF.zeros(spec, 0, 0)
    elems = st.integers(0, spec.q - 1)
    lower = np.eye(n, dtype=np.int64)
    upper = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        upper[i, i] = draw(st.integers(1, spec.q - 1))
        for j in range(n):
            if j < i:
                lower[i, j] = draw(elems)
            elif j > i:
                upper[i, j] = draw(elems)
    perm = draw(st.permutations(range(n)))
    p = np.eye(n, dtype=np.int64)[list(perm)]
    return MatrixF(spec, p) @ MatrixF(spec, lower) @ MatrixF(spec, upper)


@pytest.fixture(params=[F2, F3, F4], ids=lambda s: s.label())
def small_field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
