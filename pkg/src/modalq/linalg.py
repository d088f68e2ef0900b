"""Dense exact linear algebra over a finite field.

Matrices hold int64 element indices (see :mod:`modalq.field`). Row
reduction and products go through :mod:`modalq.kernels`.

Tensor index convention, used everywhere: the composite index of
``(i, j)`` is ``i * dim2 + j`` (left factor major).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, FieldMismatchError
from .field import FieldElement, FieldSpec


def _encode(spec: FieldSpec, value) -> int:
    if isinstance(value, FieldElement):
        if value.spec != spec:
            raise FieldMismatchError("entry from another field")
        return value.index
    if isinstance(value, (int, np.integer)):
        if spec.k == 1:
            return int(value) % spec.p
        if not 0 <= value < spec.q:
            raise DomainError(f"element index {value} out of range for {spec.label()}")
        return int(value)
    return spec.element(value).index


def _as_array(spec: FieldSpec, data, ndim: int) -> np.ndarray:
    if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
        arr = np.array(data, dtype=np.int64)
        if spec.k == 1:
            arr %= spec.p
        elif arr.size and (arr.min() < 0 or arr.max() >= spec.q):
            raise DomainError(f"entries out of range for {spec.label()}")
    elif ndim == 1:
        arr = np.array([_encode(spec, x) for x in data], dtype=np.int64)
    else:
        rows = [[_encode(spec, x) for x in row] for row in data]
        if rows and len({len(r) for r in rows}) != 1:
            raise DomainError("ragged matrix rows")
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(rows[0]) if rows else 0)
    if arr.ndim != ndim:
        raise DomainError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class VectorF:
    spec: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_array(self.spec, self.entries, 1))
        if self.entries.shape[0] < 1:
            raise DomainError("vectors have dimension >= 1")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_zero(self) -> bool:
        return not self.entries.any()

    def __getitem__(self, i) -> FieldElement:
        return self.spec.from_index(int(self.entries[i]))

    def __eq__(self, other):
        return (
            isinstance(other, VectorF)
            and self.spec == other.spec
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.spec, self.entries.tobytes()))

    def __add__(self, other: "VectorF") -> "VectorF":
        _same_field(self.spec, other.spec)
        if self.dim != other.dim:
            raise DomainError("vector dimension mismatch")
        return VectorF(self.spec, kernels.v_add(self.entries, other.entries, self.spec.p, self.spec.k))

    def scale(self, c) -> "VectorF":
        p, k, exp, log = self.spec.kernel_args
        return VectorF(self.spec, kernels.v_mul(self.entries, _encode(self.spec, c), p, k, exp, log))

    def as_row(self) -> "MatrixF":
        return MatrixF(self.spec, self.entries[None, :])

    def tolist(self) -> list[int]:
        return [int(x) for x in self.entries]

    def __repr__(self):
        return f"VectorF({self.spec.label()}, {self.tolist()})"


@dataclass(frozen=True, eq=False)
class MatrixF:
    spec: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _as_array(self.spec, self.data, 2))

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows, cols: int | None = None) -> "MatrixF":
        rows = [r.entries if isinstance(r, VectorF) else r for r in rows]
        if not rows:
            if cols is None:
                raise DomainError("empty row list needs an explicit column count")
            return cls(spec, np.zeros((0, cols), dtype=np.int64))
        if isinstance(rows[0], np.ndarray):
            return cls(spec, np.vstack(rows))
        return cls(spec, rows)

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "MatrixF":
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "MatrixF":
        return cls(spec, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "MatrixF":
        return MatrixF(self.spec, self.data.T)

    def row(self, i: int) -> VectorF:
        return VectorF(self.spec, self.data[i])

    def row_vectors(self) -> list[VectorF]:
        return [self.row(i) for i in range(self.rows)]

    def entry(self, i: int, j: int) -> FieldElement:
        return self.spec.from_index(int(self.data[i, j]))

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other):
        return (
            isinstance(other, MatrixF)
            and self.spec == other.spec
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.spec, self.data.shape, self.data.tobytes()))

    def __matmul__(self, other):
        if isinstance(other, VectorF):
            return VectorF(self.spec, matmul(self, MatrixF(other.spec, other.entries[:, None])).data[:, 0])
        return matmul(self, other)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __repr__(self):
        return f"MatrixF({self.spec.label()}, {self.tolist()})"


def _same_field(a: FieldSpec, b: FieldSpec):
    if a != b:
        raise FieldMismatchError(f"{a.label()} vs {b.label()}")


def vstack(spec: FieldSpec, mats, cols: int) -> MatrixF:
    parts = [m.data for m in mats if m.rows]
    if not parts:
        return MatrixF.zeros(spec, 0, cols)
    return MatrixF(spec, np.vstack(parts))


def matmul(a: MatrixF, b: MatrixF) -> MatrixF:
    _same_field(a.spec, b.spec)
    if a.cols != b.rows:
        raise DomainError(f"cannot multiply {a.shape} by {b.shape}")
    return MatrixF(a.spec, kernels.matmul(a.data, b.data, *a.spec.kernel_args))


def rref(m: MatrixF) -> tuple[MatrixF, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows come last."""
    if m.rows == 0 or m.cols == 0:
        return m, []
    r, piv = kernels.rref(m.data, *m.spec.kernel_args)
    return MatrixF(m.spec, r), [int(c) for c in piv]


def rank(m: MatrixF) -> int:
    return len(rref(m)[1])


def right_kernel(m: MatrixF) -> MatrixF:
    """RREF basis (as rows) of ``{x : m x = 0}``."""
    spec = m.spec
    if m.rows == 0:
        return MatrixF.identity(spec, m.cols)
    r, piv = rref(m)
    free = [c for c in range(m.cols) if c not in set(piv)]
    out = np.zeros((len(free), m.cols), dtype=np.int64)
    if free:
        out[np.arange(len(free)), free] = 1
        if piv:
            out[:, piv] = kernels.v_neg(r.data[: len(piv)][:, free].T, spec.p, spec.k)
    basis = MatrixF(spec, out)
    return rref(basis)[0] if free else basis


def solve(m: MatrixF, b: VectorF) -> VectorF | None:
    """Some x with ``m x = b`` (free variables zero), or None if inconsistent."""
    _same_field(m.spec, b.spec)
    if b.dim != m.rows:
        raise DomainError(f"right-hand side has length {b.dim}, matrix has {m.rows} rows")
    aug = MatrixF(m.spec, np.hstack([m.data, b.entries[:, None]]))
    r, piv = rref(aug)
    if piv and piv[-1] == m.cols:
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r.data[i, -1]
    return VectorF(m.spec, x)


def inverse(m: MatrixF) -> MatrixF:
    if m.rows != m.cols:
        raise DomainError("only square matrices are invertible")
    n = m.rows
    aug = MatrixF(m.spec, np.hstack([m.data, np.eye(n, dtype=np.int64)]))
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise DomainError("matrix is singular")
    return MatrixF(m.spec, r.data[:, n:])


def kron(a, b):
    """Kronecker product of two matrices, or of two vectors."""
    if isinstance(a, VectorF) and isinstance(b, VectorF):
        return kron(a.as_row(), b.as_row()).row(0)
    _same_field(a.spec, b.spec)
    p, k, exp, log = a.spec.kernel_args
    prod = kernels.v_mul(a.data[:, None, :, None], b.data[None, :, None, :], p, k, exp, log)
    return MatrixF(a.spec, prod.reshape(a.rows * b.rows, a.cols * b.cols))
