"""Subspaces of F^n in canonical form, and the lattice they form.

A :class:`Subspace` stores an RREF basis with no zero rows, so equality of
subspaces is equality of arrays. The dual space is F^n as well, paired by
the dot product; the annihilator is therefore a right kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Iterator, NamedTuple

import numpy as np

from . import kernels
from .errors import BudgetExceededError, DomainError, FieldMismatchError
from .field import FieldSpec
from .linalg import MatrixF, VectorF, kron, matmul, rank, right_kernel, rref, vstack

DEFAULT_BUDGET = 2**20


@dataclass(frozen=True, eq=False)
class Subspace:
    spec: FieldSpec
    ambient: int
    basis: MatrixF

    def __post_init__(self):
        if self.ambient < 1:
            raise DomainError("ambient dimension must be >= 1")
        b = self.basis
        if not isinstance(b, MatrixF):
            b = MatrixF.from_rows(self.spec, list(b), cols=self.ambient)
        if b.spec != self.spec:
            raise FieldMismatchError("basis over another field")
        if b.cols != self.ambient:
            raise DomainError(f"basis has {b.cols} columns, ambient is {self.ambient}")
        r, piv = rref(b)
        object.__setattr__(self, "basis", MatrixF(self.spec, r.data[: len(piv)]))

    @classmethod
    def null(cls, spec: FieldSpec, ambient: int) -> "Subspace":
        return cls(spec, ambient, MatrixF.zeros(spec, 0, ambient))

    @classmethod
    def full(cls, spec: FieldSpec, ambient: int) -> "Subspace":
        return cls(spec, ambient, MatrixF.identity(spec, ambient))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_null(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient

    @property
    def key(self) -> bytes:
        return self.basis.data.tobytes()

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.spec == other.spec
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.spec, self.ambient, self.key))

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def __le__(self, other):
        return includes(other, self)

    def __ge__(self, other):
        return includes(self, other)

    def __contains__(self, v: VectorF) -> bool:
        return includes(self, span([v], self.ambient, self.spec))

    def vectors(self) -> list[VectorF]:
        return self.basis.row_vectors()

    def __str__(self):
        if self.is_null():
            return "⟨0⟩"
        rows = ("(" + ",".join(str(self.spec.from_index(int(x))) for x in r) + ")" for r in self.basis.data)
        return "⟨" + ", ".join(rows) + "⟩"

    def __repr__(self):
        return f"Subspace({self.spec.label()}, ambient={self.ambient}, {self.basis.tolist()})"


class DiamondTriple(NamedTuple):
    """Three subspaces with common pairwise join ``top`` and meet ``bottom``."""

    a: Subspace
    b: Subspace
    c: Subspace
    top: Subspace
    bottom: Subspace


def _check_pair(a: Subspace, b: Subspace):
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec.label()} vs {b.spec.label()}")
    if a.ambient != b.ambient:
        raise DomainError(f"ambient mismatch: {a.ambient} vs {b.ambient}")


def span(vectors, ambient: int, spec: FieldSpec) -> Subspace:
    """Canonical span of the given vectors; empty input gives the null subspace."""
    rows = []
    for v in vectors:
        if not isinstance(v, VectorF):
            v = VectorF(spec, v)
        if v.spec != spec:
            raise FieldMismatchError("vector over another field")
        if v.dim != ambient:
            raise DomainError(f"vector of length {v.dim} in ambient {ambient}")
        rows.append(v.entries)
    if not rows:
        return Subspace.null(spec, ambient)
    return Subspace(spec, ambient, MatrixF(spec, np.vstack(rows)))


def join(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    return Subspace(a.spec, a.ambient, vstack(a.spec, [a.basis, b.basis], a.ambient))


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection from the left kernel of the stacked bases: xA + yB = 0 gives xA in both."""
    _check_pair(a, b)
    if a.is_null() or b.is_null():
        return Subspace.null(a.spec, a.ambient)
    stacked = vstack(a.spec, [a.basis, b.basis], a.ambient)
    relations = right_kernel(stacked.T)
    if relations.rows == 0:
        return Subspace.null(a.spec, a.ambient)
    x = MatrixF(a.spec, relations.data[:, : a.dim])
    return Subspace(a.spec, a.ambient, matmul(x, a.basis))


def annihilator(a: Subspace) -> Subspace:
    """All functionals e with e . v = 0 for every v in ``a``."""
    if a.is_null():
        return Subspace.full(a.spec, a.ambient)
    return Subspace(a.spec, a.ambient, right_kernel(a.basis))


def includes(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is contained in ``a``."""
    _check_pair(a, b)
    if b.dim > a.dim:
        return False
    if b.is_null():
        return True
    return rank(vstack(a.spec, [a.basis, b.basis], a.ambient)) == a.dim


def image(a: Subspace, t: MatrixF) -> Subspace:
    """Image of ``a`` under the linear map v -> t v."""
    if t.spec != a.spec or t.cols != a.ambient:
        raise DomainError(f"map of shape {t.shape} cannot act on ambient {a.ambient}")
    if a.is_null():
        return Subspace.null(a.spec, t.rows)
    return Subspace(a.spec, t.rows, matmul(a.basis, t.T))


def tensor(a: Subspace, b: Subspace) -> Subspace:
    """Span of all products of basis vectors, in ambient ``a.ambient * b.ambient``."""
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec.label()} vs {b.spec.label()}")
    n = a.ambient * b.ambient
    if a.is_null() or b.is_null():
        return Subspace.null(a.spec, n)
    return Subspace(a.spec, n, kron(a.basis, b.basis))


# --- enumeration ---

def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, q: int, dim_filter: int | None = None) -> int:
    if dim_filter is not None:
        return gaussian_binomial(n, dim_filter, q)
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def _check_budget(what: str, n: int, q: int, budget: int, dim_filter=None):
    if q**n > budget:
        raise BudgetExceededError(what, q**n, budget)
    total = count_subspaces(n, q, dim_filter)
    if total > budget:
        raise BudgetExceededError(what, total, budget)


def iter_rref_bases(n: int, k: int, q: int) -> Iterator[np.ndarray]:
    """Every k x n RREF matrix of rank k with entries as indices 0..q-1.

    Order: pivot tuples lexicographically, then free entries in
    itertools.product order over (row, column) positions.
    """
    if k == 0:
        yield np.zeros((0, n), dtype=np.int64)
        return
    for pivots in itertools.combinations(range(n), k):
        pivset = set(pivots)
        free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n) if j not in pivset]
        base = np.zeros((k, n), dtype=np.int64)
        base[np.arange(k), pivots] = 1
        if not free:
            yield base.copy()
            continue
        fi = np.array([f[0] for f in free])
        fj = np.array([f[1] for f in free])
        for values in itertools.product(range(q), repeat=len(free)):
            m = base.copy()
            m[fi, fj] = values
            yield m


def enumerate_subspaces(
    ambient: int, spec: FieldSpec, dim_filter: int | None = None, budget: int = DEFAULT_BUDGET
) -> list[Subspace]:
    """All subspaces of F^ambient, by dimension then RREF shape."""
    _check_budget("enumerate_subspaces", ambient, spec.q, budget, dim_filter)
    dims = range(ambient + 1) if dim_filter is None else [dim_filter]
    out = []
    for k in dims:
        if not 0 <= k <= ambient:
            continue
        for m in iter_rref_bases(ambient, k, spec.q):
            s = Subspace.__new__(Subspace)
            object.__setattr__(s, "spec", spec)
            object.__setattr__(s, "ambient", ambient)
            object.__setattr__(s, "basis", MatrixF(spec, m))
            out.append(s)
    return out


def enumerate_vectors(a: Subspace, budget: int = DEFAULT_BUDGET) -> list[VectorF]:
    """All q^dim vectors of ``a``, zero first."""
    q = a.spec.q
    if q**a.dim > budget:
        raise BudgetExceededError("enumerate_vectors", q**a.dim, budget)
    if a.is_null():
        return [VectorF(a.spec, np.zeros(a.ambient, dtype=np.int64))]
    coeffs = np.array(list(itertools.product(range(q), repeat=a.dim)), dtype=np.int64)
    vecs = kernels.matmul(coeffs, a.basis.data, *a.spec.kernel_args)
    return [VectorF(a.spec, v) for v in vecs]


# --- diamonds ---

def is_diamond(a: Subspace, b: Subspace, c: Subspace) -> tuple[Subspace, Subspace] | None:
    """(top, bottom) if a, b, c are distinct with equal pairwise joins and meets."""
    _check_pair(a, b)
    _check_pair(b, c)
    if a == b or b == c or a == c:
        return None
    top = join(a, b)
    if join(b, c) != top or join(a, c) != top:
        return None
    bottom = meet(a, b)
    if meet(b, c) != bottom or meet(a, c) != bottom:
        return None
    return top, bottom


def find_diamonds(
    ambient: int,
    spec: FieldSpec,
    require_null_bottom: bool = False,
    dim_filter: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[DiamondTriple]:
    """Every unordered diamond triple, grouped by the common dimension.

    Members of a diamond always share a dimension, so only same-dimension
    triples are examined. Pairwise joins and meets are computed once.
    """
    _check_budget("find_diamonds", ambient, spec.q, budget, dim_filter)
    dims = range(1, ambient) if dim_filter is None else [dim_filter]
    out: list[DiamondTriple] = []
    for d in dims:
        if not 0 < d < ambient:
            continue
        subs = enumerate_subspaces(ambient, spec, d, budget)
        n = len(subs)
        interned: dict[bytes, Subspace] = {}

        def intern(s):
            return interned.setdefault(s.key, s)

        pair = {}
        for i in range(n):
            for j in range(i + 1, n):
                bottom = intern(meet(subs[i], subs[j]))
                if require_null_bottom and not bottom.is_null():
                    continue
                top = intern(join(subs[i], subs[j]))
                pair[i, j] = (top.key, bottom.key)
        for i in range(n):
            buckets: dict[tuple, list[int]] = {}
            for j in range(i + 1, n):
                if (i, j) in pair:
                    buckets.setdefault(pair[i, j], []).append(j)
            for key, js in buckets.items():
                for x, j in enumerate(js):
                    for k in js[x + 1 :]:
                        if pair.get((j, k)) == key:
                            out.append(
                                DiamondTriple(subs[i], subs[j], subs[k], interned[key[0]], interned[key[1]])
                            )
    return out
