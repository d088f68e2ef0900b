"""Composite systems: tensor products of subspaces and reduction to a factor.

Reduction is the modal analogue of the partial trace. For a pure state the
coefficient grid (one axis per factor) is unfolded so the kept factor is
the column axis; the reduced state is that matrix's row space. A mixed
state reduces to the join of the reductions of its basis vectors, which by
linearity is the row space of all unfolded grids stacked together.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import DomainError
from .linalg import MatrixF, VectorF
from .subspace import Subspace, tensor

__all__ = ["FactorShape", "tensor_subspace", "reduce_pure", "reduce"]


@dataclass(frozen=True)
class FactorShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DomainError(f"factor dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> "FactorShape":
        try:
            return cls(tuple(int(t) for t in text.lower().split("x")))
        except ValueError:
            raise DomainError(f"cannot parse shape {text!r}, expected e.g. 2x2") from None

    @classmethod
    def square(cls, d: int) -> "FactorShape":
        return cls((d, d))

    @property
    def total(self) -> int:
        return prod(self.dims)

    def __str__(self):
        return "x".join(map(str, self.dims))


def tensor_subspace(a: Subspace, b: Subspace) -> Subspace:
    return tensor(a, b)


def _unfold(rows: np.ndarray, shape: FactorShape, keep: int) -> np.ndarray:
    """Stack of (rest, d_keep) grids for each row vector, as one tall matrix."""
    if not 1 <= keep <= len(shape.dims):
        raise DomainError(f"keep must be a factor index in 1..{len(shape.dims)}, got {keep}")
    axis = keep - 1
    grids = rows.reshape((rows.shape[0],) + shape.dims)
    grids = np.moveaxis(grids, axis + 1, -1)
    return grids.reshape(-1, shape.dims[axis])


def reduce_pure(v: VectorF, shape: FactorShape, keep: int) -> Subspace:
    """Reduced state of factor ``keep`` (1-based) for the pure state ``v``."""
    if v.dim != shape.total:
        raise DomainError(f"vector of length {v.dim} does not match shape {shape}")
    if v.is_zero():
        raise DomainError("the zero vector is not a pure state")
    d = shape.dims[keep - 1] if 1 <= keep <= len(shape.dims) else None
    unfolded = _unfold(v.entries[None, :], shape, keep)
    return Subspace(v.spec, d, MatrixF(v.spec, unfolded))


def reduce(m: Subspace, shape: FactorShape, keep: int) -> Subspace:
    """Minimal subspace of factor ``keep`` containing the reductions of all of ``m``."""
    if m.ambient != shape.total:
        raise DomainError(f"ambient {m.ambient} does not match shape {shape}")
    unfolded = _unfold(m.basis.data, shape, keep)
    d = shape.dims[keep - 1]
    if m.is_null():
        return Subspace.null(m.spec, d)
    return Subspace(m.spec, d, MatrixF(m.spec, unfolded))
