"""Generalized measurements: effect subspaces of the dual space.

An outcome with effect E is possible on a state M iff some functional in E
pairs nonzero with some vector in M. A measurement is complete when its
effects join to the whole dual space.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
import logging
from typing import Callable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import DomainError
from .linalg import MatrixF, inverse
from .subspace import (
    DEFAULT_BUDGET,
    Subspace,
    annihilator,
    enumerate_subspaces,
    image,
    includes,
    is_diamond,
    join,
    meet,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Effect:
    dual: Subspace
    label: str


class Measurement:
    """A complete family of labelled effects.

    Effects may overlap; only their join is constrained. Null effects are
    accepted but reported by :meth:`validation_flags`.
    """

    def __init__(self, effects: Sequence[Effect]):
        effects = tuple(effects)
        if not effects:
            raise DomainError("a measurement needs at least one effect")
        labels = [e.label for e in effects]
        if len(set(labels)) != len(labels):
            raise DomainError(f"duplicate effect labels in {labels}")
        first = effects[0].dual
        for e in effects[1:]:
            if e.dual.spec != first.spec or e.dual.ambient != first.ambient:
                raise DomainError("effects live in different dual spaces")
        total = effects[0].dual
        for e in effects[1:]:
            total = join(total, e.dual)
        if not total.is_full():
            raise DomainError(
                f"effects join to a {total.dim}-dimensional subspace of the "
                f"{total.ambient}-dimensional dual; measurement is incomplete"
            )
        self.effects = effects
        self._by_label = {e.label: e for e in effects}
        for flag in self.validation_flags():
            log.warning(flag)

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.effects]

    @property
    def ambient(self) -> int:
        return self.effects[0].dual.ambient

    @property
    def spec(self):
        return self.effects[0].dual.spec

    def __getitem__(self, label: str) -> Effect:
        try:
            return self._by_label[label]
        except KeyError:
            raise DomainError(f"unknown effect label {label!r}") from None

    def __iter__(self):
        return iter(self.effects)

    def __len__(self):
        return len(self.effects)

    def validation_flags(self) -> list[str]:
        return [f"effect {e.label!r} is the null subspace" for e in self.effects if e.dual.is_null()]

    def possible_outcomes(self, m: Subspace) -> list[str]:
        return [e.label for e in self.effects if is_possible(e, m)]

    def __repr__(self):
        return "Measurement(" + ", ".join(f"{e.label}: {e.dual}" for e in self.effects) + ")"


def simple_measurement(basis: MatrixF, labels: Sequence[str] | None = None) -> Measurement:
    """One rank-1 effect per dual-basis functional of the rows of ``basis``."""
    if basis.rows != basis.cols:
        raise DomainError("a measurement basis must be square")
    dual = inverse(basis.T)
    n = basis.rows
    labels = [str(i) for i in range(n)] if labels is None else list(labels)
    return Measurement(
        Effect(Subspace(basis.spec, n, MatrixF(basis.spec, dual.data[i : i + 1])), labels[i]) for i in range(n)
    )


def pairing(e: Subspace, m: Subspace) -> np.ndarray:
    """Matrix of all basis pairings <e_i|psi_j>."""
    if e.spec != m.spec or e.ambient != m.ambient:
        raise DomainError(f"effect ambient {e.ambient} vs state ambient {m.ambient}")
    if e.is_null() or m.is_null():
        return np.zeros((e.dim, m.dim), dtype=np.int64)
    return kernels.matmul(e.basis.data, m.basis.data.T.copy(), *e.spec.kernel_args)


def is_possible(e, m: Subspace) -> bool:
    """E(M) != 0: some functional of the effect pairs nonzero with some state vector."""
    dual = e.dual if isinstance(e, Effect) else e
    return bool(pairing(dual, m).any())


def is_p_distinguishing(
    meas: Measurement,
    states: Sequence[Subspace],
    assignment: Sequence[str] | Mapping[int, str],
) -> bool:
    """Label k is possible on state k, and never possible on any other listed state."""
    if isinstance(assignment, Mapping):
        labels = [assignment[i] for i in range(len(states))]
    else:
        labels = list(assignment)
    if len(labels) != len(states):
        raise DomainError("one label per state is required")
    if len(set(labels)) != len(labels):
        raise DomainError("states must be assigned distinct labels")
    effects = [meas[lab] for lab in labels]
    for j, e in enumerate(effects):
        for k, m in enumerate(states):
            if is_possible(e, m) != (j == k):
                return False
    return True


@dataclass(frozen=True)
class NonDistinguishabilityRecord:
    """Any effect silent on two members of a diamond is silent on the third.

    ``silent[i]`` is the meet of the annihilators of the two members other
    than member ``i``; ``contained[i]`` records silent[i] <= ann(member i).
    """

    members: tuple[Subspace, Subspace, Subspace]
    annihilators: tuple[Subspace, Subspace, Subspace]
    silent: tuple[Subspace, Subspace, Subspace]
    contained: tuple[bool, bool, bool]

    @property
    def holds(self) -> bool:
        return all(self.contained)

    def recheck(self) -> bool:
        for i in range(3):
            j, k = [x for x in range(3) if x != i]
            if annihilator(self.members[i]) != self.annihilators[i]:
                return False
            if meet(self.annihilators[j], self.annihilators[k]) != self.silent[i]:
                return False
            if not includes(self.annihilators[i], self.silent[i]):
                return False
        return True


def diamond_not_p_distinguishable(a: Subspace, b: Subspace, c: Subspace) -> NonDistinguishabilityRecord:
    if is_diamond(a, b, c) is None:
        raise DomainError("the three subspaces do not form a diamond")
    members = (a, b, c)
    anns = tuple(annihilator(x) for x in members)
    silent, contained = [], []
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        s = meet(anns[j], anns[k])
        silent.append(s)
        contained.append(includes(anns[i], s))
    return NonDistinguishabilityRecord(members, anns, tuple(silent), tuple(contained))


def find_p_distinguishing_measurement(
    states: Sequence[Subspace], max_effects: int = 4, budget: int = DEFAULT_BUDGET
) -> tuple[Measurement, list[str]] | None:
    """Brute force over every complete measurement with at most ``max_effects`` effects.

    Effects range over all dual subspaces; every injective assignment of
    states to effects is tried, leftover effects acting as null outcomes.
    Returns a witness measurement and its labels for the states, or None.
    """
    if not states:
        raise DomainError("no states given")
    spec, n = states[0].spec, states[0].ambient
    subs = enumerate_subspaces(n, spec, budget=budget)
    poss = np.array([[is_possible(s, m) for m in states] for s in subs], dtype=bool)
    full_key = Subspace.full(spec, n).key
    join_key = {}
    ns = len(states)
    want = np.eye(ns, dtype=bool)
    for m in range(ns, max_effects + 1):
        for combo in itertools.product(range(len(subs)), repeat=m):
            for slots in itertools.permutations(range(m), ns):
                chosen = [combo[s] for s in slots]
                if not np.array_equal(poss[chosen], want):
                    continue
                ck = tuple(sorted(set(combo)))
                if ck not in join_key:
                    total = subs[ck[0]]
                    for i in ck[1:]:
                        total = join(total, subs[i])
                    join_key[ck] = total.key == full_key and total.is_full()
                if not join_key[ck]:
                    break
                labels = [str(i) for i in range(m)]
                meas = Measurement(Effect(subs[i], labels[x]) for x, i in enumerate(combo))
                return meas, [labels[s] for s in slots]
    return None


def induced_channel(t: MatrixF) -> Callable[[Subspace], Subspace]:
    """Subspace map M -> t(M) induced by a linear map on vectors."""

    def channel(m: Subspace) -> Subspace:
        return image(m, t)

    return channel
