"""Cloning and broadcasting in modal quantum theory.

A broadcast of a mixed state X (a subspace of F^n) is a subspace of
F^n (x) F^n whose reductions to both factors equal X. This module builds
the positive constructions (pairwise broadcasting, broadcasting through a
shared nonzero overlap) and the exhaustive verifier showing that three
states forming a diamond with null bottom cannot all be broadcast.

The verifier cannot enumerate physical processes. It enumerates every
triple of candidate outputs (M_A, M_B, M_C) and refutes the condition all
processes must meet: since C <= A v B and processes respect mixtures,
M_C <= M_A v M_B. Two independent routes are run on every triple:

* inclusion: rank([M_A; M_B; M_C]) > rank([M_A; M_B]);
* discrimination: the effect E_C = ann((A(x)A) v (B(x)B)) (and its cyclic
  siblings) p-distinguishes (M_A, M_B, M_C).

Ancilla or machine factors are not modelled in :func:`clone_feasibility`.
Adding one only adds constraints to the linear system restricted to the
system factors, so it cannot turn an infeasible instance feasible.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
import logging
from typing import Sequence

import numpy as np

from . import kernels
from .composite import FactorShape, reduce
from .errors import BudgetExceededError, DomainError, InvariantViolation
from .field import FieldSpec
from .linalg import MatrixF, VectorF, kron, rank, rref, solve, vstack
from .measurement import Effect, Measurement, is_p_distinguishing, is_possible, pairing
from .subspace import (
    DEFAULT_BUDGET,
    DiamondTriple,
    Subspace,
    annihilator,
    count_subspaces,
    enumerate_subspaces,
    includes,
    is_diamond,
    iter_rref_bases,
    join,
    meet,
    span,
    tensor,
)

log = logging.getLogger(__name__)

__all__ = [
    "DiamondTriple",
    "BroadcastCandidate",
    "BroadcastCertificate",
    "CloneResult",
    "CloneWitness",
    "clone_feasibility",
    "pairwise_broadcast",
    "overlap_broadcast",
    "broadcast_discriminator",
    "enumerate_broadcast_candidates",
    "enumerate_broadcast_candidates_unrestricted",
    "verify_no_broadcast",
    "slice_diamond",
]


@dataclass(frozen=True)
class BroadcastCandidate:
    state: Subspace
    source: Subspace

    @property
    def shape(self) -> FactorShape:
        return FactorShape.square(self.source.ambient)

    def is_valid(self) -> bool:
        return is_broadcast_of(self.state, self.source)


def is_broadcast_of(state: Subspace, source: Subspace) -> bool:
    n = source.ambient
    if state.ambient != n * n:
        return False
    shape = FactorShape.square(n)
    return reduce(state, shape, 1) == source and reduce(state, shape, 2) == source


def _checked(state: Subspace, source: Subspace) -> BroadcastCandidate:
    cand = BroadcastCandidate(state, source)
    if not cand.is_valid():
        raise InvariantViolation(f"constructed state {state} does not reduce to {source}")
    return cand


# --- cloning ---


@dataclass(frozen=True)
class CloneWitness:
    """``states[index]`` equals sum(coefficients[i] * states[basis[i]]).

    Linearity then forces its output to ``forced`` instead of ``desired``.
    """

    index: int
    basis: tuple[int, ...]
    coefficients: tuple[int, ...]
    forced: VectorF
    desired: VectorF


@dataclass(frozen=True)
class CloneResult:
    feasible: bool
    transform: MatrixF | None = None
    witness: CloneWitness | None = None


def clone_feasibility(states: Sequence[VectorF], blank: VectorF) -> CloneResult:
    """Is there a linear T on F^d (x) F^d with T(psi (x) blank) = psi (x) psi for all listed psi?

    The d^4 entries of T are the unknowns of one linear system.
    """
    if not states:
        raise DomainError("no states given")
    spec, d = blank.spec, blank.dim
    for s in states:
        if s.dim != d or s.spec != spec:
            raise DomainError("states and blank must share field and dimension")
        if s.is_zero():
            raise DomainError("the zero vector is not a state")
    if blank.is_zero():
        raise DomainError("the blank state must be nonzero")
    big = d * d
    inputs = np.array([kron(s, blank).entries for s in states])
    outputs = np.array([kron(s, s).entries for s in states])
    system = np.zeros((len(states) * big, big * big), dtype=np.int64)
    rhs = np.zeros(len(states) * big, dtype=np.int64)
    for si in range(len(states)):
        for i in range(big):
            system[si * big + i, i * big : (i + 1) * big] = inputs[si]
            rhs[si * big + i] = outputs[si, i]
    x = solve(MatrixF(spec, system), VectorF(spec, rhs))
    if x is not None:
        t = MatrixF(spec, x.entries.reshape(big, big))
        for s in states:
            if t @ kron(s, blank) != kron(s, s):
                raise InvariantViolation("clone map fails on an input")
        return CloneResult(True, transform=t)
    witness = _dependency_witness(states)
    if witness is None:
        raise InvariantViolation("infeasible clone system without a dependency witness")
    return CloneResult(False, witness=witness)


def _dependency_witness(states: Sequence[VectorF]) -> CloneWitness | None:
    spec = states[0].spec
    indep: list[int] = []
    for idx, s in enumerate(states):
        if indep:
            cols = MatrixF(spec, np.array([states[i].entries for i in indep]).T)
            alpha = solve(cols, s)
        else:
            alpha = None
        if alpha is None:
            indep.append(idx)
            continue
        forced = None
        for coef, i in zip(alpha.entries, indep):
            term = kron(states[i], states[i]).scale(int(coef))
            forced = term if forced is None else forced + term
        desired = kron(s, s)
        if forced != desired:
            return CloneWitness(idx, tuple(indep), tuple(int(c) for c in alpha.entries), forced, desired)
    return None


# --- positive constructions ---


def _extend(base: list[np.ndarray], target: Subspace) -> list[np.ndarray]:
    """Rows of target's basis that extend ``base`` to a basis of target, greedily."""
    spec, n = target.spec, target.ambient
    rows = list(base)
    added = []
    for v in target.basis.data:
        trial = rows + [v]
        if rank(MatrixF(spec, np.vstack(trial))) == len(trial):
            rows.append(v)
            added.append(v)
    return added


def _diagonal_state(vectors: list[np.ndarray], spec: FieldSpec, n: int) -> Subspace:
    return span([kron(VectorF(spec, v), VectorF(spec, v)) for v in vectors], n * n, spec)


def pairwise_broadcast(a: Subspace, b: Subspace) -> tuple[BroadcastCandidate, BroadcastCandidate]:
    """Measure in a basis adapted to (A ^ B, A, B) and prepare two copies of the outcome."""
    if a.spec != b.spec or a.ambient != b.ambient:
        raise DomainError("inputs must share field and ambient dimension")
    spec, n = a.spec, a.ambient
    r = meet(a, b)
    r_rows = list(r.basis.data)
    a_rows = _extend(r_rows, a)
    b_rows = _extend(r_rows, b)
    out_a = _diagonal_state(r_rows + a_rows, spec, n)
    out_b = _diagonal_state(r_rows + b_rows, spec, n)
    return _checked(out_a, a), _checked(out_b, b)


def overlap_broadcast(x: Subspace, r: Subspace) -> BroadcastCandidate:
    """(X (x) R) v (R (x) X): hand the input to a random side, R to the other."""
    if r.is_null():
        raise DomainError("the overlap R must be nonzero")
    if not includes(x, r):
        raise DomainError("the overlap R must lie inside X")
    state = join(tensor(x, r), tensor(r, x))
    return _checked(state, x)


def broadcast_discriminator(d: DiamondTriple) -> Measurement:
    """Effects E_X = ann((Y (x) Y) v (Z (x) Z)) for each member X, plus a full error effect."""
    a, b, c = d.a, d.b, d.c
    aa, bb, cc = tensor(a, a), tensor(b, b), tensor(c, c)
    n2 = aa.ambient
    return Measurement(
        [
            Effect(annihilator(join(bb, cc)), "A"),
            Effect(annihilator(join(aa, cc)), "B"),
            Effect(annihilator(join(aa, bb)), "C"),
            Effect(Subspace.full(a.spec, n2), "0"),
        ]
    )


# --- candidate enumeration ---


def _candidate_budget(x: Subspace, budget: int):
    dd = x.dim * x.dim
    q = x.spec.q
    if q**dd > budget:
        raise BudgetExceededError("enumerate_broadcast_candidates", q**dd, budget)
    total = count_subspaces(dd, q)
    if total > budget:
        raise BudgetExceededError("enumerate_broadcast_candidates", total, budget)


def enumerate_broadcast_candidates(x: Subspace, budget: int = DEFAULT_BUDGET) -> list[BroadcastCandidate]:
    """Every subspace of X (x) X reducing to X on both factors.

    Subspaces are enumerated in coordinates of the canonical basis of
    X (x) X. Any such subspace already reduces into X, so equality is a
    rank test on the unfolded coefficient grids.
    """
    if x.is_null():
        return []
    _candidate_budget(x, budget)
    return list(_candidates(x))


@lru_cache(maxsize=4096)
def _candidates(x: Subspace) -> tuple[BroadcastCandidate, ...]:
    spec, n = x.spec, x.ambient
    xx = tensor(x, x)
    dd = xx.dim
    args = spec.kernel_args
    out = []
    for k in range(1, dd + 1):
        for coords in iter_rref_bases(dd, k, spec.q):
            vecs = kernels.matmul(coords, xx.basis.data, *args)
            grids = vecs.reshape(k, n, n)
            left = grids.transpose(0, 2, 1).reshape(-1, n)
            right = grids.reshape(-1, n)
            if rank(MatrixF(spec, left)) != x.dim or rank(MatrixF(spec, right)) != x.dim:
                continue
            out.append(BroadcastCandidate(Subspace(spec, n * n, MatrixF(spec, vecs)), x))
    return tuple(out)


def enumerate_broadcast_candidates_unrestricted(
    x: Subspace, budget: int = DEFAULT_BUDGET
) -> list[BroadcastCandidate]:
    """Oracle: filter every subspace of F^(n*n), without assuming containment in X (x) X."""
    n = x.ambient
    return [
        BroadcastCandidate(s, x)
        for s in enumerate_subspaces(n * n, x.spec, budget=budget)
        if not s.is_null() and is_broadcast_of(s, x)
    ]


# --- the no-broadcasting verifier ---


@dataclass
class BroadcastCertificate:
    """Outcome of :func:`verify_no_broadcast`.

    ``witnesses`` holds, for each candidate M_C, a functional e in E_C and a
    vector v in M_C with <e|v> != 0. Together with E_C annihilating
    (A(x)A) v (B(x)B) this refutes M_C <= M_A v M_B for every M_A, M_B.
    """

    verdict: str
    diamond: DiamondTriple
    candidate_counts: dict[str, int]
    candidates_checked: int
    witnesses: list[dict]
    checks: dict[str, bool]
    survivors: list[tuple[int, int, int]] = field(default_factory=list)
    discriminator: Measurement | None = field(default=None, repr=False)

    @property
    def impossible(self) -> bool:
        return self.verdict == "impossible"

    def recheck(self) -> bool:
        """Re-verify every witness with subspace inclusion and pairing alone."""
        d = self.diamond
        spec, n = d.a.spec, d.a.ambient
        e_c = annihilator(join(tensor(d.a, d.a), tensor(d.b, d.b)))
        if is_possible(e_c, tensor(d.a, d.a)) or is_possible(e_c, tensor(d.b, d.b)):
            return False
        cc = tensor(d.c, d.c)
        for w in self.witnesses:
            m_c = Subspace(spec, n * n, MatrixF(spec, w["candidate"]))
            e = span([w["functional"]], n * n, spec)
            v = VectorF(spec, w["vector"])
            if not includes(e_c, e) or v not in m_c or not includes(cc, m_c):
                return False
            if not is_broadcast_of(m_c, d.c):
                return False
            if not pairing(e, span([v], n * n, spec)).any():
                return False
        return self.verdict == "impossible" and len(self.witnesses) == self.candidate_counts["C"]


def _stack(cands: list[BroadcastCandidate], rows: int, cols: int) -> np.ndarray:
    out = np.zeros((len(cands), rows, cols), dtype=np.int64)
    for i, c in enumerate(cands):
        out[i, : c.state.dim] = c.state.basis.data
    return out


def _cross_terms_present(d: DiamondTriple, cands_c: list[BroadcastCandidate]) -> bool:
    """Every nonzero vector of every M_C has a nonzero A(x)B component.

    Coordinates are taken in the basis {a_i (x) a_j, a_i (x) b_j, ...} of
    S(x)S built from the bases of A and B; the A(x)B block must be injective
    on each M_C.
    """
    a, b = d.a, d.b
    spec, n = a.spec, a.ambient
    p_mat = vstack(spec, [a.basis, b.basis], n)
    kk = kron(p_mat, p_mat)  # rows: basis of S (x) S
    m = p_mat.rows
    da = a.dim
    ab_cols = [i * m + j for i in range(da) for j in range(da, m)]
    for cand in cands_c:
        v = cand.state.basis
        aug = MatrixF(spec, np.hstack([kk.data.T, v.data.T]))
        r, piv = rref(aug)
        if piv != list(range(kk.rows)):
            return False  # M_C is not inside S (x) S
        coords = r.data[: kk.rows, kk.rows :].T  # one row per basis vector of M_C
        if rank(MatrixF(spec, coords[:, ab_cols])) != v.rows:
            return False
    return True


def verify_no_broadcast(
    d: DiamondTriple, workers: int = 1, budget: int = DEFAULT_BUDGET
) -> BroadcastCertificate:
    """Refute every candidate output triple for a null-bottom diamond."""
    if not d.bottom.is_null():
        raise DomainError("diamond has a nonzero bottom; it can be broadcast (see overlap_broadcast)")
    found = is_diamond(d.a, d.b, d.c)
    if found is None or found != (d.top, d.bottom):
        raise DomainError("the triple is not a diamond with the stated top and bottom")
    spec, n = d.a.spec, d.a.ambient
    cands = {lab: enumerate_broadcast_candidates(x, budget) for lab, x in zip("ABC", (d.a, d.b, d.c))}
    ca, cb, cc = cands["A"], cands["B"], cands["C"]
    disc = broadcast_discriminator(d)

    # discrimination route, per candidate then combined per triple
    def row_ok(label, cand):
        return all(is_possible(disc[lab], cand.state) == (lab == label) for lab in "ABC")

    ok = {lab: np.array([row_ok(lab, c) for c in cands[lab]], dtype=bool) for lab in "ABC"}

    # inclusion route: one kernel call per chunk of M_A candidates
    nn = n * n
    sa = _stack(ca, max(c.state.dim for c in ca), nn)
    sb = _stack(cb, max(c.state.dim for c in cb), nn)
    sc = _stack(cc, max(c.state.dim for c in cc), nn)
    args = spec.kernel_args

    def sweep(chunk: np.ndarray) -> np.ndarray:
        return kernels.stacked_inclusion(np.ascontiguousarray(chunk), sb, sc, *args)

    chunks = np.array_split(sa, max(1, min(workers, len(ca))))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            contained = np.concatenate(list(pool.map(sweep, chunks)))
    else:
        contained = np.concatenate([sweep(ch) for ch in chunks])
    refuted = ~contained
    discriminated = ok["A"][:, None, None] & ok["B"][None, :, None] & ok["C"][None, None, :]

    survivors = [tuple(int(t) for t in idx) for idx in np.argwhere(~refuted)]
    routes_agree = bool(np.array_equal(refuted, discriminated))
    cross_terms = _cross_terms_present(d, cc)

    e_c = disc["C"].dual
    witnesses = []
    for cand in cc:
        pm = pairing(e_c, cand.state)
        hits = np.argwhere(pm != 0)
        if not hits.size:
            continue
        i, j = hits[0]
        witnesses.append(
            {
                "candidate": cand.state.basis.tolist(),
                "functional": e_c.basis.data[i].tolist(),
                "vector": cand.state.basis.data[j].tolist(),
                "pairing": int(pm[i, j]),
            }
        )
    checks = {
        "inclusion_route": not survivors,
        "discrimination_route": bool(discriminated.all()),
        "routes_agree": routes_agree,
        "cross_terms": cross_terms,
        "discriminator_silent_on_A_B": bool(ok["A"].all() and ok["B"].all()),
        "witness_per_candidate_C": len(witnesses) == len(cc),
    }
    verdict = "impossible" if all(checks.values()) else "possible"
    if verdict == "possible":
        log.error("no-broadcast refutation failed: %s", checks)
    return BroadcastCertificate(
        verdict=verdict,
        diamond=d,
        candidate_counts={"A": len(ca), "B": len(cb), "C": len(cc)},
        candidates_checked=int(refuted.size),
        witnesses=witnesses,
        checks=checks,
        survivors=survivors,
        discriminator=disc,
    )


def slice_diamond(d: DiamondTriple) -> DiamondTriple:
    """Null-bottom diamond (A_e, B_e, C_e) from a diamond with nonzero bottom R.

    R's basis is extended to C by vectors c_k; each is split as
    c_k = a_k + b_k with a_k in A and b_k in B, and A_e = span{a_k} etc.
    """
    if d.bottom.is_null():
        raise DomainError("the diamond already has a null bottom")
    spec, n = d.a.spec, d.a.ambient
    c_rows = _extend(list(d.bottom.basis.data), d.c)
    stacked = vstack(spec, [d.a.basis, d.b.basis], n)
    a_parts, b_parts = [], []
    for c in c_rows:
        z = solve(stacked.T, VectorF(spec, c))
        if z is None:
            raise InvariantViolation("C is not inside A v B")
        za = MatrixF(spec, z.entries[None, : d.a.dim])
        zb = MatrixF(spec, z.entries[None, d.a.dim :])
        a_parts.append((za @ d.a.basis).data[0])
        b_parts.append((zb @ d.b.basis).data[0])
    a_e = span(a_parts, n, spec)
    b_e = span(b_parts, n, spec)
    c_e = span(c_rows, n, spec)
    found = is_diamond(a_e, b_e, c_e)
    if found is None or not found[1].is_null():
        raise InvariantViolation("sliced triple is not a null-bottom diamond")
    return DiamondTriple(a_e, b_e, c_e, found[0], found[1])


def p_distinguishes_outputs(d: DiamondTriple, outputs: Sequence[Subspace]) -> bool:
    """Does the discriminator of ``d`` p-distinguish the three output states?"""
    return is_p_distinguishing(broadcast_discriminator(d), list(outputs), ["A", "B", "C"])
