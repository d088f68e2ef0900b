"""Vectorized numpy kernels with the same contracts as ``_numba``.

Elimination is batched: one pivot column at a time across every matrix in
a (batch, rows, cols) stack.
"""

import numpy as np


def v_add(a, b, p, k):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if p == 2:
        return a ^ b
    if k == 1:
        return (a + b) % p
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    pw = 1
    for _ in range(k):
        out += ((a // pw % p + b // pw % p) % p) * pw
        pw *= p
    return out


def v_neg(a, p, k):
    a = np.asarray(a, dtype=np.int64)
    if p == 2:
        return a.copy()
    if k == 1:
        return (-a) % p
    out = np.zeros_like(a)
    pw = 1
    for _ in range(k):
        out += ((-(a // pw % p)) % p) * pw
        pw *= p
    return out


def v_mul(a, b, p, k, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if k == 1:
        return a & b if p == 2 else (a * b) % p
    n = exp.shape[0]
    a, b = np.broadcast_arrays(a, b)
    out = exp[(log[a] + log[b]) % n]
    out[(a == 0) | (b == 0)] = 0
    return out


def v_inv(a, p, k, exp, log):
    """Elementwise inverse; zero maps to zero."""
    a = np.asarray(a, dtype=np.int64)
    if k == 1:
        # Fermat: a^(p-2); zero stays zero
        out = np.ones_like(a)
        base = a % p
        e = p - 2
        while e:
            if e & 1:
                out = out * base % p
            base = base * base % p
            e >>= 1
        out[a == 0] = 0
        return out
    n = exp.shape[0]
    out = exp[(n - log[a]) % n]
    out[a == 0] = 0
    return out


def _eliminate(t, full, p, k, exp, log):
    """Batched in-place row reduction. Returns (rank, pivot table)."""
    nb, rows, cols = t.shape
    rank = np.zeros(nb, dtype=np.int64)
    pivots = np.full((nb, min(rows, cols)), -1, dtype=np.int64)
    row_ids = np.arange(rows)
    for c in range(cols):
        live = rank < rows
        if not live.any():
            break
        cand = (t[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1) & live
        if not has.any():
            continue
        bi = np.nonzero(has)[0]
        r = rank[bi]
        piv = np.argmax(cand[bi], axis=1)
        top = t[bi, r].copy()
        t[bi, r] = t[bi, piv]
        t[bi, piv] = top
        s = v_inv(t[bi, r, c], p, k, exp, log)
        t[bi, r] = v_mul(t[bi, r], s[:, None], p, k, exp, log)
        pivot_rows = t[bi, r]
        f = t[bi, :, c].copy()
        f[np.arange(bi.size), r] = 0
        if not full:
            f[row_ids[None, :] < r[:, None]] = 0
        delta = v_mul(v_neg(f, p, k)[:, :, None], pivot_rows[:, None, :], p, k, exp, log)
        t[bi] = v_add(t[bi], delta, p, k)
        pivots[bi, r] = c
        rank[bi] += 1
    return rank, pivots


def rref(m, p, k, exp, log):
    t = np.array(m, dtype=np.int64)[None].copy()
    rank, pivots = _eliminate(t, True, p, k, exp, log)
    return t[0], pivots[0, : rank[0]].copy()


def batch_rank(t, p, k, exp, log):
    t = np.array(t, dtype=np.int64, copy=True)
    if t.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    rank, _ = _eliminate(t, False, p, k, exp, log)
    return rank


def matmul(a, b, p, k, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if k == 1 and a.shape[1] * (p - 1) ** 2 < 2**62:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for t in range(a.shape[1]):
        out = v_add(out, v_mul(a[:, t, None], b[None, t, :], p, k, exp, log), p, k)
    return out


def stacked_inclusion(sa, sb, sc, p, k, exp, log):
    """out[i, j, l]: rowspace(sc[l]) <= rowspace(sa[i]) + rowspace(sb[j])."""
    sa = np.asarray(sa, dtype=np.int64)
    sb = np.asarray(sb, dtype=np.int64)
    sc = np.asarray(sc, dtype=np.int64)
    na, ra, c = sa.shape
    nb, rb, _ = sb.shape
    nc, rc, _ = sc.shape
    out = np.zeros((na, nb, nc), dtype=bool)
    for i in range(na):
        base = np.concatenate([np.broadcast_to(sa[i], (nb, ra, c)), sb], axis=1).copy()
        rank, pivots = _eliminate(base, True, p, k, exp, log)
        # residual of every sc[l] after clearing the pivot columns of base[j]
        res = np.broadcast_to(sc[None], (nb, nc, rc, c)).copy()
        for t in range(pivots.shape[1]):
            valid = pivots[:, t] >= 0
            if not valid.any():
                break
            pc = np.where(valid, pivots[:, t], 0)
            f = np.take_along_axis(res, pc[:, None, None, None], axis=3)[..., 0]
            f = np.where(valid[:, None, None], f, 0)
            delta = v_mul(v_neg(f, p, k)[..., None], base[:, None, None, t, :], p, k, exp, log)
            res = v_add(res, delta, p, k)
        out[i] = ~res.reshape(nb, nc, -1).any(axis=2)
    return out
