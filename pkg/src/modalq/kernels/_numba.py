"""Compiled kernels. Elements are int64 indices; see ``modalq.field``.

Every kernel takes the field as ``(p, k, exp, log)`` where ``exp``/``log``
are the antilog/log tables of an extension field (empty for k == 1).
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def f_add(a, b, p, k):
    if k == 1:
        s = a + b
        return s - p if s >= p else s
    if p == 2:
        return a ^ b
    out = 0
    pw = 1
    for _ in range(k):
        out += ((a % p + b % p) % p) * pw
        a //= p
        b //= p
        pw *= p
    return out


@njit(cache=True, nogil=True)
def f_neg(a, p, k):
    if k == 1:
        return 0 if a == 0 else p - a
    if p == 2:
        return a
    out = 0
    pw = 1
    for _ in range(k):
        d = a % p
        if d:
            out += (p - d) * pw
        a //= p
        pw *= p
    return out


@njit(cache=True, nogil=True)
def f_mul(a, b, p, k, exp, log):
    if a == 0 or b == 0:
        return 0
    if k == 1:
        if p == 2:
            return 1
        return (a * b) % p
    n = exp.shape[0]
    return exp[(log[a] + log[b]) % n]


@njit(cache=True, nogil=True)
def f_inv(a, p, k, exp, log):
    if k == 1:
        t, newt, r, newr = 0, 1, p, a
        while newr != 0:
            qq = r // newr
            t, newt = newt, t - qq * newt
            r, newr = newr, r - qq * newr
        return t + p if t < 0 else t
    n = exp.shape[0]
    return exp[(n - log[a]) % n]


@njit(cache=True, nogil=True)
def _reduce_rows(a, full, p, k, exp, log):
    """Row-reduce ``a`` in place. Returns (rank, pivot columns)."""
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        s = f_inv(a[r, c], p, k, exp, log)
        if s != 1:
            for j in range(c, cols):
                a[r, j] = f_mul(a[r, j], s, p, k, exp, log)
        start = 0 if full else r + 1
        for i in range(start, rows):
            if i != r and a[i, c] != 0:
                f = f_neg(a[i, c], p, k)
                for j in range(c, cols):
                    if a[r, j] != 0:
                        a[i, j] = f_add(a[i, j], f_mul(f, a[r, j], p, k, exp, log), p, k)
        pivots[r] = c
        r += 1
    return r, pivots[:r]


@njit(cache=True, nogil=True)
def rref(m, p, k, exp, log):
    a = m.copy()
    r, pivots = _reduce_rows(a, True, p, k, exp, log)
    return a, pivots


@njit(cache=True, nogil=True)
def batch_rank(t, p, k, exp, log):
    """Ranks of each matrix in a (batch, rows, cols) stack."""
    out = np.empty(t.shape[0], np.int64)
    scratch = np.empty((t.shape[1], t.shape[2]), np.int64)
    for b in range(t.shape[0]):
        scratch[:, :] = t[b]
        r, _ = _reduce_rows(scratch, False, p, k, exp, log)
        out[b] = r
    return out


@njit(cache=True, nogil=True)
def matmul(a, b, p, k, exp, log):
    n, m = a.shape
    m2, l = b.shape
    out = np.zeros((n, l), np.int64)
    for i in range(n):
        for t in range(m):
            x = a[i, t]
            if x == 0:
                continue
            for j in range(l):
                y = b[t, j]
                if y != 0:
                    out[i, j] = f_add(out[i, j], f_mul(x, y, p, k, exp, log), p, k)
    return out


@njit(cache=True, nogil=True)
def stacked_inclusion(sa, sb, sc, p, k, exp, log):
    """out[i, j, l]: rowspace(sc[l]) <= rowspace(sa[i]) + rowspace(sb[j]).

    Zero padding rows are allowed in every stack. Each row of sc[l] is
    reduced against the RREF of the stacked pair; the first row with a
    nonzero residual settles the answer.
    """
    na, ra, c = sa.shape
    nb, rb, _ = sb.shape
    nc, rc, _ = sc.shape
    out = np.zeros((na, nb, nc), np.bool_)
    base = np.empty((ra + rb, c), np.int64)
    res = np.empty(c, np.int64)
    for i in range(na):
        for j in range(nb):
            base[:ra] = sa[i]
            base[ra:] = sb[j]
            r, piv = _reduce_rows(base, True, p, k, exp, log)
            for l in range(nc):
                inside = True
                for row in range(rc):
                    res[:] = sc[l, row]
                    for t in range(r):
                        pc = piv[t]
                        f = res[pc]
                        if f != 0:
                            f = f_neg(f, p, k)
                            for col in range(pc, c):
                                b = base[t, col]
                                if b != 0:
                                    res[col] = f_add(res[col], f_mul(f, b, p, k, exp, log), p, k)
                    for col in range(c):
                        if res[col] != 0:
                            inside = False
                            break
                    if not inside:
                        break
                out[i, j, l] = inside
    return out
