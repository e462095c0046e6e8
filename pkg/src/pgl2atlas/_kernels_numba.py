"""Compiled kernels.

Every kernel here has a vectorized twin in ``_kernels_numpy`` with the same
signature; ``_accel`` picks one of the two at import time.

Projective matrices travel as int64 codes ``((a*q + b)*q + c)*q + d`` of the
canonical representative (first nonzero entry of the top row equal to 1).
Field arithmetic goes through dense ``add``/``mul`` tables plus ``inv``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def exp_table(p, r, modulus, gen, q):
    # successive powers gen^0 .. gen^(q-2), encoded base p
    out = np.empty(q - 1, dtype=np.int64)
    cur = np.zeros(r, dtype=np.int64)
    cur[0] = 1
    prod = np.zeros(2 * r, dtype=np.int64)
    for k in range(q - 1):
        code = 0
        for i in range(r - 1, -1, -1):
            code = code * p + cur[i]
        out[k] = code
        prod[:] = 0
        for i in range(r):
            if cur[i] == 0:
                continue
            for j in range(r):
                prod[i + j] += cur[i] * gen[j]
        for i in range(2 * r - 1):
            prod[i] %= p
        for deg in range(2 * r - 2, r - 1, -1):
            c = prod[deg]
            if c != 0:
                shift = deg - r
                for i in range(r):
                    prod[shift + i] = (prod[shift + i] - c * modulus[i]) % p
                prod[deg] = 0
        for i in range(r):
            cur[i] = prod[i]
    return out


@njit(cache=True)
def _mul1(x, y, q, add, mul, inv):
    q2 = q * q
    q3 = q2 * q
    a1 = x // q3
    b1 = (x // q2) % q
    c1 = (x // q) % q
    d1 = x % q
    a2 = y // q3
    b2 = (y // q2) % q
    c2 = (y // q) % q
    d2 = y % q
    e = add[mul[a1, a2], mul[b1, c2]]
    f = add[mul[a1, b2], mul[b1, d2]]
    g = add[mul[c1, a2], mul[d1, c2]]
    h = add[mul[c1, b2], mul[d1, d2]]
    if e != 0:
        s = inv[e]
        return ((1 * q + mul[f, s]) * q + mul[g, s]) * q + mul[h, s]
    s = inv[f]
    return ((0 * q + 1) * q + mul[g, s]) * q + mul[h, s]


@njit(cache=True)
def _inv1(x, q, neg, mul, inv):
    q2 = q * q
    q3 = q2 * q
    a = x // q3
    b = (x // q2) % q
    c = (x // q) % q
    d = x % q
    # adjugate [[d, -b], [-c, a]]
    nb = neg[b]
    if d != 0:
        s = inv[d]
        return ((1 * q + mul[nb, s]) * q + mul[neg[c], s]) * q + mul[a, s]
    s = inv[nb]
    return ((0 * q + 1) * q + mul[neg[c], s]) * q + mul[a, s]


@njit(cache=True)
def mat_mul(x, y, q, add, mul, inv):
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = _mul1(x[i], y[i], q, add, mul, inv)
    return out


@njit(cache=True)
def mat_inv(x, q, neg, mul, inv):
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = _inv1(x[i], q, neg, mul, inv)
    return out


@njit(cache=True)
def element_orders(x, cap, q, add, mul, inv):
    ident = q * q * q + 1
    n = x.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        cur = x[i]
        k = 1
        while cur != ident and k < cap:
            cur = _mul1(cur, x[i], q, add, mul, inv)
            k += 1
        out[i] = k if cur == ident else -1
    return out


@njit(cache=True)
def closure(gens, cap, q, add, mul, inv):
    ident = q * q * q + 1
    seen = np.zeros(q * q * q * q, dtype=np.bool_)
    elems = np.empty(cap + 1, dtype=np.int64)
    elems[0] = ident
    seen[ident] = True
    n = 1
    head = 0
    while head < n:
        x = elems[head]
        head += 1
        for j in range(gens.shape[0]):
            y = _mul1(x, gens[j], q, add, mul, inv)
            if not seen[y]:
                if n >= cap:
                    return elems[:0]
                seen[y] = True
                elems[n] = y
                n += 1
    return np.sort(elems[:n])


@njit(cache=True)
def conj_member(us, gens, members, q, add, mul, neg, inv):
    """Mask of u in ``us`` with u g u^-1 in ``members`` for every g in ``gens``."""
    inside = np.zeros(q * q * q * q, dtype=np.bool_)
    for i in range(members.shape[0]):
        inside[members[i]] = True
    out = np.ones(us.shape[0], dtype=np.bool_)
    for i in range(us.shape[0]):
        u = us[i]
        ui = _inv1(u, q, neg, mul, inv)
        for j in range(gens.shape[0]):
            c = _mul1(_mul1(u, gens[j], q, add, mul, inv), ui, q, add, mul, inv)
            if not inside[c]:
                out[i] = False
                break
    return out
