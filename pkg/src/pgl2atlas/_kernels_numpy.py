"""Vectorized numpy twins of the compiled kernels in ``_kernels_numba``."""

import numpy as np


def exp_table(p, r, modulus, gen, q):
    # multiplication by gen as an r x r matrix over F_p, then block doubling:
    # powers [k, 2k) are M^k applied to powers [0, k)
    basis = np.eye(r, dtype=np.int64)
    cols = [_mulmod(basis[i], gen, modulus, p, r) for i in range(r)]
    mult = np.stack(cols, axis=1)
    vecs = np.zeros((1, r), dtype=np.int64)
    vecs[0, 0] = 1
    step = mult.copy()
    while vecs.shape[0] < q - 1:
        vecs = np.concatenate([vecs, (vecs @ step.T) % p])
        step = (step @ step) % p
    vecs = vecs[: q - 1]
    weights = p ** np.arange(r, dtype=np.int64)
    return vecs @ weights


def _mulmod(a, b, modulus, p, r):
    prod = np.convolve(a, b) % p
    for deg in range(len(prod) - 1, r - 1, -1):
        c = prod[deg]
        if c:
            prod[deg - r : deg] = (prod[deg - r : deg] - c * modulus[:r]) % p
            prod[deg] = 0
    out = np.zeros(r, dtype=np.int64)
    out[: min(r, len(prod))] = prod[:r]
    return out


def _split(x, q):
    q2 = q * q
    q3 = q2 * q
    return x // q3, (x // q2) % q, (x // q) % q, x % q


def _pack(e, f, g, h, q, mul, inv):
    lead = np.where(e != 0, e, f)
    s = inv[lead]
    top = np.where(e != 0, 1, 0)
    second = np.where(e != 0, mul[f, s], 1)
    return ((top * q + second) * q + mul[g, s]) * q + mul[h, s]


def mat_mul(x, y, q, add, mul, inv):
    a1, b1, c1, d1 = _split(np.asarray(x, dtype=np.int64), q)
    a2, b2, c2, d2 = _split(np.asarray(y, dtype=np.int64), q)
    e = add[mul[a1, a2], mul[b1, c2]]
    f = add[mul[a1, b2], mul[b1, d2]]
    g = add[mul[c1, a2], mul[d1, c2]]
    h = add[mul[c1, b2], mul[d1, d2]]
    return _pack(e, f, g, h, q, mul, inv)


def mat_inv(x, q, neg, mul, inv):
    a, b, c, d = _split(np.asarray(x, dtype=np.int64), q)
    return _pack(d, neg[b], neg[c], a, q, mul, inv)


def element_orders(x, cap, q, add, mul, inv):
    ident = q * q * q + 1
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros(x.shape[0], dtype=np.int64)
    cur = x.copy()
    for k in range(1, cap + 1):
        hit = (cur == ident) & (out == 0)
        out[hit] = k
        if not (out == 0).any():
            break
        cur = mat_mul(cur, x, q, add, mul, inv)
    out[out == 0] = -1
    return out


def closure(gens, cap, q, add, mul, inv):
    ident = q * q * q + 1
    gens = np.asarray(gens, dtype=np.int64)
    seen = np.zeros(q**4, dtype=bool)
    seen[ident] = True
    frontier = np.array([ident], dtype=np.int64)
    found = [frontier]
    count = 1
    while frontier.size and gens.size:
        prods = mat_mul(np.repeat(frontier, gens.size), np.tile(gens, frontier.size), q, add, mul, inv)
        fresh = np.unique(prods[~seen[prods]])
        count += fresh.size
        if count > cap:
            return np.empty(0, dtype=np.int64)
        seen[fresh] = True
        found.append(fresh)
        frontier = fresh
    return np.sort(np.concatenate(found))


def conj_member(us, gens, members, q, add, mul, neg, inv):
    inside = np.zeros(q**4, dtype=bool)
    inside[np.asarray(members, dtype=np.int64)] = True
    us = np.asarray(us, dtype=np.int64)
    ui = mat_inv(us, q, neg, mul, inv)
    out = np.ones(us.shape[0], dtype=bool)
    for g in np.asarray(gens, dtype=np.int64):
        idx = np.nonzero(out)[0]
        if idx.size == 0:
            break
        c = mat_mul(mat_mul(us[idx], np.full(idx.size, g), q, add, mul, inv), ui[idx], q, add, mul, inv)
        out[idx] = inside[c]
    return out
