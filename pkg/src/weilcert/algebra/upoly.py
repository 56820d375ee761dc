"""Univariate polynomials over a FieldDesc, as ascending coefficient lists."""
from __future__ import annotations

import random


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1


def add(F, a, b):
    n = max(len(a), len(b))
    return trim([F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def neg(F, a):
    return [F.neg(x) for x in a]


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c):
    if not c:
        return []
    return trim([F.mul(x, c) for x in a])


def mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F, a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = F.inv(b[-1])
    quo = [0] * (len(a) - db)
    rem = list(a)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if c:
            t = F.mul(c, inv)
            quo[i - db] = t
            for j in range(db + 1):
                if b[j]:
                    rem[i - db + j] = F.sub(rem[i - db + j], F.mul(t, b[j]))
    return trim(quo), trim(rem[:db])


def rem(F, a, b):
    return divmod_(F, a, b)[1]


def monic(F, a):
    a = trim(a)
    if not a:
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(F, a, b)
    return monic(F, a)


def mulmod(F, a, b, m):
    return rem(F, mul(F, a, b), m)


def powmod(F, a, e, m):
    result = [1]
    base = rem(F, a, m)
    while e:
        if e & 1:
            result = mulmod(F, result, base, m)
        e >>= 1
        if e:
            base = mulmod(F, base, base, m)
    return rem(F, result, m)


def deriv(F, a):
    return trim([F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def from_roots(F, rs):
    out = [1]
    for r in rs:
        out = mul(F, out, [F.neg(r), 1])
    return out


def pth_root(F, a):
    """g with g**p == a, for a polynomial in x**p."""
    p = F.p
    e = F.q // p  # c -> c**(q/p) inverts Frobenius on F
    return trim([F.pow(a[i], e) for i in range(0, len(a), p)])


def squarefree_part(F, a):
    """Product of the distinct monic irreducible factors of a."""
    a = monic(F, a)
    if len(a) <= 2:
        return a
    d = deriv(F, a)
    if not d:
        return squarefree_part(F, pth_root(F, a))
    g = gcd(F, a, d)
    w = divmod_(F, a, g)[0]
    # whatever survives in g after stripping factors of w is a p-th power
    while True:
        h = gcd(F, g, w)
        if len(h) == 1:
            break
        g = divmod_(F, g, h)[0]
    if len(g) == 1:
        return w
    r = squarefree_part(F, pth_root(F, g))
    return monic(F, mul(F, w, divmod_(F, r, gcd(F, r, w))[0]))


def _split_linear(F, g, rng, out):
    """Roots of a monic product of distinct linear factors."""
    if len(g) == 1:
        return
    if len(g) == 2:
        out.append(F.neg(g[0]) if g[1] == 1 else F.div(F.neg(g[0]), g[1]))
        return
    while True:
        a = F.random(rng)
        if F.p == 2:
            t = rem(F, [0, a or 1], g)
            acc, cur = list(t), list(t)
            for _ in range(F.k - 1):
                cur = mulmod(F, cur, cur, g)
                acc = add(F, acc, cur)
            h = acc
        else:
            h = sub(F, powmod(F, [a, 1], (F.q - 1) // 2, g), [1])
        d = gcd(F, g, h)
        if 1 < len(d) < len(g):
            _split_linear(F, d, rng, out)
            _split_linear(F, divmod_(F, g, d)[0], rng, out)
            return


def roots(F, f, seed=0):
    """Distinct roots of f lying in F, sorted."""
    f = monic(F, f)
    if not f:
        raise ValueError("roots of the zero polynomial")
    if len(f) == 1:
        return []
    xq = powmod(F, [0, 1], F.q, f)
    g = gcd(F, f, sub(F, xq, [0, 1]))
    out = []
    _split_linear(F, g, random.Random(seed), out)
    return sorted(out)


def root_multiplicity(F, f, r):
    m = 0
    lin = [F.neg(r), 1]
    f = trim(f)
    while f:
        q, rr = divmod_(F, f, lin)
        if rr:
            break
        m += 1
        f = q
    return m


def ddf(F, f):
    """Distinct-degree factorization of a squarefree monic f.

    Returns a list of (e, g_e) where g_e is the product of the irreducible
    factors of degree e.
    """
    f = monic(F, f)
    out = []
    h = [0, 1]
    e = 0
    while len(f) - 1 >= 2 * (e + 1):
        e += 1
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, [0, 1]))
        if len(g) > 1:
            out.append((e, g))
            f = divmod_(F, f, g)[0]
            h = rem(F, h, f)
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def map_coeffs(a, fn):
    return trim([fn(c) for c in a])
