"""Finite fields F_{p^k} with exact arithmetic.

Elements are plain Python ints: the base-p digits of an element are its
coordinates in the power basis 1, T, ..., T^(k-1) of F_p[T]/(modulus).
So the prime subfield is {0, ..., p-1}, zero is 0 and one is 1.

Fields up to ``TABLE_LIMIT`` elements carry exp/log/Zech tables, which
make scalar arithmetic O(1) and allow numpy-vectorized kernels (used by
point counting).  Larger fields fall back to polynomial arithmetic.
"""
from __future__ import annotations

import functools
import itertools
import random

import numpy as np
from sympy import factorint, isprime

from weilcert.errors import BudgetExceeded, NonPrime

TABLE_LIMIT = 1 << 22
LIST_LIMIT = 1 << 20
FIELD_LIMIT = 1 << 64
# exhaustive factor search is used while the candidate count stays below this
EXHAUSTIVE_IRRED_LIMIT = 200_000


# -- polynomials over F_p as ascending coefficient lists ----------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    """Remainder of a modulo monic m over F_p."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim([x % p for x in a[:dm]])


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([x % p for x in out])


def _pmulmod(a, b, m, p):
    return _pmod(_pmul(a, b, p), m, p)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [x * inv % p for x in b]
        a, b = b, _pmod(a, bm, p)
    return a


def _monic_polys(d, p):
    for tail in itertools.product(range(p), repeat=d):
        yield list(reversed(tail)) + [1]


def is_irreducible(m, p):
    """Irreducibility of a monic polynomial over F_p.

    Exhaustive trial division by monic factors of degree <= k/2 when that is
    cheap enough, otherwise Rabin's test.
    """
    k = len(m) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    if sum(p ** d for d in range(1, k // 2 + 1)) <= EXHAUSTIVE_IRRED_LIMIT:
        for d in range(1, k // 2 + 1):
            for f in _monic_polys(d, p):
                if not _pmod(m, f, p):
                    return False
        return True
    return _rabin(m, p)


def _rabin(m, p):
    k = len(m) - 1
    x = [0, 1]
    if _ppowmod(x, p ** k, m, p) != _pmod(x, m, p):
        return False
    for r in factorint(k):
        h = _ppowmod(x, p ** (k // r), m, p)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_pgcd(m, diff, p)) > 1:
            return False
    return True


# -- the field -----------------------------------------------------------------

class FieldDesc:
    """The finite field F_{p^k} = F_p[T]/(modulus)."""

    def __init__(self, p, k, modulus):
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.q = p ** k
        self._pp = [p ** i for i in range(k + 1)]
        self._tables = self.q <= TABLE_LIMIT
        self._ext = {}
        self._emb = {}
        if self._tables:
            self._build_tables()

    # identity / serialization
    def __repr__(self):
        return f"FieldDesc(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FieldDesc) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus": [str(c) for c in self.modulus]}

    @staticmethod
    def from_json(obj):
        p, k = int(obj["p"]), int(obj["k"])
        mod = tuple(int(c) for c in obj.get("modulus", [])) or None
        return field_make(p, k, modulus=mod)

    # coordinates
    def coords(self, x):
        p = self.p
        out = []
        for _ in range(self.k):
            x, r = divmod(x, p)
            out.append(r)
        return out

    def from_coords(self, cs):
        x = 0
        for i, c in enumerate(cs):
            x += (c % self.p) * self._pp[i]
        return x

    def elements(self):
        return range(self.q)

    def random(self, rng):
        return rng.randrange(self.q)

    def random_nonzero(self, rng):
        return rng.randrange(1, self.q)

    # tables
    def _slow_mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        r = _pmulmod(self.coords(a), self.coords(b), list(self.modulus), self.p)
        return self.from_coords(r)

    def _slow_pow(self, a, e):
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    def _find_generator(self):
        n = self.q - 1
        primes = list(factorint(n)) if n > 1 else []
        for g in range(1, self.q):
            if all(self._slow_pow(g, n // r) != 1 for r in primes):
                return g
        raise AssertionError("no generator found")  # pragma: no cover

    def _build_tables(self):
        p, k, n = self.p, self.k, self.q - 1
        g = self._find_generator()
        self.generator = g
        # multiplication-by-g as a k x k matrix over F_p, then block doubling
        cols = [self.coords(self._slow_mul(g, self._pp[j])) for j in range(k)]
        M = np.array(cols, dtype=np.int64).T % p
        V = np.zeros((k, 1), dtype=np.int64)
        V[0, 0] = 1
        Mb = M.copy()
        while V.shape[1] < n:
            V = np.concatenate([V, (Mb @ V) % p], axis=1)
            Mb = (Mb @ Mb) % p
        V = V[:, :n]
        pw = np.array(self._pp[:k], dtype=np.int64)
        exp = pw @ V
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        # Zech: zech[d] = log(1 + g^d), -1 when 1 + g^d = 0
        plus1 = np.where(exp % p == p - 1, exp - (p - 1), exp + 1)
        zech = log[plus1]
        self.exp_table, self.log_table, self.zech_table = exp, log, zech
        if self.q <= LIST_LIMIT:
            self._exp, self._log, self._zech = exp.tolist(), log.tolist(), zech.tolist()
        else:
            self._exp, self._log, self._zech = exp, log, zech
        self._neg_one_log = 0 if p == 2 else n // 2

    # scalar arithmetic
    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        if self.p == 2:
            return a ^ b
        if self._tables:
            n = self.q - 1
            la = int(self._log[a])
            z = int(self._zech[(int(self._log[b]) - la) % n])
            if z < 0:
                return 0
            return int(self._exp[(la + z) % n])
        if self.k == 1:
            return (a + b) % self.p
        return self.from_coords([x + y for x, y in zip(self.coords(a), self.coords(b))])

    def neg(self, a):
        if not a or self.p == 2:
            return a
        if self.k == 1:
            return self.p - a
        if self._tables:
            return int(self._exp[(int(self._log[a]) + self._neg_one_log) % (self.q - 1)])
        return self.from_coords([-x for x in self.coords(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return 0
        if self._tables:
            return int(self._exp[(int(self._log[a]) + int(self._log[b])) % (self.q - 1)])
        return self._slow_mul(a, b)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._tables:
            return int(self._exp[(-int(self._log[a])) % (self.q - 1)])
        return self._slow_pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if not a:
            return 0
        if self._tables:
            return int(self._exp[int(self._log[a]) * e % (self.q - 1)])
        return self._slow_pow(a, e)

    def frobenius(self, x, e=1):
        """x ** (p ** e)."""
        if not x:
            return 0
        return self.pow(x, self.p ** (e % self.k))

    def from_int(self, n):
        """Image of the integer n under Z -> F_p -> this field."""
        return n % self.p

    def is_square(self, a):
        if not a or self.p == 2:
            return True
        if self._tables:
            return int(self._log[a]) % 2 == 0
        return self._slow_pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        """Some square root of a (None if a is a non-square)."""
        if not a:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if not self._tables:
            raise BudgetExceeded("field-table", self.q, TABLE_LIMIT)
        la = int(self._log[a])
        if la % 2:
            return None
        return int(self._exp[la // 2])

    # vectorized arithmetic on int64 arrays (requires tables)
    def vmul(self, a, b):
        n = self.q - 1
        la, lb = self.log_table[a], self.log_table[b]
        out = self.exp_table[(la + lb) % n]
        return np.where((la < 0) | (lb < 0), 0, out)

    def vadd(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p == 2:
            return a ^ b
        n = self.q - 1
        la, lb = self.log_table[a], self.log_table[b]
        z = self.zech_table[(lb - la) % n]
        s = np.where(z < 0, 0, self.exp_table[(la + z) % n])
        s = np.where(la < 0, b, s)
        return np.where(lb < 0, a, s)

    def vneg(self, a):
        a = np.asarray(a)
        if self.p == 2:
            return a
        return self.vmul(a, np.int64(self.neg(1)))

    def vpow_log(self, logs, e):
        """Elementwise x**e given log-array of x (-1 for zero)."""
        n = self.q - 1
        if e == 0:
            return np.ones_like(logs)
        out = self.exp_table[(np.where(logs < 0, 0, logs) * e) % n]
        return np.where(logs < 0, 0, out)

    def vis_square(self, a):
        la = self.log_table[a]
        return (la < 0) | (la % 2 == 0)

    def require_tables(self):
        if not self._tables:
            raise BudgetExceeded("field-table", self.q, TABLE_LIMIT)

    # subfields and extensions
    def extension(self, e):
        """The degree-e extension together with the embedding self -> ext."""
        if e == 1:
            return self, (lambda x: x)
        if e not in self._ext:
            big = field_make(self.p, self.k * e)
            self._ext[e] = (big, big.embedding_from(self))
        return self._ext[e]

    def embedding_from(self, small):
        """Embedding map small -> self for a subfield small (k | self.k)."""
        if small.p != self.p or self.k % small.k:
            raise ValueError(f"{small!r} is not a subfield of {self!r}")
        key = (small.k, small.modulus)
        if key in self._emb:
            return self._emb[key]
        if small.k == 1:
            fn = (lambda x: x)
        else:
            from weilcert.algebra import upoly
            m = [self.from_int(c) for c in small.modulus]
            beta = min(upoly.roots(self, m))
            powers = [1]
            for _ in range(small.k - 1):
                powers.append(self.mul(powers[-1], beta))
            cache = {}

            def fn(x, _powers=powers, _cache=cache):
                y = _cache.get(x)
                if y is None:
                    y = 0
                    for c, pw in zip(small.coords(x), _powers):
                        if c:
                            y = self.add(y, self.mul(c, pw))
                    _cache[x] = y
                return y
        self._emb[key] = fn
        return fn

    def embed_array(self, small, xs):
        fn = self.embedding_from(small)
        return np.array([fn(int(x)) for x in xs], dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _make_cached(p, k, modulus):
    return FieldDesc(p, k, modulus)


def field_make(p, k=1, seed=None, modulus=None, budget=FIELD_LIMIT):
    """Construct F_{p^k}.

    Without a seed the modulus is the lexicographically first monic
    irreducible polynomial (comparing coefficients from the top down);
    with a seed it is drawn at random from that seed.  Either way the
    result is deterministic.  Equal parameters return the same object.
    """
    if not isprime(p):
        raise NonPrime(p)
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** k > budget:
        raise BudgetExceeded("field-order", p ** k, budget)
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1 or not is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is not monic irreducible of degree {k}")
    elif k == 1:
        modulus = (0, 1)
    elif seed is None:
        for f in _monic_polys(k, p):
            if is_irreducible(f, p):
                modulus = tuple(f)
                break
    else:
        rng = random.Random(seed)
        while True:
            f = [rng.randrange(p) for _ in range(k)] + [1]
            if is_irreducible(f, p):
                modulus = tuple(f)
                break
    return _make_cached(p, k, modulus)
