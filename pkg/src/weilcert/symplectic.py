"""Symplectic similitude groups GSp(2r, F_l): membership, sampling, characteristic polynomials.

Matrices are numpy int64 arrays reduced mod l.  The pairing is the standard
one, <v, w> = v^T J w with J = [[0, I], [-I, 0]].
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime, nextprime

from weilcert.algebra import upoly
from weilcert.algebra.field import field_make
from weilcert.algebra.resultant import resultant_field
from weilcert.errors import BudgetExceeded, EmptyInterval

TRANSVECTION_STEPS = 40
ENUMERATION_CAP = 10 ** 7
DEFAULT_ENUMERATION_BUDGET = 200_000
COMMON_EIGENVALUE_BOUND = 0.25


@dataclass(frozen=True)
class SympForm:
    r: int
    ell: int

    @property
    def J(self):
        r = self.r
        J = np.zeros((2 * r, 2 * r), dtype=np.int64)
        J[:r, r:] = np.eye(r, dtype=np.int64)
        J[r:, :r] = (-np.eye(r, dtype=np.int64)) % self.ell
        return J

    def pair(self, v, w):
        return int(np.asarray(v) @ self.J @ np.asarray(w)) % self.ell


@dataclass
class GSpElement:
    A: np.ndarray
    gamma: int
    ell: int

    @property
    def r(self):
        return self.A.shape[0] // 2

    def charpoly(self):
        return charpoly(self.A, self.ell)


@dataclass(frozen=True)
class CharPolyClass:
    """det(1 - T A) as ascending coefficients mod l, with its multiplicator."""

    f: tuple
    gamma: int
    ell: int

    @property
    def r(self):
        return (len(self.f) - 1) // 2

    def in_class(self):
        """Membership in M^gamma_r: f(0) = 1, degree 2r, a_{2r-i} = gamma^{r-i} a_i."""
        f, l, g = self.f, self.ell, self.gamma % self.ell
        if len(f) % 2 == 0 or f[0] % l != 1:
            return False
        r = (len(f) - 1) // 2
        if f[-1] % l != pow(g, r, l):
            return False
        return all(f[2 * r - i] % l == pow(g, r - i, l) * f[i] % l for i in range(r + 1))


def sp_order(r, ell):
    out = ell ** (r * r)
    for i in range(1, r + 1):
        out *= ell ** (2 * i) - 1
    return out


def gsp_order(r, ell):
    return (ell - 1) * sp_order(r, ell)


def lemma_bracket(r, ell):
    e = 2 * r * r
    return max(ell - 3, 0) ** e, (ell + 3) ** e


def gsp_check(A, ell, form=None):
    """The multiplicator gamma when A^T J A = gamma J with gamma != 0, else None."""
    A = np.asarray(A, dtype=np.int64) % ell
    n = A.shape[0]
    if A.shape != (n, n) or n % 2:
        raise ValueError("need a square matrix of even size")
    J = (form or SympForm(n // 2, ell)).J
    M = (A.T @ J @ A) % ell
    gamma = int(M[0, n // 2])
    if gamma == 0 or not np.array_equal(M, (gamma * J) % ell):
        return None
    return gamma


def similitude(r, ell, gamma):
    """diag(I, gamma I), a fixed element of multiplicator gamma."""
    d = np.concatenate([np.ones(r, dtype=np.int64), np.full(r, gamma % ell, dtype=np.int64)])
    return np.diag(d)


def transvection(v, a, ell, J):
    """x -> x + a <x, v> v."""
    v = np.asarray(v, dtype=np.int64)
    return (np.eye(len(v), dtype=np.int64) + a * np.outer(v, J @ v)) % ell


def _gl2_batch(ell, gamma, size, rng):
    """Exactly uniform 2x2 matrices of determinant gamma, as arrays (a, b, c, d).

    The first column is uniform among nonzero vectors; the second column is
    then uniform on the affine line of solutions of ad - bc = gamma.
    """
    first = rng.integers(1, ell * ell, size=size)
    a, c = first // ell, first % ell
    free = rng.integers(0, ell, size=size)
    gamma = gamma % ell
    b = np.empty(size, dtype=np.int64)
    d = np.empty(size, dtype=np.int64)
    nz = a != 0
    inv_a = np.array([pow(int(x), -1, ell) if x else 0 for x in range(ell)], dtype=np.int64)
    b[nz] = free[nz]
    d[nz] = (gamma + free[nz] * c[nz]) % ell * inv_a[a[nz]] % ell
    z = ~nz
    b[z] = (-gamma * inv_a[c[z]]) % ell
    d[z] = free[z]
    return a, b, c, d


def random_gsp(r, ell, gamma, rng, steps=TRANSVECTION_STEPS):
    """A random element of GSp(2r, F_l)^gamma.

    r = 1 is exactly uniform.  For r >= 2 the element is a product of random
    symplectic transvections times diag(I, gamma I), which is close to uniform.
    """
    if ell < 3 or not isprime(ell):
        raise ValueError("ell must be an odd prime")
    gamma %= ell
    if gamma == 0:
        raise ValueError("gamma must be nonzero mod ell")
    if r == 1:
        a, b, c, d = _gl2_batch(ell, gamma, 1, rng)
        return GSpElement(np.array([[a[0], b[0]], [c[0], d[0]]], dtype=np.int64), gamma, ell)
    J = SympForm(r, ell).J
    A = np.eye(2 * r, dtype=np.int64)
    for _ in range(steps):
        v = rng.integers(0, ell, size=2 * r)
        while not v.any():
            v = rng.integers(0, ell, size=2 * r)
        A = (A @ transvection(v, int(rng.integers(1, ell)), ell, J)) % ell
    A = (A @ similitude(r, ell, gamma)) % ell
    return GSpElement(A, gamma, ell)


def _hessenberg(H, p):
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % p
            if u:
                H[i] = [(x - u * y) % p for x, y in zip(H[i], H[m])]
                for row in H:
                    row[m] = (row[m] + u * row[i]) % p
    return H


def charpoly_monic(A, p):
    """det(X I - A) mod p, ascending coefficients (Hessenberg reduction)."""
    H = _hessenberg([[int(x) % p for x in row] for row in np.asarray(A)], p)
    n = len(H)
    polys = [[1]]
    for m in range(1, n + 1):
        # (X - h_mm) p_{m-1}
        prev = polys[m - 1]
        cur = [0] + prev
        for i, c in enumerate(prev):
            cur[i] = (cur[i] - H[m - 1][m - 1] * c) % p
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = prod * H[i][i - 1] % p
            coef = H[i - 1][m - 1] * prod % p
            if coef:
                for k, c in enumerate(polys[i - 1]):
                    cur[k] = (cur[k] - coef * c) % p
        polys.append(cur)
    return polys[n]


def charpoly(A, p):
    """det(1 - T A) mod p as an ascending tuple: the reversal of det(X - A)."""
    return tuple(reversed(charpoly_monic(A, p)))


def _charpoly_gl2(ell, gamma, trace):
    return (1, (-trace) % ell, gamma % ell)


def shares_root(f, h, ell):
    """True when f and h have a common root over the algebraic closure of F_l."""
    F = field_make(ell)
    a = upoly.trim([x % ell for x in f])
    b = upoly.trim([x % ell for x in h])
    return resultant_field(F, a, b) == 0


def enumerate_sp(r, ell, budget=DEFAULT_ENUMERATION_BUDGET):
    """Every element of Sp(2r, F_l), as flat tuples, by breadth-first search."""
    order = sp_order(r, ell)
    limit = min(budget, ENUMERATION_CAP)
    if order > limit:
        raise BudgetExceeded("symplectic-enumeration", order, limit)
    n = 2 * r
    J = SympForm(r, ell).J
    gens = []
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        gens.append(transvection(e, 1, ell, J))
        for j in range(i + 1, n):
            v = e.copy()
            v[j] = 1
            gens.append(transvection(v, 1, ell, J))
    start = tuple(np.eye(n, dtype=np.int64).ravel())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for flat in frontier:
            A = np.array(flat, dtype=np.int64).reshape(n, n)
            for G in gens:
                B = tuple(((A @ G) % ell).ravel())
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
        frontier = nxt
    if len(seen) != order:
        raise AssertionError(f"generated {len(seen)} elements, expected {order}")
    return seen


def charpoly_distribution(r, ell, gamma, budget=DEFAULT_ENUMERATION_BUDGET):
    """Counter f -> #{A in GSp^gamma : det(1 - TA) = f}, by exhaustive enumeration."""
    gamma %= ell
    if r == 1:
        limit = min(budget, ENUMERATION_CAP)
        if sp_order(1, ell) > limit or ell ** 4 > ENUMERATION_CAP:
            raise BudgetExceeded("symplectic-enumeration", sp_order(1, ell), limit)
        x = np.arange(ell, dtype=np.int64)
        a, b, c, d = np.meshgrid(x, x, x, x, indexing="ij")
        keep = (a * d - b * c) % ell == gamma
        traces = ((a + d) % ell)[keep]
        counts = np.bincount(traces, minlength=ell)
        return Counter({_charpoly_gl2(ell, gamma, t): int(counts[t]) for t in range(ell)
                        if counts[t]})
    S = similitude(r, ell, gamma)
    n = 2 * r
    out = Counter()
    for flat in enumerate_sp(r, ell, budget):
        A = (np.array(flat, dtype=np.int64).reshape(n, n) @ S) % ell
        out[charpoly(A, ell)] += 1
    return out


def count_charpoly(r, ell, gamma, f, budget=DEFAULT_ENUMERATION_BUDGET, dist=None):
    """Exact #{A in GSp(2r, F_l)^gamma : det(1 - TA) = f}.

    A nonzero count is checked against the bracket [(l-3)^{2r^2}, (l+3)^{2r^2}].
    """
    cls = f if isinstance(f, CharPolyClass) else CharPolyClass(tuple(int(x) % ell for x in f),
                                                               gamma % ell, ell)
    if len(cls.f) != 2 * r + 1 or not cls.in_class():
        return 0
    dist = dist if dist is not None else charpoly_distribution(r, ell, gamma, budget)
    n = dist.get(cls.f, 0)
    if n:
        lo, hi = lemma_bracket(r, ell)
        assert lo <= n <= hi, f"count {n} outside [{lo}, {hi}]"
    return n


def all_classes(r, ell, gamma):
    """Every polynomial of M^gamma_r (free coefficients a_1..a_r)."""
    import itertools

    gamma %= ell
    for head in itertools.product(range(ell), repeat=r):
        f = [1] + list(head) + [0] * r
        for i in range(r):
            f[2 * r - i] = pow(gamma, r - i, ell) * f[i] % ell
        yield CharPolyClass(tuple(f), gamma, ell)


@dataclass
class Proportion:
    value: float
    method: str
    samples: int
    sigma: float = 0.0
    bound: float = COMMON_EIGENVALUE_BOUND
    extra: dict = field(default_factory=dict)

    @property
    def within_bound(self):
        return self.value <= self.bound + 3 * self.sigma

    def to_json(self):
        return {"value": self.value, "method": self.method, "samples": self.samples,
                "sigma": self.sigma, "bound": self.bound, "within_bound": self.within_bound,
                **self.extra}


def coprime_proportion(r, ell, gamma, f, method="montecarlo", samples=10 ** 4, rng=None,
                       budget=DEFAULT_ENUMERATION_BUDGET):
    """#{A in GSp^gamma : det(1 - TA) shares a root with f} / #Sp(2r, F_l)."""
    gamma %= ell
    f = tuple(int(x) % ell for x in (f.f if isinstance(f, CharPolyClass) else f))
    verdicts = {}

    def bad(h):
        if h not in verdicts:
            verdicts[h] = shares_root(f, h, ell)
        return verdicts[h]

    if method == "exact":
        dist = charpoly_distribution(r, ell, gamma, budget)
        hits = sum(n for h, n in dist.items() if bad(h))
        return Proportion(hits / sp_order(r, ell), "exact", sum(dist.values()))
    if method != "montecarlo":
        raise ValueError(f"unknown method {method!r}")
    if rng is None:
        rng = np.random.default_rng(0)
    if r == 1:
        table = np.array([bad(_charpoly_gl2(ell, gamma, t)) for t in range(ell)])
        a, _, _, d = _gl2_batch(ell, gamma, samples, rng)
        hits = int(table[(a + d) % ell].sum())
    else:
        hits = sum(bad(random_gsp(r, ell, gamma, rng).charpoly()) for _ in range(samples))
    p = hits / samples
    return Proportion(p, "montecarlo", samples, math.sqrt(max(p * (1 - p), 0) / samples))


def ell_interval(D, N):
    return (4 * D) ** 4, 2 ** 11 * D ** (N * N)


def choose_ell(D, N, q):
    """Smallest prime in [(4D)^4, 2^11 D^{N^2}] that does not divide q.

    The torsion-freeness requirement on the cohomology is assumed, not checked.
    """
    lo, hi = ell_interval(D, N)
    ell = lo if isprime(lo) else nextprime(lo)
    while ell <= hi:
        if q % ell:
            return int(ell)
        ell = nextprime(ell)
    raise EmptyInterval(f"no prime in [{lo}, {hi}] coprime to {q}")


__all__ = ["SympForm", "GSpElement", "CharPolyClass", "gsp_check", "random_gsp", "charpoly",
           "charpoly_monic", "count_charpoly", "charpoly_distribution", "coprime_proportion",
           "choose_ell", "sp_order", "gsp_order", "lemma_bracket", "all_classes", "shares_root",
           "similitude", "transvection", "enumerate_sp", "Proportion", "ell_interval"]
