"""Homogeneous forms over a FieldDesc, stored as {exponent tuple: coefficient}."""
from __future__ import annotations

from math import comb

from weilcert.algebra import upoly


def monomials(nvars, degree):
    """All exponent tuples of the given total degree, in lex-descending order."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


class Form:
    """A homogeneous polynomial in ``nvars`` variables over ``field``."""

    __slots__ = ("field", "nvars", "degree", "terms")

    def __init__(self, field, nvars, degree, terms=None):
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.terms = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars or sum(e) != degree:
                raise ValueError(f"monomial {e} is not of degree {degree} in {nvars} variables")
            if c:
                self.terms[e] = c

    def __repr__(self):
        return f"Form(deg={self.degree}, {self.terms})"

    def __eq__(self, other):
        return (isinstance(other, Form) and self.field == other.field
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    def copy(self):
        return Form(self.field, self.nvars, self.degree, dict(self.terms))

    def __call__(self, point):
        F = self.field
        acc = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = F.mul(t, F.pow(x, k))
                    if not t:
                        break
            if t:
                acc = F.add(acc, t)
        return acc

    def __add__(self, other):
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return Form(F, self.nvars, self.degree, out)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(1))

    def scale(self, c):
        F = self.field
        return Form(F, self.nvars, self.degree, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other):
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return Form(F, self.nvars, self.degree + other.degree, out)

    def power(self, n):
        out = Form.constant(self.field, self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    @staticmethod
    def constant(field, nvars, c):
        return Form(field, nvars, 0, {(0,) * nvars: c})

    @staticmethod
    def linear(field, coeffs):
        n = len(coeffs)
        return Form(field, n, 1, {tuple(1 if j == i else 0 for j in range(n)): c
                                  for i, c in enumerate(coeffs)})

    def partial(self, i):
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                k = F.from_int(e[i])
                if k:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = F.add(out.get(tuple(ne), 0), F.mul(c, k))
        return Form(F, self.nvars, max(self.degree - 1, 0), out)

    def gradient(self):
        return [self.partial(i) for i in range(self.nvars)]

    def map_coeffs(self, field, fn):
        return Form(field, self.nvars, self.degree, {e: fn(c) for e, c in self.terms.items()})

    def linear_substitute(self, M):
        """The form y -> self(M y); M is nvars x m (so the result has m variables)."""
        F = self.field
        m = len(M[0])
        lins = [Form.linear(F, list(M[i])) for i in range(self.nvars)]
        cache = {}

        def lin_pow(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = lins[i].power(k) if k else Form.constant(F, m, 1)
            return cache[key]

        out = Form(F, m, self.degree)
        for e, c in self.terms.items():
            t = Form.constant(F, m, c)
            for i, k in enumerate(e):
                if k:
                    t = t * lin_pow(i, k)
            out = out + t
        return out

    def leading_monomial(self):
        return max(self.terms)

    def coefficient_vector(self, monos):
        return [self.terms.get(e, 0) for e in monos]

    @staticmethod
    def from_vector(field, nvars, degree, monos, vec):
        return Form(field, nvars, degree, {e: c for e, c in zip(monos, vec) if c})

    def restrict_to_line(self, a, b):
        """Binary form s, t -> self(s*a + t*b) as coefficient list in (s:t) of t-degree i."""
        M = [[a[i], b[i]] for i in range(self.nvars)]
        g = self.linear_substitute(M)
        return [g.terms.get((self.degree - i, i), 0) for i in range(self.degree + 1)]

    def univariate_in(self, var, point):
        """Coefficients (ascending in x_var) after fixing the other variables to point."""
        F = self.field
        out = [0] * (self.degree + 1)
        for e, c in self.terms.items():
            t = c
            for j, (x, k) in enumerate(zip(point, e)):
                if j != var and k:
                    t = F.mul(t, F.pow(x, k))
            if t:
                out[e[var]] = F.add(out[e[var]], t)
        return upoly.trim(out)

    def to_json(self):
        F = self.field
        return {"degree": self.degree,
                "monomials": [{"exps": list(e), "coeff": list(F.coords(v))}
                              for e, v in sorted(self.terms.items(), reverse=True)]}

    @staticmethod
    def from_json(field, nvars, obj):
        terms = {}
        for m in obj["monomials"]:
            c = m["coeff"]
            c = field.from_coords([int(x) for x in c]) if isinstance(c, list) else int(c) % field.q
            terms[tuple(m["exps"])] = c
        return Form(field, nvars, int(obj["degree"]), terms)


def normal_form(f, G):
    """Remainder of f modulo the single form G (lex order on exponents).

    The result has no monomial divisible by LM(G); it is the unique
    representative of f modulo the multiples of G.
    """
    F = f.field
    lm = G.leading_monomial()
    inv = F.inv(G.terms[lm])
    terms = dict(f.terms)
    while True:
        cands = [e for e in terms if all(a >= b for a, b in zip(e, lm))]
        if not cands:
            break
        e = max(cands)
        c = F.mul(terms[e], inv)
        shift = tuple(a - b for a, b in zip(e, lm))
        for g_e, g_c in G.terms.items():
            t = tuple(a + b for a, b in zip(g_e, shift))
            v = F.sub(terms.get(t, 0), F.mul(c, g_c))
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
    return Form(F, f.nvars, f.degree, terms)


def standard_monomials(G, n):
    """Degree-n monomials not divisible by LM(G)."""
    lm = G.leading_monomial()
    return [e for e in monomials(G.nvars, n) if not all(a >= b for a, b in zip(e, lm))]


def random_form(field, nvars, degree, rng, density=1.0):
    terms = {}
    for e in monomials(nvars, degree):
        if rng.random() < density:
            terms[e] = field.random(rng)
    return Form(field, nvars, degree, terms)


def count_monomials(nvars, degree):
    return comb(degree + nvars - 1, nvars - 1)


def random_invertible(field, n, rng):
    from weilcert.algebra.linalg import det
    while True:
        M = [[field.random(rng) for _ in range(n)] for _ in range(n)]
        if det(field, M):
            return M


def taylor_shift(F, poly, origin):
    """The bivariate polynomial {(a, b): c} rewritten around origin = (u0, v0).

    Returns the dict of g(u, v) = poly(u0 + u, v0 + v).
    """
    u0, v0 = origin
    out = {}
    for (a, b), c in poly.items():
        for i in range(a + 1):
            ca = F.mul(F.from_int(comb(a, i)), F.pow(u0, a - i))
            if not ca:
                continue
            for j in range(b + 1):
                cb = F.mul(F.from_int(comb(b, j)), F.pow(v0, b - j))
                t = F.mul(c, F.mul(ca, cb))
                if t:
                    out[(i, j)] = F.add(out.get((i, j), 0), t)
    return {k: v for k, v in out.items() if v}


def dehomogenize(f, chart):
    """Bivariate dict {(a, b): c} of f with x_chart = 1; the other two variables in order."""
    others = [i for i in range(3) if i != chart]
    out = {}
    for e, c in f.terms.items():
        key = (e[others[0]], e[others[1]])
        out[key] = f.field.add(out.get(key, 0), c)
    return {k: v for k, v in out.items() if v}


__all__ = ["Form", "monomials", "normal_form", "standard_monomials", "random_form",
           "count_monomials", "random_invertible", "taylor_shift", "dehomogenize"]
